use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// Deserializes TOML, reporting the failing field path on schema errors.
pub(crate) fn from_toml<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = toml::de::Deserializer::parse(text).map_err(|e| Error::Schema {
        path: String::new(),
        message: e.to_string().trim().to_string(),
    })?;
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().message().trim().to_string(),
    })
}

pub(crate) fn check_probability(path: String, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Schema {
            path,
            message: format!("probability {p} outside [0, 1]"),
        });
    }
    Ok(())
}
