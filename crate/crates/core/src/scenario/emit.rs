use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bit_order::basis_label;
use crate::error::{Error, Result};

/// One probability row per time step, columns indexed by lattice site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilitySeries {
    pub n_qubits: usize,
    pub rows: Vec<Vec<f64>>,
}

impl ProbabilitySeries {
    pub fn new(n_qubits: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::InvalidArgument(format!(
                "row of length {} in a {n_qubits}-qubit series",
                r.len()
            )));
        }
        Ok(ProbabilitySeries { n_qubits, rows })
    }

    pub fn labels(&self) -> Vec<String> {
        (0..1usize << self.n_qubits)
            .map(|k| basis_label(k, self.n_qubits))
            .collect()
    }

    pub fn last(&self) -> &[f64] {
        self.rows.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Largest entrywise difference over all rows.
    pub fn max_deviation(&self, other: &ProbabilitySeries) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Plain decimal with exactly 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    let sci = format!("{v:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 0 {
        let point = exp as usize + 1;
        if point >= digits.len() {
            format!("{digits}{}", "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{body}")
}

/// Header `step,state_00,…,p_sum`, one line per row.
pub fn csv_string(series: &ProbabilitySeries) -> String {
    let mut out = String::from("step");
    for l in series.labels() {
        let _ = write!(out, ",state_{l}");
    }
    out.push_str(",p_sum\n");
    for (t, row) in series.rows.iter().enumerate() {
        let _ = write!(out, "{t}");
        for p in row {
            let _ = write!(out, ",{}", format_sig12(*p));
        }
        let _ = writeln!(out, ",{}", format_sig12(row.iter().sum()));
    }
    out
}

pub fn emit_csv(series: &ProbabilitySeries, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(series)).map_err(|e| Error::io(path, e))
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];
const PLOT_HEIGHT: f64 = 300.0;
const BAR_WIDTH: f64 = 12.0;
const GROUP_GAP: f64 = 16.0;
const LEFT: f64 = 60.0;
const TOP: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Grouped bars, one group per time step, one bar per basis state.
pub fn svg_string(series: &ProbabilitySeries, title: &str) -> String {
    let bars = 1usize << series.n_qubits;
    let group_w = bars as f64 * BAR_WIDTH + GROUP_GAP;
    let plot_w = series.rows.len().max(1) as f64 * group_w;
    let width = LEFT + plot_w + 110.0;
    let height = TOP + PLOT_HEIGHT + 60.0;
    let base = TOP + PLOT_HEIGHT;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    for i in 0..=4 {
        let p = i as f64 / 4.0;
        let y = base - p * PLOT_HEIGHT;
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.3}" x2="{:.1}" y2="{y:.3}" stroke="#dddddd"/><text x="{:.1}" y="{:.3}" text-anchor="end">{p:.2}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}" stroke="black"/><line x1="{LEFT}" y1="{base}" x2="{:.1}" y2="{base}" stroke="black"/>"#,
        LEFT + plot_w
    );
    let labels = series.labels();
    for (t, row) in series.rows.iter().enumerate() {
        let gx = LEFT + t as f64 * group_w + GROUP_GAP / 2.0;
        let _ = writeln!(s, r#"<g class="step" data-step="{t}">"#);
        for (k, &p) in row.iter().enumerate() {
            let h = p.clamp(0.0, 1.0) * PLOT_HEIGHT;
            let _ = writeln!(
                s,
                r#"<rect class="bar" data-state="{}" data-p="{}" x="{:.3}" y="{:.3}" width="{BAR_WIDTH}" height="{h:.3}" fill="{}"/>"#,
                labels[k],
                format_sig12(p),
                gx + k as f64 * BAR_WIDTH,
                base - h,
                PALETTE[k % PALETTE.len()]
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.1}" text-anchor="middle">{t}</text></g>"#,
            gx + bars as f64 * BAR_WIDTH / 2.0,
            base + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">time step</text>"#,
        LEFT + plot_w / 2.0,
        base + 40.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">probability</text>"#,
        TOP + PLOT_HEIGHT / 2.0,
        TOP + PLOT_HEIGHT / 2.0
    );
    let lx = LEFT + plot_w + 20.0;
    for (k, l) in labels.iter().enumerate() {
        let y = TOP + k as f64 * 18.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.1}" y="{y:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{:.1}">|{l}&#x27E9;</text>"#,
            PALETTE[k % PALETTE.len()],
            lx + 18.0,
            y + 10.0
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg_bars(series: &ProbabilitySeries, title: &str, path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(series, title)).map_err(|e| Error::io(path, e))
}
