//! State-vector simulation of lattice quantum tunneling with split-operator
//! Trotter circuits, a dense Hamiltonian reference, device noise and state
//! tomography.

pub mod bit_order;
pub mod circuit;
pub mod density;
pub mod error;
pub mod gate;
pub mod linalg;
pub mod noise;
pub mod oracle;
pub mod qasm;
pub mod scenario;
mod schema;
pub mod tunneling;
pub mod state;
pub mod tomography;

pub use bit_order::{BitOrder, LATTICE_BIT_ORDER};
pub use circuit::{build_iqft, build_paper_iqft, build_qft, Circuit};
pub use density::{density_from_state, fidelity, DensityMatrix};
pub use error::{Error, Result};
pub use gate::GateOp;
pub use qasm::{export_qasm, import_qasm};
pub use state::{apply_gate, run_circuit, ShotCounts, StateVector};
