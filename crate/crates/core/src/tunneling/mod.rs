//! Split-operator Trotter circuits for a particle on a `2^n`-site lattice.
//!
//! One step is `P`, then the inverse transform, the kinetic diagonal `D`, and
//! the forward transform (execution order).

mod kinetic;
mod lattice;
mod potential;
mod step;
mod synth;

pub use kinetic::{
    build_d_from_constants, build_paper_d, kinetic_phase_diagonal, momentum_eigenvalues,
    DConstants, THREE_QUBIT_C_CLOSED_FORM, THREE_QUBIT_C_ROUNDED, THREE_QUBIT_GAMMA,
    TWO_QUBIT_C, TWO_QUBIT_GAMMA,
};
pub use lattice::LatticeWavefunction;
pub use potential::{build_potential, PotentialKind, PotentialSpec};
pub use step::{
    evolve, evolve_states, kinetic_block, paper_kinetic_block_with, trotter_step, CircuitMode,
    TrotterParams,
};
pub use synth::synthesize_diagonal;
