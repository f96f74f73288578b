//! Pure states, density matrices, gates and spin measurements on qubit registers.
//!
//! Qubit 0 is the most significant bit of a basis label, matching the layout
//! of [`crate::qlin`]. Basis value 0 is spin up along z (`|+z>`), 1 is spin down.

mod density;
mod gate;
mod measure;
mod state;

pub use density::{expectation, reduced_state, DensityMatrix};
pub use gate::{apply_gate, cnot, known_state_cloner, Gate};
pub use measure::{
    measure_branches, measure_sample, MeasurementAxis, MeasurementBranch, SpinObservable,
    SpinOutcome,
};
pub use state::{basis_state, bell_state, ghz_state, to_density, x_eigenstate, BellKind, PureState};

/// Tolerance on state normalization and gate unitarity.
pub const STATE_TOL: f64 = 1e-12;

/// Sign label for the `|+n>` / `|-n>` eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}
