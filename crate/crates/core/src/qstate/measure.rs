use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{PureState, STATE_TOL};
use crate::error::{Error, Result};
use crate::qlin::{CMatrix, CVector};

/// Branch weights at or below this are treated as impossible outcomes.
pub(crate) const ZERO_BRANCH_PROB: f64 = 1e-24;

/// Unit direction in real space along which a spin is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAxis {
    n: [f64; 3],
}

impl MeasurementAxis {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidAxis(n));
        }
        Ok(Self { n })
    }

    /// Axis at polar angle `theta` from +z and azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            n: [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    pub fn x() -> Self {
        Self { n: [1.0, 0.0, 0.0] }
    }

    pub fn y() -> Self {
        Self { n: [0.0, 1.0, 0.0] }
    }

    pub fn z() -> Self {
        Self { n: [0.0, 0.0, 1.0] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    /// `|+n>` or `|-n>`.
    ///
    /// `|+n> = (cos t/2, e^{i phi} sin t/2)`, `|-n> = (-e^{-i phi} sin t/2, cos t/2)`.
    /// Along x this yields `(1,1)/sqrt 2` and `(-1,1)/sqrt 2`.
    pub fn eigenstate(&self, outcome: SpinOutcome) -> CVector {
        let [nx, ny, nz] = self.n;
        let cos_half = ((1.0 + nz) / 2.0).max(0.0).sqrt();
        let sin_half = ((1.0 - nz) / 2.0).max(0.0).sqrt();
        let rho = (nx * nx + ny * ny).sqrt();
        let phase = if rho > 0.0 {
            Complex64::new(nx / rho, ny / rho)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let entries = match outcome {
            SpinOutcome::Up => vec![Complex64::new(cos_half, 0.0), phase * sin_half],
            SpinOutcome::Down => vec![-phase.conj() * sin_half, Complex64::new(cos_half, 0.0)],
        };
        CVector::from_raw(entries)
    }
}

/// Result of a spin projection measurement, `+1/2` or `-1/2` in units of hbar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinOutcome {
    Up,
    Down,
}

impl SpinOutcome {
    pub fn value(self) -> f64 {
        match self {
            SpinOutcome::Up => 0.5,
            SpinOutcome::Down => -0.5,
        }
    }

    /// `+1` for up, `-1` for down.
    pub fn sign(self) -> i64 {
        match self {
            SpinOutcome::Up => 1,
            SpinOutcome::Down => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SpinOutcome::Up => SpinOutcome::Down,
            SpinOutcome::Down => SpinOutcome::Up,
        }
    }
}

/// `S_n = (n . sigma) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservable {
    axis: MeasurementAxis,
    matrix: CMatrix,
}

impl SpinObservable {
    pub fn new(axis: MeasurementAxis) -> Self {
        let [nx, ny, nz] = axis.n;
        let half = |x: f64| Complex64::new(0.5 * x, 0.0);
        let matrix = CMatrix::pauli_x()
            .scale(half(nx))
            .add(&CMatrix::pauli_y().scale(half(ny)))
            .and_then(|m| m.add(&CMatrix::pauli_z().scale(half(nz))))
            .expect("2x2 shapes");
        Self { axis, matrix }
    }

    pub fn axis(&self) -> MeasurementAxis {
        self.axis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// One outcome of a projective spin measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: SpinOutcome,
    pub probability: f64,
    /// Collapsed state, `None` when the branch has zero probability.
    pub post_state: Option<PureState>,
}

/// Both branches of measuring `qubit` along `axis`, up first.
///
/// Zero-probability branches are kept with `post_state: None`.
pub fn measure_branches(
    state: &PureState,
    axis: &MeasurementAxis,
    qubit: usize,
) -> Result<Vec<MeasurementBranch>> {
    if qubit >= state.n_qubits() {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: state.n_qubits(),
        });
    }
    Ok([SpinOutcome::Up, SpinOutcome::Down]
        .into_iter()
        .map(|outcome| collapse(state, &axis.eigenstate(outcome), qubit, outcome))
        .collect())
}

/// Draw one branch with its Born probability.
pub fn measure_sample<R: Rng + ?Sized>(
    state: &PureState,
    axis: &MeasurementAxis,
    qubit: usize,
    rng: &mut R,
) -> Result<MeasurementBranch> {
    let mut branches = measure_branches(state, axis, qubit)?;
    let u: f64 = rng.random();
    let down = branches.pop().expect("two branches");
    let up = branches.pop().expect("two branches");
    Ok(if u < up.probability && up.post_state.is_some() {
        up
    } else if down.post_state.is_some() {
        down
    } else {
        up
    })
}

/// `|e><e|_q psi`, normalized.
fn collapse(state: &PureState, e: &CVector, qubit: usize, outcome: SpinOutcome) -> MeasurementBranch {
    let n = state.n_qubits();
    let shift = n - 1 - qubit;
    let bit = 1usize << shift;
    let amps = state.amplitudes().entries();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    let mut probability = 0.0;
    for i0 in (0..amps.len()).filter(|i| i & bit == 0) {
        let i1 = i0 | bit;
        let overlap = e[0].conj() * amps[i0] + e[1].conj() * amps[i1];
        probability += overlap.norm_sqr();
        out[i0] = e[0] * overlap;
        out[i1] = e[1] * overlap;
    }
    let post_state = (probability > ZERO_BRANCH_PROB).then(|| {
        let inv = Complex64::new(1.0 / probability.sqrt(), 0.0);
        PureState::from_raw(out.into_iter().map(|z| z * inv).collect())
    });
    MeasurementBranch {
        outcome,
        probability,
        post_state,
    }
}
