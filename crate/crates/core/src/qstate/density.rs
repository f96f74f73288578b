use num_complex::Complex64;

use super::state::qubits_for_dim;
use super::{Gate, PureState, SpinObservable};
use crate::error::{Error, Result};
use crate::qlin::{
    dagger, hermitian_eigenvalues, kron, matmul, partial_trace, trace, CMatrix, SubsystemShape,
    HERMITIAN_TOL,
};

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite operator on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        let n_qubits = qubits_for_dim(matrix.rows())?;
        let asym = matrix.hermitian_asymmetry()?;
        if asym > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max asymmetry {asym:e})"
            )));
        }
        let tr = trace(&matrix)?;
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Caller guarantees the invariants (e.g. the result of a CPTP map on a valid state).
    pub(crate) fn from_raw(matrix: CMatrix) -> Self {
        let n_qubits = matrix.rows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amplitudes();
        Self::from_raw(v.outer(v))
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("zero-qubit register".into()));
        }
        let dim = 1usize << n_qubits;
        Ok(Self::from_raw(
            CMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        ))
    }

    /// Convex combination `sum p_i rho_i`. Weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidArgument("empty mixture".into()));
        };
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "mixture weights must be a probability vector (sum {total})"
            )));
        }
        let dim = first.matrix.rows();
        let mut acc = CMatrix::zeros(dim, dim);
        for (p, rho) in parts {
            acc = acc.add(&rho.matrix.scale(Complex64::new(*p, 0.0)))?;
        }
        Ok(Self::from_raw(acc))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    /// `U rho U^dag` with `g` acting on `targets`.
    pub fn evolve(&self, g: &Gate, targets: &[usize]) -> Result<DensityMatrix> {
        let u = g.embed(self.n_qubits, targets)?;
        let out = matmul(&matmul(&u, &self.matrix)?, &dagger(&u))?;
        Ok(Self::from_raw(out))
    }

    pub fn max_deviation(&self, other: &DensityMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        reduced_state(self, keep)
    }
}

/// Partial trace over every qubit not in `keep`.
pub fn reduced_state(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let shape = SubsystemShape::qubits(rho.n_qubits)?;
    let m = partial_trace(&rho.matrix, &shape, keep)?;
    Ok(DensityMatrix::from_raw(m))
}

/// `Tr(rho S)` with `obs` on `qubit` and identity elsewhere.
pub fn expectation(rho: &DensityMatrix, obs: &SpinObservable, qubit: usize) -> Result<f64> {
    if qubit >= rho.n_qubits {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: rho.n_qubits,
        });
    }
    let local = if rho.n_qubits == 1 {
        rho.clone()
    } else {
        reduced_state(rho, &[qubit])?
    };
    Ok(trace(&matmul(&local.matrix, obs.matrix())?)?.re)
}
