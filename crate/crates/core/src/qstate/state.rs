use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{DensityMatrix, Sign, STATE_TOL};
use crate::error::{Error, Result};
use crate::qlin::{CVector, ONE, ZERO};

/// Normalized amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: CVector,
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiPlus,
    PhiMinus,
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotQubitDimension(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.dim())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before wrapping it.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        Self {
            n_qubits,
            amplitudes: CVector::from_raw(amplitudes),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes: self.amplitudes.kron(&other.amplitudes),
        }
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.amplitudes.inner(&other.amplitudes)
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Exact amplitude comparison, global phase included.
    pub fn max_deviation(&self, other: &PureState) -> f64 {
        self.amplitudes.max_abs_diff(&other.amplitudes)
    }

    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }

    /// Equality up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.fidelity(other)
            .map(|f| (1.0 - f).abs() <= tol)
            .unwrap_or(false)
    }

    pub fn scale_phase(&self, phase: Complex64) -> PureState {
        PureState {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.scale(phase),
        }
    }

    /// For a single qubit `a|0> + b|1>`, the orthogonal state `-b*|0> + a*|1>`.
    ///
    /// This convention maps `|+x>` to the `(-1, 1)/sqrt 2` form of `|-x>`.
    pub fn orthogonal(&self) -> Result<PureState> {
        if self.n_qubits != 1 {
            return Err(Error::QubitCountMismatch {
                expected: 1,
                actual: self.n_qubits,
            });
        }
        let a = self.amplitudes[0];
        let b = self.amplitudes[1];
        Ok(PureState::from_raw(vec![-b.conj(), a.conj()]))
    }

    /// Contract qubit `qubit` with `<e|` and renormalize the remaining register.
    ///
    /// Returns the Born weight `|<e|_q psi|^2` and, when it is nonzero, the
    /// conditional state of the other qubits (in their original order).
    pub fn project_out(&self, qubit: usize, e: &CVector) -> Result<(f64, Option<PureState>)> {
        if self.n_qubits < 2 {
            return Err(Error::InvalidArgument(
                "cannot project out the only qubit of a register".into(),
            ));
        }
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        if e.dim() != 2 {
            return Err(Error::ShapeMismatch {
                left: (2, 1),
                right: (e.dim(), 1),
            });
        }
        let shift = self.n_qubits - 1 - qubit;
        let low_mask = (1usize << shift) - 1;
        let amps = self.amplitudes.entries();
        let mut rest = Vec::with_capacity(self.dim() / 2);
        for r in 0..self.dim() / 2 {
            let i0 = ((r & !low_mask) << 1) | (r & low_mask);
            let i1 = i0 | (1 << shift);
            rest.push(e[0].conj() * amps[i0] + e[1].conj() * amps[i1]);
        }
        let weight: f64 = rest.iter().map(|z| z.norm_sqr()).sum();
        if weight <= super::measure::ZERO_BRANCH_PROB {
            return Ok((weight, None));
        }
        let inv = Complex64::new(1.0 / weight.sqrt(), 0.0);
        let rest = rest.into_iter().map(|z| z * inv).collect();
        Ok((weight, Some(PureState::from_raw(rest))))
    }
}

/// Computational basis state; bit 0 is `|+z>`, bit 1 is `|-z>`.
pub fn basis_state(bits: &[u8]) -> Result<PureState> {
    if bits.is_empty() {
        return Err(Error::InvalidArgument("empty bit list".into()));
    }
    let mut index = 0usize;
    for &b in bits {
        if b > 1 {
            return Err(Error::InvalidArgument(format!("bit value {b}")));
        }
        index = (index << 1) | b as usize;
    }
    let dim = 1usize << bits.len();
    Ok(PureState::from_raw(CVector::basis(dim, index).into_entries()))
}

/// `|+x> = (1, 1)/sqrt 2` and `|-x> = (-1, 1)/sqrt 2`.
pub fn x_eigenstate(sign: Sign) -> PureState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    match sign {
        Sign::Plus => PureState::from_raw(vec![h, h]),
        Sign::Minus => PureState::from_raw(vec![-h, h]),
    }
}

pub fn bell_state(kind: BellKind) -> PureState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let amps = match kind {
        BellKind::PsiMinus => vec![ZERO, h, -h, ZERO],
        BellKind::PsiPlus => vec![ZERO, h, h, ZERO],
        BellKind::PhiPlus => vec![h, ZERO, ZERO, h],
        BellKind::PhiMinus => vec![h, ZERO, ZERO, -h],
    };
    PureState::from_raw(amps)
}

/// `(|0...0> + |1...1>)/sqrt 2` on `n` qubits; for `n = 1` this is `|+x>`.
pub fn ghz_state(n: usize) -> Result<PureState> {
    if n == 0 {
        return Err(Error::InvalidArgument("GHZ state needs at least one qubit".into()));
    }
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] += Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(PureState::from_raw(amps))
}

/// `|psi><psi|`.
pub fn to_density(state: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(state)
}

impl PureState {
    pub fn up_z() -> PureState {
        PureState::from_raw(vec![ONE, ZERO])
    }

    pub fn down_z() -> PureState {
        PureState::from_raw(vec![ZERO, ONE])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(state: &PureState) -> Vec<f64> {
        state.amplitudes().entries().iter().map(|z| z.re).collect()
    }

    #[test]
    fn basis_states() {
        assert_eq!(real(&basis_state(&[0]).unwrap()), vec![1.0, 0.0]);
        assert_eq!(real(&basis_state(&[1]).unwrap()), vec![0.0, 1.0]);
        assert_eq!(real(&basis_state(&[0, 1]).unwrap()), vec![0.0, 1.0, 0.0, 0.0]);
        assert!(basis_state(&[]).is_err());
        assert!(basis_state(&[2]).is_err());
    }

    #[test]
    fn x_eigenstates_are_orthogonal() {
        let p = x_eigenstate(Sign::Plus);
        let m = x_eigenstate(Sign::Minus);
        assert_eq!(real(&p), vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert_eq!(real(&m), vec![-FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert!(p.inner(&m).unwrap().norm() < 1e-15);
        assert_eq!(p.orthogonal().unwrap(), m);
    }

    #[test]
    fn bell_vectors() {
        let h = FRAC_1_SQRT_2;
        assert_eq!(real(&bell_state(BellKind::PsiMinus)), vec![0.0, h, -h, 0.0]);
        assert_eq!(real(&bell_state(BellKind::PhiPlus)), vec![h, 0.0, 0.0, h]);
        assert_eq!(real(&bell_state(BellKind::PhiMinus)), vec![h, 0.0, 0.0, -h]);
        assert_eq!(real(&bell_state(BellKind::PsiPlus)), vec![0.0, h, h, 0.0]);
    }

    #[test]
    fn new_rejects_bad_vectors() {
        assert!(matches!(
            PureState::new(CVector::from_real(&[1.0, 1.0]).unwrap()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            PureState::new(CVector::from_real(&[1.0, 0.0, 0.0]).unwrap()),
            Err(Error::NotQubitDimension(3))
        ));
        assert!(PureState::normalized(CVector::from_real(&[3.0, 4.0]).unwrap()).is_ok());
    }

    #[test]
    fn ghz_one_qubit_is_plus_x() {
        assert!(ghz_state(1)
            .unwrap()
            .approx_eq(&x_eigenstate(Sign::Plus), 1e-15));
        let g3 = ghz_state(3).unwrap();
        assert_eq!(g3.n_qubits(), 3);
        assert!((g3.amplitudes()[7].re - FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn project_out_of_singlet() {
        let singlet = bell_state(BellKind::PsiMinus);
        let e_up = PureState::up_z();
        let (w, alice) = singlet.project_out(1, e_up.amplitudes()).unwrap();
        assert!((w - 0.5).abs() < 1e-15);
        assert!(alice
            .unwrap()
            .approx_eq_up_to_phase(&PureState::down_z(), 1e-15));
        assert!(PureState::up_z().project_out(0, e_up.amplitudes()).is_err());
    }

    #[test]
    fn phase_comparisons() {
        let phi = bell_state(BellKind::PhiMinus);
        let neg = phi.scale_phase(Complex64::new(-1.0, 0.0));
        assert!(!phi.approx_eq(&neg, 1e-12));
        assert!(phi.approx_eq_up_to_phase(&neg, 1e-12));
    }
}
