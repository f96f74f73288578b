use num_complex::Complex64;

use super::state::qubits_for_dim;
use super::{PureState, STATE_TOL};
use crate::error::{Error, Result};
use crate::qlin::{dagger, matmul, CMatrix};

/// Unitary acting on `arity` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    arity: usize,
    matrix: CMatrix,
}

impl Gate {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        let arity = qubits_for_dim(matrix.rows())?;
        let deviation = unitarity_deviation(&matrix)?;
        if deviation > STATE_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { arity, matrix })
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            arity,
            matrix: CMatrix::identity(1 << arity),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The full `2^n x 2^n` operator with this gate on `targets` and identity elsewhere.
    pub fn embed(&self, n_qubits: usize, targets: &[usize]) -> Result<CMatrix> {
        check_targets(self.arity, n_qubits, targets)?;
        let dim = 1usize << n_qubits;
        let mut full = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[col] = Complex64::new(1.0, 0.0);
            let out = apply_unchecked(&self.matrix, n_qubits, targets, &e);
            for (row, z) in out.into_iter().enumerate() {
                full[(row, col)] = z;
            }
        }
        Ok(full)
    }
}

/// `max |U^dag U - I|`.
pub fn unitarity_deviation(matrix: &CMatrix) -> Result<f64> {
    let udu = matmul(&dagger(matrix), matrix)?;
    Ok(udu.max_abs_diff(&CMatrix::identity(matrix.rows())))
}

/// Controlled-NOT with the control on the first factor:
///
/// ```text
/// 1 0 0 0
/// 0 1 0 0
/// 0 0 0 1
/// 0 0 1 0
/// ```
pub fn cnot() -> Gate {
    let m = CMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .expect("static shape");
    Gate { arity: 2, matrix: m }
}

/// Two-qubit unitary that copies the known state `psi` (and its orthogonal
/// partner) onto the ancilla `blank`.
///
/// With `psi_perp` and `blank_perp` from [`PureState::orthogonal`]:
///
/// - `|psi, blank>` -> `|psi, psi>`
/// - `|psi_perp, blank>` -> `|psi_perp, psi_perp>`
/// - `|psi, blank_perp>` -> `|psi, psi_perp>`
/// - `|psi_perp, blank_perp>` -> `|psi_perp, psi>`
///
/// For `psi = blank = |+z>` this is exactly [`cnot`].
pub fn known_state_cloner(psi: &PureState, blank: &PureState) -> Result<Gate> {
    for s in [psi, blank] {
        if s.n_qubits() != 1 {
            return Err(Error::QubitCountMismatch {
                expected: 1,
                actual: s.n_qubits(),
            });
        }
        let norm = s.amplitudes().norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
    }
    let psi_perp = psi.orthogonal()?;
    let blank_perp = blank.orthogonal()?;
    let pairs = [
        (psi.tensor(blank), psi.tensor(psi)),
        (psi_perp.tensor(blank), psi_perp.tensor(&psi_perp)),
        (psi.tensor(&blank_perp), psi.tensor(&psi_perp)),
        (psi_perp.tensor(&blank_perp), psi_perp.tensor(psi)),
    ];
    let mut u = CMatrix::zeros(4, 4);
    for (input, output) in &pairs {
        u = u.add(&output.amplitudes().outer(input.amplitudes()))?;
    }
    Gate::new(u)
}

fn check_targets(arity: usize, n_qubits: usize, targets: &[usize]) -> Result<()> {
    if targets.len() != arity {
        return Err(Error::ArityMismatch {
            arity,
            targets: targets.len(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: t,
                n_qubits,
            });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Apply `g` to `targets` of `state`; `targets[0]` is the gate's most significant factor.
pub fn apply_gate(state: &PureState, g: &Gate, targets: &[usize]) -> Result<PureState> {
    check_targets(g.arity, state.n_qubits(), targets)?;
    let out = apply_unchecked(
        &g.matrix,
        state.n_qubits(),
        targets,
        state.amplitudes().entries(),
    );
    Ok(PureState::from_raw(out))
}

pub(crate) fn apply_unchecked(
    matrix: &CMatrix,
    n_qubits: usize,
    targets: &[usize],
    amps: &[Complex64],
) -> Vec<Complex64> {
    let k = targets.len();
    let local_dim = 1usize << k;
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let mask: usize = targets.iter().map(|&t| bit(t)).sum();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(j, _)| (l >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &t)| bit(t))
                .sum()
        })
        .collect();

    let mut out = amps.to_vec();
    let mut local = vec![Complex64::new(0.0, 0.0); local_dim];
    for base in (0..amps.len()).filter(|i| i & mask == 0) {
        for (slot, &off) in local.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, z) in local.iter().enumerate() {
                acc += matrix[(row, col)] * z;
            }
            out[base | off] = acc;
        }
    }
    out
}

impl PureState {
    pub fn apply(&self, g: &Gate, targets: &[usize]) -> Result<PureState> {
        apply_gate(self, g, targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{basis_state, bell_state, x_eigenstate, BellKind, Sign};

    #[test]
    fn cnot_on_z_eigenstates() {
        let g = cnot();
        let up = PureState::up_z();
        let down = PureState::down_z();
        let out = apply_gate(&up.tensor(&up), &g, &[0, 1]).unwrap();
        assert_eq!(out, up.tensor(&up));
        let out = apply_gate(&down.tensor(&up), &g, &[0, 1]).unwrap();
        assert_eq!(out, down.tensor(&down));
    }

    #[test]
    fn cnot_is_an_involution() {
        let m = cnot().matrix().clone();
        assert_eq!(matmul(&m, &m).unwrap(), CMatrix::identity(4));
        assert_eq!(dagger(&m), m);
    }

    #[test]
    fn cloner_for_plus_z_is_cnot() {
        let up = PureState::up_z();
        let g = known_state_cloner(&up, &up).unwrap();
        assert_eq!(g.matrix(), cnot().matrix());
    }

    #[test]
    fn cloner_for_plus_x_clones_plus_x_and_minus_x() {
        let up = PureState::up_z();
        for sign in [Sign::Plus, Sign::Minus] {
            let psi = x_eigenstate(sign);
            let g = known_state_cloner(&x_eigenstate(Sign::Plus), &up).unwrap();
            let out = apply_gate(&psi.tensor(&up), &g, &[0, 1]).unwrap();
            assert!(out.approx_eq(&psi.tensor(&psi), 1e-12), "{sign:?}");
            assert!(unitarity_deviation(g.matrix()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn cloner_rejects_wrong_inputs() {
        let two = bell_state(BellKind::PhiPlus);
        assert!(known_state_cloner(&two, &PureState::up_z()).is_err());
    }

    #[test]
    fn gate_new_rejects_non_unitary() {
        let m = CMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(Gate::new(m), Err(Error::NotUnitary { .. })));
        let m = CMatrix::identity(3);
        assert!(matches!(Gate::new(m), Err(Error::NotQubitDimension(3))));
    }

    #[test]
    fn target_validation() {
        let s = basis_state(&[0, 0, 0]).unwrap();
        let g = cnot();
        assert!(matches!(
            apply_gate(&s, &g, &[0, 3]),
            Err(Error::QubitOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            apply_gate(&s, &g, &[1, 1]),
            Err(Error::DuplicateTarget(1))
        ));
        assert!(matches!(
            apply_gate(&s, &g, &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn reversed_targets_swap_control() {
        // control on qubit 1, target qubit 0: |0,1> -> |1,1>
        let s = basis_state(&[0, 1]).unwrap();
        let out = apply_gate(&s, &cnot(), &[1, 0]).unwrap();
        assert_eq!(out, basis_state(&[1, 1]).unwrap());
    }

    #[test]
    fn embed_matches_apply() {
        let g = cnot();
        let full = g.embed(3, &[2, 0]).unwrap();
        let s = basis_state(&[0, 1, 1]).unwrap();
        let via_full = full.apply(s.amplitudes()).unwrap();
        let via_apply = apply_gate(&s, &g, &[2, 0]).unwrap();
        assert_eq!(&via_full, via_apply.amplitudes());
        assert_eq!(via_apply, basis_state(&[1, 1, 1]).unwrap());
    }

    #[test]
    fn identity_gate_leaves_state() {
        let s = x_eigenstate(Sign::Minus).tensor(&PureState::up_z());
        let out = apply_gate(&s, &Gate::identity(2), &[0, 1]).unwrap();
        assert_eq!(out, s);
    }
}
