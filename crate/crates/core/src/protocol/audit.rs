//! Recomputes each displayed step of the protocol's state algebra from first
//! principles and records how far it lands from the printed right-hand side.
//!
//! The CNOT under test is passed in as a raw matrix so a perturbed operator can
//! be audited too; a fault shows up as a failing entry, never as an error.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qlin::{dagger, kron, matmul, CMatrix, CVector, ALGEBRA_TOL};
use crate::qstate::{
    basis_state, bell_state, cnot, reduced_state, to_density, x_eigenstate, BellKind,
    DensityMatrix, MeasurementAxis, PureState, Sign, SpinOutcome,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationEntry {
    pub id: String,
    pub description: String,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationAuditReport {
    pub equations: Vec<EquationEntry>,
}

impl EquationAuditReport {
    pub fn all_pass(&self) -> bool {
        self.equations.iter().all(|e| e.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.equations
            .iter()
            .map(|e| e.deviation)
            .fold(0.0, f64::max)
    }

    pub fn entry(&self, id: &str) -> Option<&EquationEntry> {
        self.equations.iter().find(|e| e.id == id)
    }
}

/// Audit against the library's own CNOT.
pub fn audit_equations() -> EquationAuditReport {
    audit_equations_with(cnot().matrix())
}

/// Audit with `cnot_matrix` standing in for the controlled-NOT.
pub fn audit_equations_with(cnot_matrix: &CMatrix) -> EquationAuditReport {
    let entries = vec![
        entry("3", "singlet in the z and x bases", singlet_deviation()),
        entry("5", "computational basis vectors", basis_deviation()),
        entry("6", "CNOT matrix", cnot_matrix_deviation(cnot_matrix)),
        entry("7", "CNOT |+z>|+z> = |+z>|+z>", z_clone_deviation(cnot_matrix, 0)),
        entry("8", "CNOT |-z>|+z> = |-z>|-z>", z_clone_deviation(cnot_matrix, 1)),
        entry("9", "|+x> decomposition", plus_x_deviation()),
        entry("10", "CNOT |+x>|+z> = Phi+", plus_x_cnot_deviation(cnot_matrix)),
        entry("11-12", "reduced states of Phi+ are I/2", phi_plus_reduced_deviation()),
        entry("13", "CNOT (I/2 x P+) CNOT^dag separable", mixed_clone_deviation(cnot_matrix)),
        entry("14", "|-x> decomposition", minus_x_deviation()),
        entry("15", "CNOT |-x>|+z> = -Phi-", minus_x_cnot_deviation(cnot_matrix)),
    ];
    EquationAuditReport { equations: entries }
}

fn entry(id: &str, description: &str, deviation: f64) -> EquationEntry {
    EquationEntry {
        id: id.to_string(),
        description: description.to_string(),
        deviation,
        pass: deviation <= ALGEBRA_TOL,
    }
}

fn real_vec(v: &[f64]) -> CVector {
    CVector::from_real(v).expect("finite literal")
}

fn s() -> f64 {
    FRAC_1_SQRT_2
}

fn apply(m: &CMatrix, v: &PureState) -> Option<CVector> {
    m.apply(v.amplitudes()).ok()
}

/// `(|+n>|-n> - |-n>|+n>)/sqrt 2` for n = z and n = x against the printed vector.
fn singlet_deviation() -> f64 {
    let printed = real_vec(&[0.0, s(), -s(), 0.0]);
    let mut worst = bell_state(BellKind::PsiMinus)
        .amplitudes()
        .max_abs_diff(&printed);
    for axis in [MeasurementAxis::z(), MeasurementAxis::x()] {
        let up = axis.eigenstate(SpinOutcome::Up);
        let down = axis.eigenstate(SpinOutcome::Down);
        let built = up
            .kron(&down)
            .sub(&down.kron(&up))
            .expect("same dims")
            .scale(Complex64::new(s(), 0.0));
        worst = worst.max(built.max_abs_diff(&printed));
    }
    worst
}

fn basis_deviation() -> f64 {
    let up = basis_state(&[0]).expect("literal");
    let down = basis_state(&[1]).expect("literal");
    up.amplitudes()
        .max_abs_diff(&real_vec(&[1.0, 0.0]))
        .max(down.amplitudes().max_abs_diff(&real_vec(&[0.0, 1.0])))
}

fn printed_cnot() -> CMatrix {
    CMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .expect("literal")
}

fn cnot_matrix_deviation(m: &CMatrix) -> f64 {
    m.max_abs_diff(&printed_cnot())
}

/// Clone a z eigenstate (`bit` 0 is `|+z>`) onto a `|+z>` ancilla.
fn z_clone_deviation(m: &CMatrix, bit: u8) -> f64 {
    let input = basis_state(&[bit, 0]).expect("literal");
    let expect = basis_state(&[bit, bit]).expect("literal");
    apply(m, &input).map_or(f64::INFINITY, |out| out.max_abs_diff(expect.amplitudes()))
}

/// `|+x> = (1,1)/sqrt 2 = (|+z> + |-z>)/sqrt 2`.
fn plus_x_deviation() -> f64 {
    let plus = x_eigenstate(Sign::Plus);
    let by_basis = PureState::up_z()
        .amplitudes()
        .add(PureState::down_z().amplitudes())
        .expect("same dims")
        .scale(Complex64::new(s(), 0.0));
    plus.amplitudes()
        .max_abs_diff(&real_vec(&[s(), s()]))
        .max(plus.amplitudes().max_abs_diff(&by_basis))
}

/// `|-x> = (-1,1)/sqrt 2 = -(|+z> - |-z>)/sqrt 2`.
fn minus_x_deviation() -> f64 {
    let minus = x_eigenstate(Sign::Minus);
    let by_basis = PureState::up_z()
        .amplitudes()
        .sub(PureState::down_z().amplitudes())
        .expect("same dims")
        .scale(Complex64::new(-s(), 0.0));
    minus
        .amplitudes()
        .max_abs_diff(&real_vec(&[-s(), s()]))
        .max(minus.amplitudes().max_abs_diff(&by_basis))
}

/// Direct application and the linearity route both have to land on Phi+.
fn plus_x_cnot_deviation(m: &CMatrix) -> f64 {
    let up = PureState::up_z();
    let down = PureState::down_z();
    let printed = up
        .tensor(&up)
        .amplitudes()
        .add(down.tensor(&down).amplitudes())
        .expect("same dims")
        .scale(Complex64::new(s(), 0.0));
    let bell = bell_state(BellKind::PhiPlus);
    let routes = || -> Option<f64> {
        let direct = apply(m, &x_eigenstate(Sign::Plus).tensor(&up))?;
        let by_linearity = apply(m, &up.tensor(&up))?
            .add(&apply(m, &down.tensor(&up))?)
            .ok()?
            .scale(Complex64::new(s(), 0.0));
        Some(
            direct
                .max_abs_diff(&printed)
                .max(by_linearity.max_abs_diff(&printed)),
        )
    };
    routes()
        .unwrap_or(f64::INFINITY)
        .max(bell.amplitudes().max_abs_diff(&printed))
}

/// The exact global phase -1 is part of the comparison.
fn minus_x_cnot_deviation(m: &CMatrix) -> f64 {
    let up = PureState::up_z();
    let down = PureState::down_z();
    let printed = up
        .tensor(&up)
        .amplitudes()
        .sub(down.tensor(&down).amplitudes())
        .expect("same dims")
        .scale(Complex64::new(-s(), 0.0));
    let bell = bell_state(BellKind::PhiMinus).scale_phase(Complex64::new(-1.0, 0.0));
    apply(m, &x_eigenstate(Sign::Minus).tensor(&up))
        .map_or(f64::INFINITY, |direct| direct.max_abs_diff(&printed))
        .max(bell.amplitudes().max_abs_diff(&printed))
}

fn projector(state: &PureState) -> CMatrix {
    state.amplitudes().outer(state.amplitudes())
}

/// `I/2 = (P+z + P-z)/2` on each side of Phi+.
fn phi_plus_reduced_deviation() -> f64 {
    let rho = to_density(&bell_state(BellKind::PhiPlus));
    let half_identity = projector(&PureState::up_z())
        .add(&projector(&PureState::down_z()))
        .expect("2x2")
        .scale(Complex64::new(0.5, 0.0));
    [0usize, 1]
        .iter()
        .map(|&q| {
            reduced_state(&rho, &[q])
                .map(|r| r.matrix().max_abs_diff(&half_identity))
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

/// `U (I/2 (x) |+z><+z|) U^dag = (P+ (x) P+ + P- (x) P-)/2`.
fn mixed_clone_deviation(m: &CMatrix) -> f64 {
    let p_up = projector(&PureState::up_z());
    let p_down = projector(&PureState::down_z());
    let input = DensityMatrix::maximally_mixed(1)
        .expect("one qubit")
        .tensor(&to_density(&PureState::up_z()));
    let out = matmul(m, input.matrix()).and_then(|x| matmul(&x, &dagger(m)));
    let printed = kron(&p_up, &p_up)
        .add(&kron(&p_down, &p_down))
        .expect("4x4")
        .scale(Complex64::new(0.5, 0.0));
    out.map_or(f64::INFINITY, |out| out.max_abs_diff(&printed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_audit_passes_with_eleven_entries() {
        let report = audit_equations();
        assert_eq!(report.equations.len(), 11);
        for e in &report.equations {
            assert!(e.pass, "{} deviates by {}", e.id, e.deviation);
        }
        assert!(report.max_deviation() <= 1e-12);
    }

    #[test]
    fn perturbed_cnot_is_caught() {
        let mut m = cnot().matrix().clone();
        m[(0, 0)] += Complex64::new(1e-6, 0.0);
        let report = audit_equations_with(&m);
        let eq7 = report.entry("7").unwrap();
        assert!(!eq7.pass);
        assert!(eq7.deviation >= 1e-7);
        assert!(!report.all_pass());
        assert_eq!(report.equations.len(), 11);
        // state-only displays are unaffected
        assert!(report.entry("9").unwrap().pass);
    }

    #[test]
    fn wrong_shape_operator_fails_without_panicking() {
        let report = audit_equations_with(&CMatrix::identity(2));
        assert!(!report.entry("6").unwrap().pass);
        assert!(!report.entry("7").unwrap().pass);
        assert!(!report.entry("13").unwrap().pass);
    }
}
