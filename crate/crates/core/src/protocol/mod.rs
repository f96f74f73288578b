//! The ansible protocol.
//!
//! Bob and Alice share a singlet. To send bit 0 Bob measures his spin along z,
//! to send bit 1 along x. Alice copies whatever qubit she holds onto fresh
//! `|+z>` ancillas with CNOTs (control: her original qubit), splits the
//! register into an x sub-ensemble and a z sub-ensemble, and decodes from the
//! z average: a polarized register (`|<S_z>| = 1/2`) reads as 0, an
//! unpolarized one (`<S_z> = 0`) as 1.
//!
//! Everything here runs the protocol faithfully; [`crate::analysis`] measures
//! whether the decoded bit actually depends on Bob's choice.

mod audit;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{
    apply_gate, bell_state, cnot, measure_branches, measure_sample, BellKind, MeasurementAxis,
    MeasurementBranch, PureState, SpinOutcome,
};

pub use audit::{audit_equations, audit_equations_with, EquationAuditReport, EquationEntry};

/// Largest register Alice may build (4096 amplitudes).
pub const DEFAULT_QUBIT_BUDGET: usize = 12;

/// Bob's qubit in the shared singlet; Alice holds qubit 0.
pub const BOB_QUBIT: usize = 1;

/// The bit Bob encodes through his choice of measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum BobBit {
    Zero,
    One,
}

impl BobBit {
    pub const BOTH: [BobBit; 2] = [BobBit::Zero, BobBit::One];

    /// z for 0, x for 1.
    pub fn axis(self) -> MeasurementAxis {
        match self {
            BobBit::Zero => MeasurementAxis::z(),
            BobBit::One => MeasurementAxis::x(),
        }
    }

    pub fn axis_label(self) -> AxisLabel {
        match self {
            BobBit::Zero => AxisLabel::Z,
            BobBit::One => AxisLabel::X,
        }
    }
}

impl TryFrom<u8> for BobBit {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(BobBit::Zero),
            1 => Ok(BobBit::One),
            other => Err(Error::InvalidArgument(format!("bob bit must be 0 or 1, got {other}"))),
        }
    }
}

impl From<BobBit> for u8 {
    fn from(b: BobBit) -> u8 {
        match b {
            BobBit::Zero => 0,
            BobBit::One => 1,
        }
    }
}

/// One of the two agreed measurement axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisLabel {
    X,
    Z,
}

impl AxisLabel {
    pub fn axis(self) -> MeasurementAxis {
        match self {
            AxisLabel::X => MeasurementAxis::x(),
            AxisLabel::Z => MeasurementAxis::z(),
        }
    }
}

/// What Alice reads off her register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Zero,
    One,
    Indeterminate,
}

/// Alice's decoding threshold on `|<S_z>|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionRule {
    threshold: f64,
}

impl DecisionRule {
    pub fn new(threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 0.5) {
            return Err(Error::InvalidThreshold(threshold));
        }
        Ok(Self { threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Above the threshold reads as 0, below as 1, exactly on it is indeterminate.
    pub fn decide(&self, mean_sz: f64) -> Decision {
        let m = mean_sz.abs();
        if m > self.threshold {
            Decision::Zero
        } else if m < self.threshold {
            Decision::One
        } else {
            Decision::Indeterminate
        }
    }
}

impl Default for DecisionRule {
    fn default() -> Self {
        Self { threshold: 0.25 }
    }
}

/// Decode from the sub-ensemble averages. Only `mean_sz` carries the bit;
/// `mean_sx` is checked for range.
pub fn alice_decide(mean_sx: f64, mean_sz: f64, rule: &DecisionRule) -> Result<Decision> {
    for m in [mean_sx, mean_sz] {
        if !(-0.5..=0.5).contains(&m) {
            return Err(Error::InvalidArgument(format!(
                "spin average {m} outside [-1/2, 1/2]"
            )));
        }
    }
    Ok(rule.decide(mean_sz))
}

/// Exact sub-ensemble averages `<S_x>`, `<S_z>` as rationals.
///
/// An empty sub-ensemble averages to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeanPair {
    pub sx: Ratio<i64>,
    pub sz: Ratio<i64>,
}

impl MeanPair {
    /// From the net spin count (ups minus downs) of each sub-ensemble.
    pub fn from_net(net_x: i64, k_x: usize, net_z: i64, k_z: usize) -> Self {
        Self {
            sx: spin_mean(net_x, k_x),
            sz: spin_mean(net_z, k_z),
        }
    }

    pub fn sx_f64(&self) -> f64 {
        ratio_to_f64(self.sx)
    }

    pub fn sz_f64(&self) -> f64 {
        ratio_to_f64(self.sz)
    }
}

fn spin_mean(net: i64, count: usize) -> Ratio<i64> {
    if count == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(net, 2 * count as i64)
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Run parameters for one protocol trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n_total: usize,
    pub k_x: usize,
    pub k_z: usize,
    pub bob_bit: BobBit,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn new(n_total: usize, k_x: usize, k_z: usize, bob_bit: BobBit, seed: u64) -> Result<Self> {
        let config = Self {
            n_total,
            k_x,
            k_z,
            bob_bit,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        validate_split(self.n_total, self.k_x, self.k_z)?;
        if self.n_total > DEFAULT_QUBIT_BUDGET {
            return Err(Error::BudgetExceeded {
                requested: self.n_total,
                limit: DEFAULT_QUBIT_BUDGET,
            });
        }
        Ok(())
    }
}

pub(crate) fn validate_split(n_total: usize, k_x: usize, k_z: usize) -> Result<()> {
    if n_total == 0 || k_x + k_z != n_total {
        return Err(Error::SplitMismatch { n_total, k_x, k_z });
    }
    Ok(())
}

/// Outcome of Bob's measurement together with the qubit it leaves Alice.
#[derive(Debug, Clone, PartialEq)]
pub struct BobBranch {
    pub bob: MeasurementBranch,
    pub alice: PureState,
}

/// Both branches of Bob measuring the singlet along the axis encoding `bit`.
pub fn bob_encode_branches(bit: BobBit) -> Result<Vec<BobBranch>> {
    let singlet = bell_state(BellKind::PsiMinus);
    let axis = bit.axis();
    measure_branches(&singlet, &axis, BOB_QUBIT)?
        .into_iter()
        .filter(|b| b.post_state.is_some())
        .map(|bob| {
            let alice = alice_share(&singlet, &axis, bob.outcome)?;
            Ok(BobBranch { bob, alice })
        })
        .collect()
}

fn alice_share(singlet: &PureState, axis: &MeasurementAxis, bob: SpinOutcome) -> Result<PureState> {
    let (_, alice) = singlet.project_out(BOB_QUBIT, &axis.eigenstate(bob))?;
    alice.ok_or_else(|| Error::InvalidArgument("Bob outcome has zero probability".into()))
}

/// Copy `initial` onto fresh `|+z>` ancillas with CNOT (control qubit 0) until
/// the register holds `n_total` qubits.
pub fn alice_amplify(initial: &PureState, n_total: usize) -> Result<PureState> {
    let controls = vec![0; n_total.saturating_sub(1)];
    alice_amplify_with_controls(initial, &controls, DEFAULT_QUBIT_BUDGET)
}

/// Cascade with an explicit control for each step: `controls[i]` is the
/// existing qubit that controls the CNOT creating qubit `i + 1`.
pub fn alice_amplify_with_controls(
    initial: &PureState,
    controls: &[usize],
    budget: usize,
) -> Result<PureState> {
    if initial.n_qubits() != 1 {
        return Err(Error::QubitCountMismatch {
            expected: 1,
            actual: initial.n_qubits(),
        });
    }
    let n_total = controls.len() + 1;
    if n_total > budget {
        return Err(Error::BudgetExceeded {
            requested: n_total,
            limit: budget,
        });
    }
    let gate = cnot();
    let ancilla = PureState::up_z();
    let mut state = initial.clone();
    for (step, &control) in controls.iter().enumerate() {
        let fresh = step + 1;
        if control >= fresh {
            return Err(Error::QubitOutOfRange {
                index: control,
                n_qubits: fresh,
            });
        }
        state = apply_gate(&state.tensor(&ancilla), &gate, &[control, fresh])?;
    }
    Ok(state)
}

/// Alice's measured register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliceOutcomes {
    pub x_outcomes: Vec<SpinOutcome>,
    pub z_outcomes: Vec<SpinOutcome>,
}

impl AliceOutcomes {
    pub fn mean_pair(&self) -> MeanPair {
        let net = |v: &[SpinOutcome]| v.iter().map(|o| o.sign()).sum::<i64>();
        MeanPair::from_net(
            net(&self.x_outcomes),
            self.x_outcomes.len(),
            net(&self.z_outcomes),
            self.z_outcomes.len(),
        )
    }
}

/// Measure qubits `0..k_x` along x, then `k_x..n` along z, collapsing as it goes.
pub fn alice_measure_plan<R: rand::Rng + ?Sized>(
    state: &PureState,
    k_x: usize,
    k_z: usize,
    rng: &mut R,
) -> Result<AliceOutcomes> {
    validate_split(state.n_qubits(), k_x, k_z)?;
    let mut current = state.clone();
    let mut x_outcomes = Vec::with_capacity(k_x);
    let mut z_outcomes = Vec::with_capacity(k_z);
    for qubit in 0..state.n_qubits() {
        let label = if qubit < k_x { AxisLabel::X } else { AxisLabel::Z };
        let branch = measure_sample(&current, &label.axis(), qubit, rng)?;
        match label {
            AxisLabel::X => x_outcomes.push(branch.outcome),
            AxisLabel::Z => z_outcomes.push(branch.outcome),
        }
        current = branch
            .post_state
            .expect("sampled branches have nonzero probability");
    }
    Ok(AliceOutcomes {
        x_outcomes,
        z_outcomes,
    })
}

/// Everything observed in one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub bob_bit: BobBit,
    pub bob_axis: AxisLabel,
    pub bob_outcome: SpinOutcome,
    pub alice_x_outcomes: Vec<SpinOutcome>,
    pub alice_z_outcomes: Vec<SpinOutcome>,
    pub mean_sx: f64,
    pub mean_sz: f64,
    pub decoded: Decision,
}

impl RunRecord {
    pub fn mean_pair(&self) -> MeanPair {
        AliceOutcomes {
            x_outcomes: self.alice_x_outcomes.clone(),
            z_outcomes: self.alice_z_outcomes.clone(),
        }
        .mean_pair()
    }
}

/// Random stream for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One end-to-end trial on stream 0 of `config.seed`.
pub fn run_single_trial(config: &ProtocolConfig, rule: &DecisionRule) -> Result<RunRecord> {
    run_trial(config, rule, 0)
}

/// Trial `index` of a run; deterministic in `(config.seed, index)`.
pub fn run_trial(config: &ProtocolConfig, rule: &DecisionRule, index: u64) -> Result<RunRecord> {
    config.validate()?;
    let mut rng = trial_rng(config.seed, index);
    let singlet = bell_state(BellKind::PsiMinus);
    let axis = config.bob_bit.axis();
    let bob = measure_sample(&singlet, &axis, BOB_QUBIT, &mut rng)?;
    let alice = alice_share(&singlet, &axis, bob.outcome)?;
    let register = alice_amplify(&alice, config.n_total)?;
    let outcomes = alice_measure_plan(&register, config.k_x, config.k_z, &mut rng)?;
    let means = outcomes.mean_pair();
    let (mean_sx, mean_sz) = (means.sx_f64(), means.sz_f64());
    Ok(RunRecord {
        bob_bit: config.bob_bit,
        bob_axis: config.bob_bit.axis_label(),
        bob_outcome: bob.outcome,
        alice_x_outcomes: outcomes.x_outcomes,
        alice_z_outcomes: outcomes.z_outcomes,
        mean_sx,
        mean_sz,
        decoded: alice_decide(mean_sx, mean_sz, rule)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ghz_state, x_eigenstate, DensityMatrix, Sign};

    #[test]
    fn bob_bit_zero_leaves_z_eigenstates() {
        let branches = bob_encode_branches(BobBit::Zero).unwrap();
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!((b.bob.probability - 0.5).abs() < 1e-12);
        }
        // Bob down -> Alice up, Bob up -> Alice down
        let up = branches.iter().find(|b| b.bob.outcome == SpinOutcome::Down).unwrap();
        assert!(up.alice.approx_eq_up_to_phase(&PureState::up_z(), 1e-12));
        let down = branches.iter().find(|b| b.bob.outcome == SpinOutcome::Up).unwrap();
        assert!(down.alice.approx_eq_up_to_phase(&PureState::down_z(), 1e-12));
    }

    #[test]
    fn bob_bit_one_leaves_x_eigenstates() {
        let branches = bob_encode_branches(BobBit::One).unwrap();
        let plus = branches.iter().find(|b| b.bob.outcome == SpinOutcome::Down).unwrap();
        assert!(plus.alice.approx_eq_up_to_phase(&x_eigenstate(Sign::Plus), 1e-12));
        let minus = branches.iter().find(|b| b.bob.outcome == SpinOutcome::Up).unwrap();
        assert!(minus.alice.approx_eq_up_to_phase(&x_eigenstate(Sign::Minus), 1e-12));
        assert!(branches.iter().all(|b| (b.bob.probability - 0.5).abs() < 1e-12));
    }

    #[test]
    fn amplify_z_and_x_inputs() {
        let up = PureState::up_z();
        let out = alice_amplify(&up, 3).unwrap();
        assert!(out.approx_eq(&up.tensor(&up).tensor(&up), 1e-15));
        let g3 = alice_amplify(&x_eigenstate(Sign::Plus), 3).unwrap();
        assert!(g3.approx_eq(&ghz_state(3).unwrap(), 1e-15));
        let single = alice_amplify(&up, 1).unwrap();
        assert_eq!(single, up);
    }

    #[test]
    fn amplify_respects_budget() {
        let up = PureState::up_z();
        assert!(matches!(
            alice_amplify(&up, 13),
            Err(Error::BudgetExceeded { requested: 13, limit: 12 })
        ));
        assert!(alice_amplify_with_controls(&up, &[0, 2], 12).is_err());
    }

    #[test]
    fn decision_rule_boundaries() {
        let rule = DecisionRule::default();
        assert_eq!(alice_decide(0.0, 0.5, &rule).unwrap(), Decision::Zero);
        assert_eq!(alice_decide(0.0, -0.5, &rule).unwrap(), Decision::Zero);
        assert_eq!(alice_decide(0.0, 0.0, &rule).unwrap(), Decision::One);
        assert_eq!(alice_decide(0.0, 0.25, &rule).unwrap(), Decision::Indeterminate);
        assert!(alice_decide(0.0, 0.75, &rule).is_err());
        assert!(DecisionRule::new(0.0).is_err());
        assert!(DecisionRule::new(0.5).is_err());
        assert!(DecisionRule::new(f64::NAN).is_err());
    }

    #[test]
    fn plan_on_single_eigenstate() {
        let mut rng = trial_rng(3, 0);
        let out = alice_measure_plan(&PureState::up_z(), 0, 1, &mut rng).unwrap();
        assert_eq!(out.z_outcomes, vec![SpinOutcome::Up]);
        assert_eq!(out.mean_pair().sz_f64(), 0.5);
        assert_eq!(out.mean_pair().sx_f64(), 0.0);
        assert!(matches!(
            alice_measure_plan(&PureState::up_z(), 1, 1, &mut rng),
            Err(Error::SplitMismatch { .. })
        ));
    }

    #[test]
    fn ghz_z_outcomes_are_all_equal() {
        let ghz = ghz_state(4).unwrap();
        for seed in 0..200 {
            let mut rng = trial_rng(seed, 0);
            let out = alice_measure_plan(&ghz, 2, 2, &mut rng).unwrap();
            assert!(out.z_outcomes.windows(2).all(|w| w[0] == w[1]));
            assert_eq!(out.mean_pair().sz_f64().abs(), 0.5);
        }
    }

    #[test]
    fn trials_decode_zero_for_both_bits() {
        let rule = DecisionRule::default();
        for bit in BobBit::BOTH {
            for seed in 0..100 {
                let cfg = ProtocolConfig::new(4, 2, 2, bit, seed).unwrap();
                let rec = run_single_trial(&cfg, &rule).unwrap();
                assert_eq!(rec.decoded, Decision::Zero, "bit {bit:?} seed {seed}");
                assert_eq!(rec.bob_axis, bit.axis_label());
                assert_eq!(rec.alice_x_outcomes.len(), 2);
                assert_eq!(rec.alice_z_outcomes.len(), 2);
                assert_eq!(rec, run_single_trial(&cfg, &rule).unwrap());
            }
        }
    }

    #[test]
    fn per_qubit_states_are_pure_for_bit_zero_and_mixed_for_bit_one() {
        for bit in BobBit::BOTH {
            for branch in bob_encode_branches(bit).unwrap() {
                let reg = alice_amplify(&branch.alice, 4).unwrap();
                let rho = DensityMatrix::from_pure(&reg);
                for q in 0..4 {
                    let purity = rho.reduced(&[q]).unwrap().purity();
                    let expect = if bit == BobBit::Zero { 1.0 } else { 0.5 };
                    assert!((purity - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(ProtocolConfig::new(2, 3, 0, BobBit::Zero, 0).is_err());
        assert!(ProtocolConfig::new(0, 0, 0, BobBit::Zero, 0).is_err());
        assert!(ProtocolConfig::new(13, 13, 0, BobBit::Zero, 0).is_err());
        assert_eq!(BobBit::try_from(1).unwrap(), BobBit::One);
        assert!(BobBit::try_from(2).is_err());
    }

    #[test]
    fn mean_pair_is_exact() {
        let m = MeanPair::from_net(1, 3, -2, 4);
        assert_eq!(m.sx, Ratio::new(1, 6));
        assert_eq!(m.sz, Ratio::new(-1, 4));
        assert_eq!(MeanPair::from_net(0, 0, 0, 0).sz, Ratio::from_integer(0));
    }
}
