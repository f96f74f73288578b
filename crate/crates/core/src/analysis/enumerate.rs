use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::protocol::{
    alice_amplify, bob_encode_branches, validate_split, AxisLabel, BobBit, MeanPair,
    DEFAULT_QUBIT_BUDGET,
};
use crate::qstate::{
    expectation, measure_branches, to_density, DensityMatrix, MeasurementAxis, PureState,
    SpinObservable,
};

/// Which account of Alice's register generates the statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Full state-vector evolution and sequential collapse.
    TrueDynamics,
    /// Every particle drawn independently from the single-particle state the
    /// protocol ascribes to it: the collapsed z eigenstate when Bob measured z,
    /// `I/2` when Bob measured x.
    PaperIndependentMixture,
}

impl ModelKind {
    pub const BOTH: [ModelKind; 2] = [ModelKind::TrueDynamics, ModelKind::PaperIndependentMixture];
}

pub(crate) fn check_budget(n_total: usize, k_x: usize, k_z: usize) -> Result<()> {
    validate_split(n_total, k_x, k_z)?;
    if n_total > DEFAULT_QUBIT_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: n_total,
            limit: DEFAULT_QUBIT_BUDGET,
        });
    }
    Ok(())
}

/// Exact distribution of Alice's `(<S_x>, <S_z>)` given Bob's bit, averaged
/// over Bob's two outcomes.
pub fn enumerate_alice_distribution(
    bob_bit: BobBit,
    n_total: usize,
    k_x: usize,
    k_z: usize,
    model: ModelKind,
) -> Result<OutcomeDistribution<MeanPair>> {
    check_budget(n_total, k_x, k_z)?;
    let branches = bob_encode_branches(bob_bit)?;
    // Branches run in parallel; merging in branch order keeps sums bit-identical.
    let parts: Vec<BTreeMap<(i64, i64), f64>> = branches
        .par_iter()
        .map(|b| {
            let weight = b.bob.probability;
            match model {
                ModelKind::TrueDynamics => true_dynamics_table(&b.alice, n_total, k_x, weight),
                ModelKind::PaperIndependentMixture => {
                    let claimed = claimed_particle_state(bob_bit, &b.alice);
                    independent_table(&claimed, k_x, k_z, weight)
                }
            }
        })
        .collect::<Result<_>>()?;
    let weights = parts
        .into_iter()
        .flat_map(|t| t.into_iter())
        .map(|((nx, nz), w)| (MeanPair::from_net(nx, k_x, nz, k_z), w));
    OutcomeDistribution::from_weights(weights)
}

/// Per-particle state the protocol narrative assigns after amplification.
pub fn claimed_particle_state(bob_bit: BobBit, alice: &PureState) -> DensityMatrix {
    match bob_bit {
        BobBit::Zero => to_density(alice),
        BobBit::One => DensityMatrix::maximally_mixed(1).expect("one qubit"),
    }
}

fn true_dynamics_table(
    alice: &PureState,
    n_total: usize,
    k_x: usize,
    weight: f64,
) -> Result<BTreeMap<(i64, i64), f64>> {
    let register = alice_amplify(alice, n_total)?;
    let mut table = BTreeMap::new();
    walk(&register, 0, k_x, (0, 0), weight, &mut table)?;
    Ok(table)
}

/// Depth-first over every measurement path, x sub-ensemble first.
fn walk(
    state: &PureState,
    qubit: usize,
    k_x: usize,
    net: (i64, i64),
    weight: f64,
    table: &mut BTreeMap<(i64, i64), f64>,
) -> Result<()> {
    if qubit == state.n_qubits() {
        *table.entry(net).or_insert(0.0) += weight;
        return Ok(());
    }
    let label = if qubit < k_x { AxisLabel::X } else { AxisLabel::Z };
    for branch in measure_branches(state, &label.axis(), qubit)? {
        let Some(post) = branch.post_state else {
            continue;
        };
        let next = match label {
            AxisLabel::X => (net.0 + branch.outcome.sign(), net.1),
            AxisLabel::Z => (net.0, net.1 + branch.outcome.sign()),
        };
        walk(&post, qubit + 1, k_x, next, weight * branch.probability, table)?;
    }
    Ok(())
}

/// Net-spin table for `k_x` then `k_z` i.i.d. copies of `particle`.
fn independent_table(
    particle: &DensityMatrix,
    k_x: usize,
    k_z: usize,
    weight: f64,
) -> Result<BTreeMap<(i64, i64), f64>> {
    let up_prob = |axis: MeasurementAxis| -> Result<f64> {
        let e = expectation(particle, &SpinObservable::new(axis), 0)?;
        Ok((0.5 + e).clamp(0.0, 1.0))
    };
    let x = net_binomial(k_x, up_prob(MeasurementAxis::x())?);
    let z = net_binomial(k_z, up_prob(MeasurementAxis::z())?);
    let mut table = BTreeMap::new();
    for &(nx, px) in &x {
        for &(nz, pz) in &z {
            let w = weight * px * pz;
            if w != 0.0 {
                *table.entry((nx, nz)).or_insert(0.0) += w;
            }
        }
    }
    Ok(table)
}

/// Distribution of (ups - downs) over `k` independent spins with up probability `p`.
fn net_binomial(k: usize, p: f64) -> Vec<(i64, f64)> {
    let mut binom = 1.0f64;
    (0..=k)
        .map(|ups| {
            if ups > 0 {
                binom = binom * (k - ups + 1) as f64 / ups as f64;
            }
            let prob = binom * p.powi(ups as i32) * (1.0 - p).powi((k - ups) as i32);
            (2 * ups as i64 - k as i64, prob)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn net_binomial_fair_coin() {
        let t = net_binomial(3, 0.5);
        assert_eq!(t, vec![(-3, 0.125), (-1, 0.375), (1, 0.375), (3, 0.125)]);
        assert_eq!(net_binomial(0, 0.3), vec![(0, 1.0)]);
        assert_eq!(net_binomial(2, 1.0), vec![(-2, 0.0), (0, 0.0), (2, 1.0)]);
    }

    #[test]
    fn budget_and_split_checked() {
        assert!(matches!(
            enumerate_alice_distribution(BobBit::Zero, 13, 13, 0, ModelKind::TrueDynamics),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_alice_distribution(BobBit::Zero, 2, 3, 0, ModelKind::TrueDynamics),
            Err(Error::SplitMismatch { .. })
        ));
    }

    #[test]
    fn single_particle_x_only() {
        let d = enumerate_alice_distribution(BobBit::Zero, 1, 1, 0, ModelKind::TrueDynamics)
            .unwrap();
        let half = Ratio::new(1, 2);
        let zero = Ratio::from_integer(0);
        assert_eq!(d.len(), 2);
        assert!((d.probability(&MeanPair { sx: half, sz: zero }) - 0.5).abs() < 1e-12);
        assert!((d.probability(&MeanPair { sx: -half, sz: zero }) - 0.5).abs() < 1e-12);
    }
}
