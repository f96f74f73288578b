use serde::{Deserialize, Serialize};

use super::{check_budget, enumerate_alice_distribution, total_variation, ModelKind, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::protocol::{bob_encode_branches, BobBit, Decision, DecisionRule, MeanPair};
use crate::qlin::{hermitian_eigenvalues, CMatrix};
use crate::qstate::{ghz_state, to_density, DensityMatrix};

/// `(1/2) sum |eig(a - b)|`.
///
/// The difference is split into the connected blocks of its sparsity pattern
/// first, so structured inputs like `rho(GHZ) - I/2^n` only diagonalize a 2x2.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::QubitCountMismatch {
            expected: a.n_qubits(),
            actual: b.n_qubits(),
        });
    }
    let diff = a.matrix().sub(b.matrix())?;
    let mut sum = 0.0;
    for block in connected_blocks(&diff) {
        if let [i] = block[..] {
            sum += diff[(i, i)].re.abs();
            continue;
        }
        let m = block.len();
        let mut sub = CMatrix::zeros(m, m);
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                sub[(r, c)] = diff[(i, j)];
            }
        }
        sum += hermitian_eigenvalues(&sub)?
            .iter()
            .map(|v| v.abs())
            .sum::<f64>();
    }
    Ok(0.5 * sum)
}

/// Index sets that the nonzero off-diagonal entries link together.
fn connected_blocks(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)].norm_sqr() != 0.0 || m[(j, i)].norm_sqr() != 0.0 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let root = find(&mut parent, i);
        blocks[root].push(i);
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

/// Push a `(mean_sx, mean_sz)` distribution through the decision rule.
pub fn decision_distribution(
    dist: &OutcomeDistribution<MeanPair>,
    rule: &DecisionRule,
) -> OutcomeDistribution<Decision> {
    dist.map(|m| rule.decide(m.sz_f64()))
}

/// `I(bit; decision)` in bits under a uniform prior on the bit.
pub fn channel_mutual_information(
    given_0: &OutcomeDistribution<Decision>,
    given_1: &OutcomeDistribution<Decision>,
) -> f64 {
    let mut mi = 0.0;
    for cond in [given_0, given_1] {
        for (d, p) in cond.iter() {
            let marginal = 0.5 * (given_0.probability(d) + given_1.probability(d));
            if p > 0.0 {
                mi += 0.5 * p * (p / marginal).log2();
            }
        }
    }
    mi.max(0.0)
}

/// Exact no-signaling figures for one split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoSignalingCheck {
    /// TVD between Alice's exact outcome tables for bit 0 and bit 1.
    pub tvd_true: f64,
    /// Trace distance between Alice's outcome-averaged pre-cascade states for the two bits.
    pub trace_distance_bases: f64,
    /// Largest entry-wise distance of either of those states from `I/2`.
    pub max_deviation_from_mixed: f64,
}

impl NoSignalingCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.tvd_true <= tol && self.trace_distance_bases <= tol && self.max_deviation_from_mixed <= tol
    }
}

/// Alice's single-qubit state averaged over Bob's outcomes, before amplification.
pub fn alice_average_state(bob_bit: BobBit) -> Result<DensityMatrix> {
    let parts: Vec<(f64, DensityMatrix)> = bob_encode_branches(bob_bit)?
        .iter()
        .map(|b| (b.bob.probability, to_density(&b.alice)))
        .collect();
    DensityMatrix::mixture(&parts)
}

pub fn no_signaling_check(n_total: usize, k_x: usize, k_z: usize) -> Result<NoSignalingCheck> {
    check_budget(n_total, k_x, k_z)?;
    let [d0, d1] = true_tables(n_total, k_x, k_z)?;
    let r0 = alice_average_state(BobBit::Zero)?;
    let r1 = alice_average_state(BobBit::One)?;
    let mixed = DensityMatrix::maximally_mixed(1)?;
    Ok(NoSignalingCheck {
        tvd_true: total_variation(&d0, &d1),
        trace_distance_bases: trace_distance(&r0, &r1)?,
        max_deviation_from_mixed: r0.max_deviation(&mixed).max(r1.max_deviation(&mixed)),
    })
}

fn true_tables(n_total: usize, k_x: usize, k_z: usize) -> Result<[OutcomeDistribution<MeanPair>; 2]> {
    Ok([
        enumerate_alice_distribution(BobBit::Zero, n_total, k_x, k_z, ModelKind::TrueDynamics)?,
        enumerate_alice_distribution(BobBit::One, n_total, k_x, k_z, ModelKind::TrueDynamics)?,
    ])
}

/// How far the independent-mixture account of the cascade is from what the
/// cascade actually produces, and whether either carries Bob's bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub tvd_true: f64,
    pub tvd_paper_gap: f64,
    #[serde(rename = "mi_true")]
    pub mutual_information_true: f64,
    #[serde(rename = "mi_paper_model")]
    pub mutual_information_paper_model: f64,
    pub trace_distance_states: f64,
}

pub fn paper_gap_report(
    n_total: usize,
    k_x: usize,
    k_z: usize,
    rule: &DecisionRule,
) -> Result<ChannelReport> {
    check_budget(n_total, k_x, k_z)?;
    let [t0, t1] = true_tables(n_total, k_x, k_z)?;
    let model = ModelKind::PaperIndependentMixture;
    let p0 = enumerate_alice_distribution(BobBit::Zero, n_total, k_x, k_z, model)?;
    let p1 = enumerate_alice_distribution(BobBit::One, n_total, k_x, k_z, model)?;
    let mi = |a, b| {
        channel_mutual_information(&decision_distribution(a, rule), &decision_distribution(b, rule))
    };
    let ghz = to_density(&ghz_state(n_total)?);
    let mixed = DensityMatrix::maximally_mixed(n_total)?;
    Ok(ChannelReport {
        tvd_true: total_variation(&t0, &t1),
        tvd_paper_gap: total_variation(&t1, &p1),
        mutual_information_true: mi(&t0, &t1),
        mutual_information_paper_model: mi(&p0, &p1),
        trace_distance_states: trace_distance(&ghz, &mixed)?,
    })
}
