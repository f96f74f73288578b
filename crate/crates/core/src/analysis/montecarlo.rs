use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{enumerate_alice_distribution, ModelKind, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::protocol::{run_trial, Decision, DecisionRule, MeanPair, ProtocolConfig};

/// Smallest expected count a chi-square bin may have after pooling.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins remaining after pooling.
    pub bins: usize,
}

/// Empirical outcome table from seeded trials, checked against the exact one.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub config: ProtocolConfig,
    pub trials: u64,
    pub counts: BTreeMap<MeanPair, u64>,
    pub expected: OutcomeDistribution<MeanPair>,
    pub chi_square: ChiSquare,
    /// Per-run means averaged over all runs.
    pub cross_run_mean_sx: f64,
    pub cross_run_mean_sz: f64,
    pub decisions: BTreeMap<Decision, u64>,
}

impl MonteCarloReport {
    pub fn empirical(&self) -> OutcomeDistribution<MeanPair> {
        let total = self.trials as f64;
        OutcomeDistribution::accumulate(self.counts.iter().map(|(k, &c)| (*k, c as f64 / total)))
    }
}

/// Run `trials` independent trials of `config` (trial `i` on stream `i`).
pub fn monte_carlo_distribution(
    config: &ProtocolConfig,
    trials: u64,
    rule: &DecisionRule,
) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    config.validate()?;
    let expected = enumerate_alice_distribution(
        config.bob_bit,
        config.n_total,
        config.k_x,
        config.k_z,
        ModelKind::TrueDynamics,
    )?;
    let observed: Vec<(MeanPair, Decision, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            run_trial(config, rule, i).map(|r| (r.mean_pair(), r.decoded, r.mean_sx, r.mean_sz))
        })
        .collect::<Result<_>>()?;

    let mut counts = BTreeMap::new();
    let mut decisions = BTreeMap::new();
    let (mut sum_sx, mut sum_sz) = (0.0, 0.0);
    for (pair, decision, sx, sz) in &observed {
        *counts.entry(*pair).or_insert(0u64) += 1;
        *decisions.entry(*decision).or_insert(0u64) += 1;
        sum_sx += sx;
        sum_sz += sz;
    }
    let chi_square = chi_square_test(&counts, &expected, trials);
    Ok(MonteCarloReport {
        config: *config,
        trials,
        counts,
        expected,
        chi_square,
        cross_run_mean_sx: sum_sx / trials as f64,
        cross_run_mean_sz: sum_sz / trials as f64,
        decisions,
    })
}

/// Pearson goodness of fit. Bins below [`MIN_EXPECTED`] are merged, smallest
/// first, into the next-smallest; an observation outside the expected support
/// gives an infinite statistic.
pub fn chi_square_test<K: Ord + Clone>(
    counts: &BTreeMap<K, u64>,
    expected: &OutcomeDistribution<K>,
    trials: u64,
) -> ChiSquare {
    let total = trials as f64;
    if counts.keys().any(|k| expected.probability(k) == 0.0) {
        return ChiSquare {
            statistic: f64::INFINITY,
            dof: expected.len().saturating_sub(1),
            p_value: 0.0,
            bins: expected.len(),
        };
    }
    let mut bins: Vec<(f64, f64)> = expected
        .iter()
        .map(|(k, p)| (p * total, counts.get(k).copied().unwrap_or(0) as f64))
        .collect();
    bins.sort_by(|a, b| a.0.total_cmp(&b.0));
    while bins.len() > 1 && bins[0].0 < MIN_EXPECTED {
        let (e, o) = bins.remove(0);
        bins[0].0 += e;
        bins[0].1 += o;
        bins.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let statistic: f64 = bins.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .map(|d| d.sf(statistic))
            .unwrap_or(0.0)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
        bins: bins.len(),
    }
}
