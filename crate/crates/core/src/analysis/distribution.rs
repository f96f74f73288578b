use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Probabilities summing to one (within this tolerance) over a discrete support.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// Finite probability table keyed by outcome value.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<K: Ord> {
    table: BTreeMap<K, f64>,
}

impl<K: Ord + Clone> OutcomeDistribution<K> {
    /// Accumulates repeated keys and drops zero-weight entries.
    pub fn from_weights(weights: impl IntoIterator<Item = (K, f64)>) -> Result<Self> {
        let dist = Self::accumulate(weights);
        if let Some(p) = dist.table.values().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::InvalidArgument(format!("invalid probability {p}")));
        }
        let total = dist.total();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(dist)
    }

    pub(crate) fn accumulate(weights: impl IntoIterator<Item = (K, f64)>) -> Self {
        let mut table = BTreeMap::new();
        for (k, w) in weights {
            if w != 0.0 {
                *table.entry(k).or_insert(0.0) += w;
            }
        }
        Self { table }
    }

    /// All mass on `value`.
    pub fn point(value: K) -> Self {
        Self {
            table: BTreeMap::from([(value, 1.0)]),
        }
    }

    pub fn probability(&self, value: &K) -> f64 {
        self.table.get(value).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.table.iter().map(|(k, &p)| (k, p))
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.table.keys()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.table.values().sum()
    }

    /// Push the distribution forward through `f`.
    pub fn map<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> OutcomeDistribution<K2> {
        OutcomeDistribution::accumulate(self.table.iter().map(|(k, &p)| (f(k), p)))
    }

    /// `sum_k p(k) g(k)`.
    pub fn expectation(&self, mut g: impl FnMut(&K) -> f64) -> f64 {
        self.table.iter().map(|(k, &p)| p * g(k)).sum()
    }
}

/// `(1/2) sum |p - q|` over the union of supports.
pub fn total_variation<K: Ord + Clone>(p: &OutcomeDistribution<K>, q: &OutcomeDistribution<K>) -> f64 {
    let mut sum = 0.0;
    for (k, pk) in p.iter() {
        sum += (pk - q.probability(k)).abs();
    }
    for (k, qk) in q.iter() {
        if p.probability(k) == 0.0 {
            sum += qk;
        }
    }
    0.5 * sum
}
