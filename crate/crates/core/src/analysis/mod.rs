//! Exact and sampled statistics of Alice's register, and whether they carry
//! Bob's bit.
//!
//! Outcome tables are keyed by exact rational means ([`MeanPair`]) so equal
//! statistics from different measurement paths always land in the same bin.
//!
//! [`MeanPair`]: crate::protocol::MeanPair

mod channel;
mod distribution;
mod enumerate;
mod montecarlo;

pub use channel::{
    alice_average_state, channel_mutual_information, decision_distribution, no_signaling_check,
    paper_gap_report, trace_distance, ChannelReport, NoSignalingCheck,
};
pub use distribution::{total_variation, OutcomeDistribution, DISTRIBUTION_TOL};
pub use enumerate::{claimed_particle_state, enumerate_alice_distribution, ModelKind};
pub use montecarlo::{
    chi_square_test, monte_carlo_distribution, ChiSquare, MonteCarloReport, MIN_EXPECTED,
};

pub(crate) use enumerate::check_budget;
