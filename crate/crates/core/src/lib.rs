//! Spin-space simulation of a CNOT-cascade "ansible" protocol and an exact
//! audit of whether it can signal.
//!
//! - [`qlin`]: dense complex linear algebra.
//! - [`qstate`]: qubit states, gates and spin measurements.
//! - [`protocol`]: Bob's basis-encoded measurement, Alice's amplification
//!   cascade and decision rule, plus an audit of the protocol's state algebra.
//! - [`analysis`]: exact outcome distributions, distances and channel capacity.

pub mod analysis;
pub mod error;
pub mod qlin;
pub mod protocol;
pub mod qstate;

pub use error::{Error, Result};
