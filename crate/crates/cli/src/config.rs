use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qansible", version, about = "Simulate and audit a CNOT-cascade signaling protocol")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute every displayed step of the protocol's state algebra.
    Audit(Opts),
    /// Exact outcome tables for both bits under both models.
    Enumerate(Opts),
    /// Seeded Monte Carlo run checked against the exact table.
    Simulate(Opts),
    /// Signaling verdict: true dynamics vs the independent-mixture model.
    Compare(Opts),
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Total particles in Alice's register.
    #[arg(long = "n", default_value_t = 4)]
    pub n_total: usize,
    /// Particles measured along x (defaults to n - kz, or n/2).
    #[arg(long = "kx")]
    pub k_x: Option<usize>,
    /// Particles measured along z (defaults to n - kx).
    #[arg(long = "kz")]
    pub k_z: Option<usize>,
    #[arg(long = "bob-bit", default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub bob_bit: u8,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Alice reads 0 when |<S_z>| exceeds this.
    #[arg(long, default_value_t = 0.25)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Audit,
    Enumerate,
    Simulate,
    Compare,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Audit => "audit",
            CommandKind::Enumerate => "enumerate",
            CommandKind::Simulate => "simulate",
            CommandKind::Compare => "compare",
        }
    }
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliConfig {
    pub command: CommandKind,
    pub n_total: usize,
    pub k_x: usize,
    pub k_z: usize,
    pub bob_bit: u8,
    pub trials: u64,
    pub seed: u64,
    pub threshold: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl CliConfig {
    pub fn resolve(command: Command) -> Result<Self, String> {
        let (kind, opts) = match command {
            Command::Audit(o) => (CommandKind::Audit, o),
            Command::Enumerate(o) => (CommandKind::Enumerate, o),
            Command::Simulate(o) => (CommandKind::Simulate, o),
            Command::Compare(o) => (CommandKind::Compare, o),
        };
        let n = opts.n_total;
        let (k_x, k_z) = match (opts.k_x, opts.k_z) {
            (Some(x), Some(z)) => (x, z),
            (Some(x), None) => (x, n.checked_sub(x).ok_or_else(|| split_error(n, x, 0))?),
            (None, Some(z)) => (n.checked_sub(z).ok_or_else(|| split_error(n, 0, z))?, z),
            (None, None) => (n / 2, n - n / 2),
        };
        if kind != CommandKind::Audit && k_x + k_z != n {
            return Err(split_error(n, k_x, k_z));
        }
        if kind == CommandKind::Simulate && opts.trials == 0 {
            return Err("--trials must be at least 1".into());
        }
        Ok(Self {
            command: kind,
            n_total: n,
            k_x,
            k_z,
            bob_bit: opts.bob_bit,
            trials: opts.trials,
            seed: opts.seed,
            threshold: opts.threshold,
            output_format: opts.format,
            output_path: opts.out,
        })
    }
}

fn split_error(n: usize, k_x: usize, k_z: usize) -> String {
    format!("split mismatch: --kx {k_x} + --kz {k_z} must equal --n {n}")
}
