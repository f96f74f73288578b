use std::collections::BTreeMap;

use qansible::analysis::{
    enumerate_alice_distribution, monte_carlo_distribution, no_signaling_check, paper_gap_report,
    ChannelReport, ChiSquare, ModelKind, NoSignalingCheck, OutcomeDistribution,
};
use qansible::protocol::{
    audit_equations, BobBit, Decision, DecisionRule, EquationEntry, MeanPair, ProtocolConfig,
};
use serde::Serialize;

use crate::config::{CliConfig, CommandKind};

#[derive(Debug, Serialize)]
pub struct ReportEnvelope<'a> {
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a CliConfig,
    pub result: &'a CommandResult,
    pub duration_seconds: f64,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum CommandResult {
    Audit(AuditResult),
    Enumerate(EnumerateResult),
    Simulate(SimulateResult),
    Compare(CompareResult),
}

#[derive(Debug, Serialize)]
pub struct AuditResult {
    pub all_pass: bool,
    pub max_deviation: f64,
    pub equations: Vec<EquationEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionRow {
    pub mean_sx: f64,
    pub mean_sz: f64,
    pub prob: f64,
}

#[derive(Debug, Serialize)]
pub struct ConditionalTable {
    pub bob_bit: u8,
    pub model: ModelKind,
    pub distribution: Vec<DistributionRow>,
}

#[derive(Debug, Serialize)]
pub struct EnumerateResult {
    pub tables: Vec<ConditionalTable>,
}

#[derive(Debug, Serialize)]
pub struct SimulatedRow {
    pub mean_sx: f64,
    pub mean_sz: f64,
    pub count: u64,
    pub prob: f64,
    pub expected_prob: f64,
}

#[derive(Debug, Serialize)]
pub struct SimulateResult {
    pub trials: u64,
    pub distribution: Vec<SimulatedRow>,
    pub chi_square: ChiSquare,
    pub cross_run_mean_sx: f64,
    pub cross_run_mean_sz: f64,
    pub decisions: BTreeMap<Decision, u64>,
}

#[derive(Debug, Serialize)]
pub struct CompareResult {
    pub channel: ChannelReport,
    pub no_signaling: NoSignalingCheck,
}

impl CommandResult {
    pub fn audit_failed(&self) -> bool {
        matches!(self, CommandResult::Audit(a) if !a.all_pass)
    }
}

pub fn run(config: &CliConfig) -> qansible::Result<CommandResult> {
    let rule = DecisionRule::new(config.threshold)?;
    let (n, kx, kz) = (config.n_total, config.k_x, config.k_z);
    Ok(match config.command {
        CommandKind::Audit => {
            let report = audit_equations();
            CommandResult::Audit(AuditResult {
                all_pass: report.all_pass(),
                max_deviation: report.max_deviation(),
                equations: report.equations,
            })
        }
        CommandKind::Enumerate => {
            let mut tables = Vec::new();
            for bit in BobBit::BOTH {
                for model in ModelKind::BOTH {
                    let dist = enumerate_alice_distribution(bit, n, kx, kz, model)?;
                    tables.push(ConditionalTable {
                        bob_bit: bit.into(),
                        model,
                        distribution: rows(&dist),
                    });
                }
            }
            CommandResult::Enumerate(EnumerateResult { tables })
        }
        CommandKind::Simulate => {
            let bit = BobBit::try_from(config.bob_bit)?;
            let pc = ProtocolConfig::new(n, kx, kz, bit, config.seed)?;
            let mc = monte_carlo_distribution(&pc, config.trials, &rule)?;
            let empirical = mc.empirical();
            let mut support: Vec<MeanPair> = mc.expected.support().copied().collect();
            support.extend(mc.counts.keys().copied());
            support.sort();
            support.dedup();
            let distribution = support
                .iter()
                .map(|m| SimulatedRow {
                    mean_sx: m.sx_f64(),
                    mean_sz: m.sz_f64(),
                    count: mc.counts.get(m).copied().unwrap_or(0),
                    prob: empirical.probability(m),
                    expected_prob: mc.expected.probability(m),
                })
                .collect();
            CommandResult::Simulate(SimulateResult {
                trials: mc.trials,
                distribution,
                chi_square: mc.chi_square,
                cross_run_mean_sx: mc.cross_run_mean_sx,
                cross_run_mean_sz: mc.cross_run_mean_sz,
                decisions: mc.decisions,
            })
        }
        CommandKind::Compare => CommandResult::Compare(CompareResult {
            channel: paper_gap_report(n, kx, kz, &rule)?,
            no_signaling: no_signaling_check(n, kx, kz)?,
        }),
    })
}

fn rows(dist: &OutcomeDistribution<MeanPair>) -> Vec<DistributionRow> {
    dist.iter()
        .map(|(m, p)| DistributionRow {
            mean_sx: m.sx_f64(),
            mean_sz: m.sz_f64(),
            prob: p,
        })
        .collect()
}

pub fn to_csv(result: &CommandResult) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match result {
        CommandResult::Audit(a) => {
            w.write_record(["id", "description", "deviation", "pass"])?;
            for e in &a.equations {
                w.serialize((&e.id, &e.description, e.deviation, e.pass))?;
            }
        }
        CommandResult::Enumerate(e) => {
            w.write_record(["bob_bit", "model", "mean_sx", "mean_sz", "prob"])?;
            for t in &e.tables {
                let model = match t.model {
                    ModelKind::TrueDynamics => "true_dynamics",
                    ModelKind::PaperIndependentMixture => "paper_independent_mixture",
                };
                for r in &t.distribution {
                    w.serialize((t.bob_bit, model, r.mean_sx, r.mean_sz, r.prob))?;
                }
            }
        }
        CommandResult::Simulate(s) => {
            w.write_record(["mean_sx", "mean_sz", "count", "prob", "expected_prob"])?;
            for r in &s.distribution {
                w.serialize((r.mean_sx, r.mean_sz, r.count, r.prob, r.expected_prob))?;
            }
        }
        CommandResult::Compare(c) => {
            w.write_record([
                "tvd_true",
                "tvd_paper_gap",
                "mi_true",
                "mi_paper_model",
                "trace_distance_states",
            ])?;
            let ch = &c.channel;
            w.serialize((
                ch.tvd_true,
                ch.tvd_paper_gap,
                ch.mutual_information_true,
                ch.mutual_information_paper_model,
                ch.trace_distance_states,
            ))?;
        }
    }
    w.into_inner().map_err(|e| e.into_error().into())
}
