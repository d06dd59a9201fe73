//! Repeated seeded runs per policy row.

use dcsim_core::workload::child_seed;
use dcsim_core::{run, PolicyConfig, RunMetrics, SimError};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::ExperimentSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("{row}: {source}")]
    Simulation {
        row: String,
        #[source]
        source: SimError,
    },
}

impl ExperimentError {
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Self::Simulation {
                source: SimError::Infeasible { .. },
                ..
            }
        )
    }
}

/// Sample mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    /// Standard deviation uses `n - 1` and is zero for a single value.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                mean: 0.0,
                std: 0.0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Self { mean, std }
    }
}

/// Results of every run of one policy row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub policy: PolicyConfig,
    /// `(child seed, metrics)` in run order.
    pub runs: Vec<(u64, RunMetrics)>,
}

impl ReportRow {
    fn stat(&self, f: impl Fn(&RunMetrics) -> f64) -> Stat {
        Stat::of(&self.runs.iter().map(|(_, m)| f(m)).collect::<Vec<_>>())
    }

    pub fn energy_kwh(&self) -> Stat {
        self.stat(|m| m.energy_kwh)
    }
    pub fn sla_pct(&self) -> Stat {
        self.stat(|m| m.sla_violation_pct)
    }
    pub fn migrations(&self) -> Stat {
        self.stat(|m| m.migration_count as f64)
    }
    pub fn avg_sla_pct(&self) -> Stat {
        self.stat(|m| m.avg_sla_pct)
    }
    pub fn duration_s(&self) -> Stat {
        self.stat(|m| m.sim_duration_s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub seed: u64,
    pub runs: u32,
    pub frame_seconds: f64,
    pub hosts: usize,
    pub vms: usize,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub metadata: Metadata,
}

impl Report {
    pub fn metadata_of(spec: &ExperimentSpec) -> Metadata {
        let s = &spec.scenario;
        Metadata {
            seed: s.seed(),
            runs: s.runs(),
            frame_seconds: s.frame_seconds(),
            hosts: s.hosts().len(),
            vms: s.vms().len(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn row(&self, policy: &PolicyConfig) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.policy == *policy)
    }
}

/// Runs every row of `spec` `runs` times; run `i` uses `child_seed(seed, i)`.
/// Runs execute in parallel, results are assembled in row then run order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report, ExperimentError> {
    let rows = spec.rows();
    let master = spec.scenario.seed();
    let runs = u64::from(spec.scenario.runs());
    let jobs: Vec<(usize, u64)> = (0..rows.len())
        .flat_map(|r| (0..runs).map(move |i| (r, i)))
        .collect();

    let results: Vec<Result<(u64, RunMetrics), ExperimentError>> = jobs
        .par_iter()
        .map(|&(r, i)| {
            let seed = child_seed(master, i);
            let scenario = spec.scenario.clone().with_policy(rows[r]);
            run(&scenario, seed)
                .map(|m| (seed, m))
                .map_err(|source| ExperimentError::Simulation {
                    row: rows[r].label(),
                    source,
                })
        })
        .collect();

    let mut out: Vec<ReportRow> = rows
        .iter()
        .map(|&policy| ReportRow {
            policy,
            runs: Vec::with_capacity(runs as usize),
        })
        .collect();
    for (&(r, _), result) in jobs.iter().zip(results) {
        out[r].runs.push(result?);
    }
    Ok(Report {
        rows: out,
        metadata: Report::metadata_of(spec),
    })
}
