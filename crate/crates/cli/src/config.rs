//! Experiment configuration files.
//!
//! The format is line oriented. Blank lines and lines starting with `#` are
//! ignored; anything else is either a section header or a `key = value`
//! assignment. Thresholds are written in percent.
//!
//! ```text
//! seed = 0
//! runs = 10
//! frame_seconds = 5
//! hosts = 100
//! vms = 290
//! output = results.csv
//!
//! [policy]
//! kind = MM
//! lower = 30
//! upper = 70
//!
//! [grid]
//! lower = 20, 30, 40
//! upper = 70, 80, 90
//! ```
//!
//! Top-level keys must come before the first section. Each `[policy]` section
//! adds policies: with explicit thresholds it adds exactly one, without them it
//! adds the kind's default threshold set. `[grid]` takes either `lower` and
//! `upper` lists (every combination with `lower < upper`) or a `pairs` list
//! such as `30-70, 40-80`; grid points replace the thresholds of every
//! threshold-driven policy. An empty file selects the full default experiment.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use dcsim_core::model::{
    reference_hosts, reference_vms, DEFAULT_FRAME_SECONDS, DEFAULT_RUNS, REFERENCE_HOST_COUNT,
    REFERENCE_VM_COUNT,
};
use dcsim_core::{ModelError, PolicyConfig, PolicyKind, Scenario};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax {
        line,
        message: message.into(),
    }
}

fn validation(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

impl From<ModelError> for ConfigError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InvalidField { field, reason } => validation(field, reason),
            other => validation("scenario", other.to_string()),
        }
    }
}

/// Everything needed to run and report one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Fleet, frame length, master seed and run count. Its policy is the first
    /// of `policies` and is replaced per row.
    pub scenario: Scenario,
    pub policies: Vec<PolicyConfig>,
    /// `(lower, upper)` fractions applied to threshold-driven policies.
    pub threshold_grid: Option<Vec<(f64, f64)>>,
    pub output_path: Option<PathBuf>,
}

/// Threshold sets used when a policy is named without thresholds.
pub fn default_policies(kind: PolicyKind) -> Vec<PolicyConfig> {
    let two = |l, u| PolicyConfig::two_threshold(kind, l, u).expect("default thresholds are valid");
    match kind {
        PolicyKind::Npa => vec![PolicyConfig::npa()],
        PolicyKind::Dvfs => vec![PolicyConfig::dvfs()],
        PolicyKind::St => [0.5, 0.6]
            .iter()
            .map(|&u| PolicyConfig::single_threshold(u).expect("default thresholds are valid"))
            .collect(),
        PolicyKind::Mm | PolicyKind::Hpg | PolicyKind::Rc => {
            vec![two(0.3, 0.7), two(0.4, 0.8), two(0.5, 0.9)]
        }
    }
}

/// Every policy with its default thresholds, in [`PolicyKind::ALL`] order.
pub fn all_default_policies() -> Vec<PolicyConfig> {
    PolicyKind::ALL
        .iter()
        .flat_map(|&k| default_policies(k))
        .collect()
}

/// Percent to fraction, e.g. `30` to `0.3`.
pub fn from_pct(pct: f64) -> f64 {
    pct / 100.0
}

/// Fraction to a compact percent string, e.g. `0.3` to `30`.
pub fn pct(fraction: f64) -> String {
    let p = (fraction * 100.0 * 1e9).round() / 1e9;
    format!("{p}")
}

impl ExperimentSpec {
    pub fn new(
        scenario: Scenario,
        policies: Vec<PolicyConfig>,
        threshold_grid: Option<Vec<(f64, f64)>>,
        output_path: Option<PathBuf>,
    ) -> Result<Self, ConfigError> {
        if policies.is_empty() {
            return Err(validation("policy", "at least one policy is required"));
        }
        if let Some(grid) = &threshold_grid {
            if grid.is_empty() {
                return Err(validation("grid", "no grid point has lower < upper"));
            }
            for &(l, u) in grid {
                PolicyConfig::two_threshold(PolicyKind::Mm, l, u)?;
            }
        }
        let scenario = scenario.with_policy(policies[0]);
        Ok(Self {
            scenario,
            policies,
            threshold_grid,
            output_path,
        })
    }

    /// The full default experiment on the reference fleet.
    pub fn reference_default() -> Self {
        let scenario = dcsim_core::default_paper_scenario();
        Self::new(scenario, all_default_policies(), None, None).expect("defaults are valid")
    }

    /// Expanded report rows, in configured order. Grid points replace the
    /// thresholds of threshold-driven policies; duplicates are dropped.
    pub fn rows(&self) -> Vec<PolicyConfig> {
        let mut out: Vec<PolicyConfig> = Vec::new();
        let mut push = |p: PolicyConfig| {
            if !out.contains(&p) {
                out.push(p);
            }
        };
        match &self.threshold_grid {
            None => self.policies.iter().copied().for_each(&mut push),
            Some(grid) => {
                let mut pairs = grid.clone();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                let mut uppers: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                uppers.sort_by(f64::total_cmp);
                uppers.dedup();
                for p in &self.policies {
                    match p.kind() {
                        PolicyKind::Npa | PolicyKind::Dvfs => push(*p),
                        PolicyKind::St => {
                            for &u in &uppers {
                                push(
                                    PolicyConfig::single_threshold(u).expect("grid was validated"),
                                );
                            }
                        }
                        kind => {
                            for &(l, u) in &pairs {
                                push(
                                    PolicyConfig::two_threshold(kind, l, u)
                                        .expect("grid was validated"),
                                );
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Renders the experiment in the config format; [`parse_config`] reads it back
    /// to an equal spec.
    pub fn to_config_string(&self) -> String {
        let s = &self.scenario;
        let mut out = String::new();
        let _ = writeln!(out, "seed = {}", s.seed());
        let _ = writeln!(out, "runs = {}", s.runs());
        let _ = writeln!(out, "frame_seconds = {}", s.frame_seconds());
        let _ = writeln!(out, "hosts = {}", s.hosts().len());
        let _ = writeln!(out, "vms = {}", s.vms().len());
        if let Some(path) = &self.output_path {
            let _ = writeln!(out, "output = {}", path.display());
        }
        for p in &self.policies {
            let _ = writeln!(out, "\n[policy]\nkind = {}", p.kind());
            if let Some(l) = p.lower() {
                let _ = writeln!(out, "lower = {}", pct(l));
            }
            if let Some(u) = p.upper() {
                let _ = writeln!(out, "upper = {}", pct(u));
            }
        }
        if let Some(grid) = &self.threshold_grid {
            let pairs: Vec<String> = grid
                .iter()
                .map(|&(l, u)| format!("{}-{}", pct(l), pct(u)))
                .collect();
            let _ = writeln!(out, "\n[grid]\npairs = {}", pairs.join(", "));
        }
        out
    }
}

#[derive(Debug, Default)]
struct PolicySection {
    line: usize,
    kind: Option<PolicyKind>,
    lower: Option<f64>,
    upper: Option<f64>,
}

#[derive(Debug, Default)]
struct GridSection {
    line: usize,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    pairs: Option<Vec<(f64, f64)>>,
}

enum Section {
    Top,
    Policy,
    Grid,
}

fn number<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| syntax(line, format!("`{key}`: cannot parse `{value}`")))
}

fn pct_value(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = number(line, key, value.trim_end_matches('%').trim())?;
    if !v.is_finite() {
        return Err(syntax(
            line,
            format!("`{key}`: `{value}` is not a finite number"),
        ));
    }
    Ok(from_pct(v))
}

fn pct_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|v| pct_value(line, key, v.trim()))
        .collect()
}

fn pair_list(line: usize, value: &str) -> Result<Vec<(f64, f64)>, ConfigError> {
    value
        .split(',')
        .map(|item| {
            let (l, u) = item.trim().split_once('-').ok_or_else(|| {
                syntax(
                    line,
                    format!("`pairs`: expected LOWER-UPPER, got `{}`", item.trim()),
                )
            })?;
            Ok((
                pct_value(line, "pairs", l.trim())?,
                pct_value(line, "pairs", u.trim())?,
            ))
        })
        .collect()
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(syntax(line, format!("duplicate key `{key}`")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses a config file. Missing values default to the reference scenario.
pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigError> {
    let mut seed: Option<u64> = None;
    let mut runs: Option<u32> = None;
    let mut frame_seconds: Option<f64> = None;
    let mut hosts: Option<usize> = None;
    let mut vms: Option<usize> = None;
    let mut output: Option<PathBuf> = None;
    let mut policies: Vec<PolicySection> = Vec::new();
    let mut grid: Option<GridSection> = None;
    let mut section = Section::Top;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "unterminated section header"))?
                .trim();
            section = match name {
                "policy" => {
                    policies.push(PolicySection {
                        line,
                        ..Default::default()
                    });
                    Section::Policy
                }
                "grid" => {
                    if grid.is_some() {
                        return Err(syntax(line, "duplicate [grid] section"));
                    }
                    grid = Some(GridSection {
                        line,
                        ..Default::default()
                    });
                    Section::Grid
                }
                other => return Err(syntax(line, format!("unknown section [{other}]"))),
            };
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected `key = value`, got `{trimmed}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(syntax(line, "missing key before `=`"));
        }
        if value.is_empty() {
            return Err(syntax(line, format!("`{key}` has no value")));
        }
        match section {
            Section::Top => match key {
                "seed" => set_once(&mut seed, number(line, key, value)?, line, key)?,
                "runs" => set_once(&mut runs, number(line, key, value)?, line, key)?,
                "frame_seconds" => {
                    set_once(&mut frame_seconds, number(line, key, value)?, line, key)?
                }
                "hosts" => set_once(&mut hosts, number(line, key, value)?, line, key)?,
                "vms" => set_once(&mut vms, number(line, key, value)?, line, key)?,
                "output" => set_once(&mut output, PathBuf::from(value), line, key)?,
                _ => return Err(syntax(line, format!("unknown key `{key}`"))),
            },
            Section::Policy => {
                let p = policies.last_mut().expect("inside a policy section");
                match key {
                    "kind" => {
                        let kind = value
                            .parse()
                            .map_err(|_| syntax(line, format!("unknown policy `{value}`")))?;
                        set_once(&mut p.kind, kind, line, key)?
                    }
                    "lower" => set_once(&mut p.lower, pct_value(line, key, value)?, line, key)?,
                    "upper" => set_once(&mut p.upper, pct_value(line, key, value)?, line, key)?,
                    _ => return Err(syntax(line, format!("unknown key `{key}` in [policy]"))),
                }
            }
            Section::Grid => {
                let g = grid.as_mut().expect("inside the grid section");
                match key {
                    "lower" => set_once(&mut g.lower, pct_list(line, key, value)?, line, key)?,
                    "upper" => set_once(&mut g.upper, pct_list(line, key, value)?, line, key)?,
                    "pairs" => set_once(&mut g.pairs, pair_list(line, value)?, line, key)?,
                    _ => return Err(syntax(line, format!("unknown key `{key}` in [grid]"))),
                }
            }
        }
    }

    let mut configs = Vec::new();
    for p in &policies {
        let kind = p
            .kind
            .ok_or_else(|| syntax(p.line, "[policy] section without `kind`"))?;
        if p.lower.is_none() && p.upper.is_none() {
            configs.extend(default_policies(kind));
        } else {
            configs.push(PolicyConfig::new(kind, p.lower, p.upper)?);
        }
    }
    if configs.is_empty() {
        configs = all_default_policies();
    }

    let threshold_grid = match grid {
        None => None,
        Some(g) => Some(match (g.pairs, g.lower, g.upper) {
            (Some(pairs), None, None) => pairs,
            (None, Some(lower), Some(upper)) => lower
                .iter()
                .flat_map(|&l| upper.iter().map(move |&u| (l, u)))
                .filter(|(l, u)| l < u)
                .collect(),
            (Some(_), _, _) => {
                return Err(syntax(
                    g.line,
                    "[grid] takes either `pairs` or `lower`/`upper`",
                ))
            }
            _ => return Err(syntax(g.line, "[grid] needs both `lower` and `upper`")),
        }),
    };

    let scenario = build_scenario(
        hosts.unwrap_or(REFERENCE_HOST_COUNT),
        vms.unwrap_or(REFERENCE_VM_COUNT),
        configs[0],
        frame_seconds.unwrap_or(DEFAULT_FRAME_SECONDS),
        seed.unwrap_or(0),
        runs.unwrap_or(DEFAULT_RUNS),
    )?;
    ExperimentSpec::new(scenario, configs, threshold_grid, output)
}

/// Reference fleet of the given size.
pub fn build_scenario(
    hosts: usize,
    vms: usize,
    policy: PolicyConfig,
    frame_seconds: f64,
    seed: u64,
    runs: u32,
) -> Result<Scenario, ConfigError> {
    if hosts == 0 {
        return Err(validation("hosts", "at least one host is required"));
    }
    if vms == 0 {
        return Err(validation("vms", "at least one VM is required"));
    }
    Ok(Scenario::new(
        reference_hosts(hosts),
        reference_vms(vms),
        policy,
        frame_seconds,
        seed,
        runs,
    )?)
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub policies: Vec<PolicyKind>,
    /// Percent.
    pub lower: Option<f64>,
    /// Percent.
    pub upper: Option<f64>,
    pub seed: Option<u64>,
    pub runs: Option<u32>,
    pub frame_seconds: Option<f64>,
    pub hosts: Option<usize>,
    pub vms: Option<usize>,
    pub output: Option<PathBuf>,
}

fn with_thresholds(
    kind: PolicyKind,
    lower: Option<f64>,
    upper: Option<f64>,
) -> Result<Vec<PolicyConfig>, ConfigError> {
    let lower = lower.filter(|_| kind.uses_lower());
    let upper = upper.filter(|_| kind.uses_upper());
    if lower.is_none() && upper.is_none() {
        return Ok(default_policies(kind));
    }
    Ok(vec![PolicyConfig::new(kind, lower, upper)?])
}

impl Overrides {
    pub fn apply(&self, spec: ExperimentSpec) -> Result<ExperimentSpec, ConfigError> {
        let s = &spec.scenario;
        let lower = self.lower.map(from_pct);
        let upper = self.upper.map(from_pct);

        let policies = if !self.policies.is_empty() {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for &kind in &self.policies {
                if seen.insert(kind) {
                    out.extend(with_thresholds(kind, lower, upper)?);
                }
            }
            out
        } else if lower.is_some() || upper.is_some() {
            let mut out: Vec<PolicyConfig> = Vec::new();
            for p in &spec.policies {
                let l = if p.kind().uses_lower() {
                    lower.or(p.lower())
                } else {
                    None
                };
                let u = if p.kind().uses_upper() {
                    upper.or(p.upper())
                } else {
                    None
                };
                let p = PolicyConfig::new(p.kind(), l, u)?;
                if !out.contains(&p) {
                    out.push(p);
                }
            }
            out
        } else {
            spec.policies.clone()
        };

        let scenario = build_scenario(
            self.hosts.unwrap_or(s.hosts().len()),
            self.vms.unwrap_or(s.vms().len()),
            policies[0],
            self.frame_seconds.unwrap_or(s.frame_seconds()),
            self.seed.unwrap_or(s.seed()),
            self.runs.unwrap_or(s.runs()),
        )?;
        ExperimentSpec::new(
            scenario,
            policies,
            spec.threshold_grid.clone(),
            self.output.clone().or(spec.output_path.clone()),
        )
    }
}
