//! Domain types shared across the simulator.
//!
//! Specification-like values (`HostSpec`, `VmSpec`, `PolicyConfig`,
//! `Scenario`) validate their invariants on construction and are immutable
//! afterwards. `HostState` and `VmState` are mutated only by the engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::power::{PowerError, PowerModelParams};
use crate::workload::WorkloadModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error(transparent)]
    Power(#[from] PowerError),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ModelError {
    ModelError::InvalidField {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostId(pub u32);

impl HostId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for HostId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "host-{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VmId(pub u32);

impl VmId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vm-{}", self.0)
    }
}

/// Amount of work in micro-MI (10^-6 millions of instructions).
///
/// Work is tracked in integers so that the total executed over a run sums to
/// the submitted total exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Work(pub u64);

impl Work {
    pub const ZERO: Work = Work(0);
    const PER_MI: f64 = 1e6;

    /// Rounds `mi` to the nearest micro-MI. Negative inputs saturate to zero.
    pub fn from_mi(mi: f64) -> Self {
        Work((mi * Self::PER_MI).round().max(0.0) as u64)
    }

    /// Work done by `mips` over `seconds`, rounded down to a whole micro-MI.
    pub fn from_rate(mips: f64, seconds: f64) -> Self {
        Work((mips * seconds * Self::PER_MI).floor().max(0.0) as u64)
    }

    pub fn as_mi(self) -> f64 {
        self.0 as f64 / Self::PER_MI
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Work {
    type Output = Work;
    fn add(self, rhs: Work) -> Work {
        Work(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Work {
    fn add_assign(&mut self, rhs: Work) {
        self.0 += rhs.0;
    }
}

impl std::iter::Sum for Work {
    fn sum<I: Iterator<Item = Work>>(iter: I) -> Work {
        iter.fold(Work::ZERO, |a, b| a + b)
    }
}

/// A physical node.
#[derive(Debug, Clone, PartialEq)]
pub struct HostSpec {
    id: HostId,
    mips_capacity: f64,
    ram_mb: u64,
    storage_gb: u64,
    power: PowerModelParams,
}

impl HostSpec {
    pub fn new(
        id: HostId,
        mips_capacity: f64,
        ram_mb: u64,
        storage_gb: u64,
        power: PowerModelParams,
    ) -> Result<Self, ModelError> {
        if !mips_capacity.is_finite() || mips_capacity <= 0.0 {
            return Err(invalid(
                "mips_capacity",
                format!("must be positive, got {mips_capacity}"),
            ));
        }
        if ram_mb == 0 {
            return Err(invalid("ram_mb", "must be positive"));
        }
        if storage_gb == 0 {
            return Err(invalid("storage_gb", "must be positive"));
        }
        Ok(Self {
            id,
            mips_capacity,
            ram_mb,
            storage_gb,
            power,
        })
    }

    pub fn id(&self) -> HostId {
        self.id
    }
    pub fn mips_capacity(&self) -> f64 {
        self.mips_capacity
    }
    pub fn ram_mb(&self) -> u64 {
        self.ram_mb
    }
    pub fn storage_gb(&self) -> u64 {
        self.storage_gb
    }
    pub fn power(&self) -> PowerModelParams {
        self.power
    }
    pub fn p_max_watts(&self) -> f64 {
        self.power.p_max_watts()
    }
    pub fn idle_fraction(&self) -> f64 {
        self.power.idle_fraction()
    }
}

/// A virtual machine request.
#[derive(Debug, Clone, PartialEq)]
pub struct VmSpec {
    id: VmId,
    requested_mips: f64,
    ram_mb: u64,
    storage_gb: u64,
    total_work_mi: f64,
}

impl VmSpec {
    pub fn new(
        id: VmId,
        requested_mips: f64,
        ram_mb: u64,
        storage_gb: u64,
        total_work_mi: f64,
    ) -> Result<Self, ModelError> {
        if !requested_mips.is_finite() || requested_mips <= 0.0 {
            return Err(invalid(
                "requested_mips",
                format!("must be positive, got {requested_mips}"),
            ));
        }
        if !total_work_mi.is_finite() || total_work_mi <= 0.0 {
            return Err(invalid(
                "total_work_mi",
                format!("must be positive, got {total_work_mi}"),
            ));
        }
        if Work::from_mi(total_work_mi).is_zero() {
            return Err(invalid("total_work_mi", "rounds to zero work"));
        }
        Ok(Self {
            id,
            requested_mips,
            ram_mb,
            storage_gb,
            total_work_mi,
        })
    }

    pub fn id(&self) -> VmId {
        self.id
    }
    pub fn requested_mips(&self) -> f64 {
        self.requested_mips
    }
    pub fn ram_mb(&self) -> u64 {
        self.ram_mb
    }
    pub fn storage_gb(&self) -> u64 {
        self.storage_gb
    }
    pub fn total_work_mi(&self) -> f64 {
        self.total_work_mi
    }
    pub fn total_work(&self) -> Work {
        Work::from_mi(self.total_work_mi)
    }
}

/// Runtime state of a host.
#[derive(Debug, Clone, PartialEq)]
pub struct HostState {
    spec: HostSpec,
    powered_on: bool,
    resident_vms: BTreeSet<VmId>,
    ram_used_mb: u64,
    storage_used_gb: u64,
}

impl HostState {
    /// A powered-off, empty host.
    pub fn new(spec: HostSpec) -> Self {
        Self {
            spec,
            powered_on: false,
            resident_vms: BTreeSet::new(),
            ram_used_mb: 0,
            storage_used_gb: 0,
        }
    }

    pub fn id(&self) -> HostId {
        self.spec.id
    }
    pub fn spec(&self) -> &HostSpec {
        &self.spec
    }
    pub fn powered_on(&self) -> bool {
        self.powered_on
    }
    pub fn resident_vms(&self) -> &BTreeSet<VmId> {
        &self.resident_vms
    }
    pub fn is_empty(&self) -> bool {
        self.resident_vms.is_empty()
    }
    pub fn ram_used_mb(&self) -> u64 {
        self.ram_used_mb
    }
    pub fn storage_used_gb(&self) -> u64 {
        self.storage_used_gb
    }

    /// Sum of current demand of resident VMs.
    pub fn demand_mips(&self, vms: &[VmState]) -> f64 {
        self.resident_vms
            .iter()
            .map(|id| vms[id.index()].demand_mips())
            .sum()
    }

    /// Current CPU utilization, unclamped.
    pub fn utilization(&self, vms: &[VmState]) -> f64 {
        self.demand_mips(vms) / self.spec.mips_capacity
    }

    pub(crate) fn set_powered_on(&mut self, on: bool) {
        debug_assert!(
            on || self.resident_vms.is_empty(),
            "cannot power off a busy host"
        );
        self.powered_on = on;
    }

    pub(crate) fn insert_vm(&mut self, vm: &VmSpec) {
        debug_assert!(self.powered_on);
        let fresh = self.resident_vms.insert(vm.id);
        debug_assert!(fresh, "{} already on {}", vm.id, self.spec.id);
        self.ram_used_mb += vm.ram_mb;
        self.storage_used_gb += vm.storage_gb;
        debug_assert!(self.ram_used_mb <= self.spec.ram_mb);
        debug_assert!(self.storage_used_gb <= self.spec.storage_gb);
    }

    pub(crate) fn remove_vm(&mut self, vm: &VmSpec) {
        let present = self.resident_vms.remove(&vm.id);
        debug_assert!(present, "{} not on {}", vm.id, self.spec.id);
        self.ram_used_mb -= vm.ram_mb;
        self.storage_used_gb -= vm.storage_gb;
    }
}

/// Runtime state of a VM.
#[derive(Debug, Clone, PartialEq)]
pub struct VmState {
    spec: VmSpec,
    host: Option<HostId>,
    demand_mips: f64,
    remaining: Work,
}

impl VmState {
    pub fn new(spec: VmSpec) -> Self {
        let remaining = spec.total_work();
        Self {
            spec,
            host: None,
            demand_mips: 0.0,
            remaining,
        }
    }

    pub fn id(&self) -> VmId {
        self.spec.id
    }
    pub fn spec(&self) -> &VmSpec {
        &self.spec
    }
    pub fn host(&self) -> Option<HostId> {
        self.host
    }
    pub fn demand_mips(&self) -> f64 {
        self.demand_mips
    }
    pub fn remaining_work(&self) -> Work {
        self.remaining
    }
    pub fn remaining_work_mi(&self) -> f64 {
        self.remaining.as_mi()
    }
    pub fn completed(&self) -> bool {
        self.remaining.is_zero()
    }

    pub(crate) fn set_demand_mips(&mut self, demand: f64) {
        debug_assert!((0.0..=self.spec.requested_mips).contains(&demand));
        self.demand_mips = demand;
    }

    pub(crate) fn set_host(&mut self, host: Option<HostId>) {
        self.host = host;
    }

    /// Executes up to `budget` of work and returns the amount actually done.
    pub(crate) fn execute(&mut self, budget: Work) -> Work {
        let done = Work(budget.0.min(self.remaining.0));
        self.remaining = Work(self.remaining.0 - done.0);
        done
    }
}

/// Target mapping produced by a placement run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlacementPlan {
    pub assignments: BTreeMap<VmId, HostId>,
    pub unplaced: BTreeSet<VmId>,
}

impl PlacementPlan {
    pub fn host_of(&self, vm: VmId) -> Option<HostId> {
        self.assignments.get(&vm).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Migration {
    pub vm: VmId,
    pub from: Option<HostId>,
    pub to: HostId,
}

/// A set of VM moves to apply atomically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MigrationPlan {
    moves: Vec<Migration>,
}

impl MigrationPlan {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(moves: Vec<Migration>) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for m in &moves {
            if !seen.insert(m.vm) {
                return Err(invalid("moves", format!("{} appears twice", m.vm)));
            }
            if m.from == Some(m.to) {
                return Err(invalid(
                    "moves",
                    format!("{} moved onto its own host", m.vm),
                ));
            }
        }
        Ok(Self { moves })
    }

    pub fn moves(&self) -> &[Migration] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Accounting for one simulated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMetrics {
    pub frame_index: u64,
    pub energy_wh: f64,
    pub violation_events: u64,
    pub measurements: u64,
    /// Sum over violation events of `(demand - allocated) / demand`.
    pub shortfall_sum: f64,
    pub migrations: u64,
    pub executed: Work,
}

/// Aggregate result of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub energy_kwh: f64,
    pub sla_violation_pct: f64,
    pub migration_count: u64,
    pub avg_sla_pct: f64,
    pub sim_duration_s: f64,
    pub frames: u64,
    pub measurements: u64,
    pub violation_events: u64,
    pub executed: Work,
}

impl RunMetrics {
    pub fn aggregate(frames: &[FrameMetrics], frame_seconds: f64) -> Self {
        let energy_wh: f64 = frames.iter().map(|f| f.energy_wh).sum();
        let measurements: u64 = frames.iter().map(|f| f.measurements).sum();
        let violation_events: u64 = frames.iter().map(|f| f.violation_events).sum();
        let shortfall: f64 = frames.iter().map(|f| f.shortfall_sum).sum();
        let sla_violation_pct = if measurements == 0 {
            0.0
        } else {
            100.0 * violation_events as f64 / measurements as f64
        };
        let avg_sla_pct = if violation_events == 0 {
            0.0
        } else {
            100.0 * shortfall / violation_events as f64
        };
        Self {
            energy_kwh: energy_wh / 1000.0,
            sla_violation_pct,
            migration_count: frames.iter().map(|f| f.migrations).sum(),
            avg_sla_pct,
            sim_duration_s: frames.len() as f64 * frame_seconds,
            frames: frames.len() as u64,
            measurements,
            violation_events,
            executed: frames.iter().map(|f| f.executed).sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    /// Non power aware: every host at maximum power, no adaptation.
    Npa,
    /// Utilization-proportional power, static placement.
    Dvfs,
    /// Single threshold: full MBFD reallocation every frame.
    St,
    /// Two thresholds, minimization of migrations.
    Mm,
    /// Two thresholds, highest potential growth.
    Hpg,
    /// Two thresholds, random choice.
    Rc,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Npa,
        PolicyKind::Dvfs,
        PolicyKind::St,
        PolicyKind::Mm,
        PolicyKind::Hpg,
        PolicyKind::Rc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Npa => "NPA",
            PolicyKind::Dvfs => "DVFS",
            PolicyKind::St => "ST",
            PolicyKind::Mm => "MM",
            PolicyKind::Hpg => "HPG",
            PolicyKind::Rc => "RC",
        }
    }

    pub fn uses_upper(self) -> bool {
        !matches!(self, PolicyKind::Npa | PolicyKind::Dvfs)
    }

    pub fn uses_lower(self) -> bool {
        matches!(self, PolicyKind::Mm | PolicyKind::Hpg | PolicyKind::Rc)
    }

    /// Whether the policy migrates VMs at run time.
    pub fn is_dynamic(self) -> bool {
        self.uses_upper()
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| invalid("policy", format!("unknown policy {s:?}")))
    }
}

/// A policy together with the thresholds it uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyConfig {
    kind: PolicyKind,
    lower: Option<f64>,
    upper: Option<f64>,
}

impl PolicyConfig {
    pub fn new(
        kind: PolicyKind,
        lower: Option<f64>,
        upper: Option<f64>,
    ) -> Result<Self, ModelError> {
        match kind {
            PolicyKind::Npa | PolicyKind::Dvfs => {
                if lower.is_some() {
                    return Err(invalid(
                        "lower_threshold",
                        format!("{kind} takes no thresholds"),
                    ));
                }
                if upper.is_some() {
                    return Err(invalid(
                        "upper_threshold",
                        format!("{kind} takes no thresholds"),
                    ));
                }
            }
            PolicyKind::St => {
                if lower.is_some() {
                    return Err(invalid(
                        "lower_threshold",
                        "ST takes only an upper threshold",
                    ));
                }
                let u = upper.ok_or_else(|| invalid("upper_threshold", "required for ST"))?;
                if !(u > 0.0 && u <= 1.0) {
                    return Err(invalid(
                        "upper_threshold",
                        format!("must lie in (0, 1], got {u}"),
                    ));
                }
            }
            PolicyKind::Mm | PolicyKind::Hpg | PolicyKind::Rc => {
                let l = lower
                    .ok_or_else(|| invalid("lower_threshold", format!("required for {kind}")))?;
                let u = upper
                    .ok_or_else(|| invalid("upper_threshold", format!("required for {kind}")))?;
                if !(0.0..=1.0).contains(&l) {
                    return Err(invalid(
                        "lower_threshold",
                        format!("must lie in [0, 1], got {l}"),
                    ));
                }
                if !(0.0..=1.0).contains(&u) {
                    return Err(invalid(
                        "upper_threshold",
                        format!("must lie in [0, 1], got {u}"),
                    ));
                }
                if l >= u {
                    return Err(invalid(
                        "lower_threshold",
                        format!("must be below the upper threshold ({l} >= {u})"),
                    ));
                }
            }
        }
        Ok(Self { kind, lower, upper })
    }

    pub fn npa() -> Self {
        Self {
            kind: PolicyKind::Npa,
            lower: None,
            upper: None,
        }
    }

    pub fn dvfs() -> Self {
        Self {
            kind: PolicyKind::Dvfs,
            lower: None,
            upper: None,
        }
    }

    pub fn single_threshold(upper: f64) -> Result<Self, ModelError> {
        Self::new(PolicyKind::St, None, Some(upper))
    }

    pub fn two_threshold(kind: PolicyKind, lower: f64, upper: f64) -> Result<Self, ModelError> {
        if !kind.uses_lower() {
            return Err(invalid(
                "policy",
                format!("{kind} is not a two-threshold policy"),
            ));
        }
        Self::new(kind, Some(lower), Some(upper))
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }
    pub fn lower(&self) -> Option<f64> {
        self.lower
    }
    pub fn upper(&self) -> Option<f64> {
        self.upper
    }

    /// Human-readable label such as `MM 30-70%` or `ST 50%`.
    pub fn label(&self) -> String {
        let pct = |f: f64| {
            let p = (f * 100.0 * 1e6).round() / 1e6;
            format!("{p}")
        };
        match (self.lower, self.upper) {
            (Some(l), Some(u)) => format!("{} {}-{}%", self.kind, pct(l), pct(u)),
            (None, Some(u)) => format!("{} {}%", self.kind, pct(u)),
            _ => self.kind.to_string(),
        }
    }
}

/// Full configuration of one experiment row, minus repetition handling.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    hosts: Vec<HostSpec>,
    vms: Vec<VmSpec>,
    policy: PolicyConfig,
    frame_seconds: f64,
    seed: u64,
    runs: u32,
    workload: WorkloadModel,
}

impl Scenario {
    /// Host and VM ids must equal their position in the respective list.
    pub fn new(
        hosts: Vec<HostSpec>,
        vms: Vec<VmSpec>,
        policy: PolicyConfig,
        frame_seconds: f64,
        seed: u64,
        runs: u32,
    ) -> Result<Self, ModelError> {
        for (i, h) in hosts.iter().enumerate() {
            if h.id().index() != i {
                return Err(invalid(
                    "hosts",
                    format!("host at position {i} has id {}", h.id().0),
                ));
            }
        }
        for (i, v) in vms.iter().enumerate() {
            if v.id().index() != i {
                return Err(invalid(
                    "vms",
                    format!("vm at position {i} has id {}", v.id().0),
                ));
            }
        }
        validate_frame_seconds(frame_seconds)?;
        validate_runs(runs)?;
        Ok(Self {
            hosts,
            vms,
            policy,
            frame_seconds,
            seed,
            runs,
            workload: WorkloadModel::Uniform,
        })
    }

    pub fn hosts(&self) -> &[HostSpec] {
        &self.hosts
    }
    pub fn vms(&self) -> &[VmSpec] {
        &self.vms
    }
    pub fn policy(&self) -> PolicyConfig {
        self.policy
    }
    pub fn frame_seconds(&self) -> f64 {
        self.frame_seconds
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn runs(&self) -> u32 {
        self.runs
    }
    pub fn workload(&self) -> WorkloadModel {
        self.workload
    }

    pub fn with_policy(mut self, policy: PolicyConfig) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// A constant workload must be positive, otherwise no VM ever finishes.
    pub fn with_workload(mut self, workload: WorkloadModel) -> Result<Self, ModelError> {
        if let WorkloadModel::Constant(u) = workload {
            if !(u > 0.0 && u <= 1.0) {
                return Err(invalid(
                    "workload",
                    format!("constant utilization must lie in (0, 1], got {u}"),
                ));
            }
        }
        self.workload = workload;
        Ok(self)
    }

    pub fn with_frame_seconds(mut self, frame_seconds: f64) -> Result<Self, ModelError> {
        validate_frame_seconds(frame_seconds)?;
        self.frame_seconds = frame_seconds;
        Ok(self)
    }

    pub fn with_runs(mut self, runs: u32) -> Result<Self, ModelError> {
        validate_runs(runs)?;
        self.runs = runs;
        Ok(self)
    }
}

fn validate_frame_seconds(frame_seconds: f64) -> Result<(), ModelError> {
    if !frame_seconds.is_finite() || frame_seconds <= 0.0 {
        return Err(invalid(
            "frame_seconds",
            format!("must be positive, got {frame_seconds}"),
        ));
    }
    Ok(())
}

fn validate_runs(runs: u32) -> Result<(), ModelError> {
    if runs == 0 {
        return Err(invalid("runs", "at least one run is required"));
    }
    Ok(())
}

pub const REFERENCE_HOST_COUNT: usize = 100;
pub const REFERENCE_VM_COUNT: usize = 290;
pub const REFERENCE_HOST_MIPS: [f64; 3] = [1000.0, 2000.0, 3000.0];
pub const REFERENCE_VM_MIPS: [f64; 4] = [250.0, 500.0, 750.0, 1000.0];
pub const REFERENCE_HOST_RAM_MB: u64 = 8192;
pub const REFERENCE_HOST_STORAGE_GB: u64 = 1024;
pub const REFERENCE_P_MAX_WATTS: f64 = 250.0;
pub const REFERENCE_IDLE_FRACTION: f64 = 0.7;
pub const REFERENCE_VM_RAM_MB: u64 = 128;
pub const REFERENCE_VM_STORAGE_GB: u64 = 1;
pub const REFERENCE_VM_WORK_MI: f64 = 150_000.0;
pub const DEFAULT_FRAME_SECONDS: f64 = 5.0;
pub const DEFAULT_RUNS: u32 = 10;

/// Hosts with capacities assigned round-robin over the three MIPS classes.
pub fn reference_hosts(count: usize) -> Vec<HostSpec> {
    let power = PowerModelParams::new(REFERENCE_P_MAX_WATTS, REFERENCE_IDLE_FRACTION)
        .expect("constant power parameters are valid");
    (0..count)
        .map(|i| {
            HostSpec::new(
                HostId(i as u32),
                REFERENCE_HOST_MIPS[i % REFERENCE_HOST_MIPS.len()],
                REFERENCE_HOST_RAM_MB,
                REFERENCE_HOST_STORAGE_GB,
                power,
            )
            .expect("constant host parameters are valid")
        })
        .collect()
}

/// VMs with requested MIPS assigned round-robin over the four classes.
pub fn reference_vms(count: usize) -> Vec<VmSpec> {
    (0..count)
        .map(|i| {
            VmSpec::new(
                VmId(i as u32),
                REFERENCE_VM_MIPS[i % REFERENCE_VM_MIPS.len()],
                REFERENCE_VM_RAM_MB,
                REFERENCE_VM_STORAGE_GB,
                REFERENCE_VM_WORK_MI,
            )
            .expect("constant vm parameters are valid")
        })
        .collect()
}

/// The reference fleet of 100 hosts and 290 VMs under the DVFS policy.
pub fn default_paper_scenario() -> Scenario {
    Scenario::new(
        reference_hosts(REFERENCE_HOST_COUNT),
        reference_vms(REFERENCE_VM_COUNT),
        PolicyConfig::dvfs(),
        DEFAULT_FRAME_SECONDS,
        0,
        DEFAULT_RUNS,
    )
    .expect("reference scenario is valid")
}
