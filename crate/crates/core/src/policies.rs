//! Allocation policies and VM-selection heuristics.
//!
//! NPA and DVFS never migrate. ST re-places every active VM each frame with
//! MBFD under a single upper threshold. MM, HPG and RC keep each host between
//! a lower and an upper threshold: overloaded hosts shed the VMs chosen by the
//! policy's selector, and underloaded hosts are evacuated entirely so they can
//! be switched off.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{HostId, HostState, Migration, MigrationPlan, VmId, VmState};
use crate::placement::{mbfd, HostSnapshot, PlacementRequest, VmRequest};
use crate::workload::SeededRng;

pub use crate::model::{PolicyConfig, PolicyKind};

/// A VM as seen by a selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VmLoad {
    pub id: VmId,
    pub demand_mips: f64,
    pub requested_mips: f64,
}

/// Demand picture of a single powered-on host.
#[derive(Debug, Clone, PartialEq)]
pub struct HostLoad {
    pub mips_capacity: f64,
    /// Resident VMs in ascending id order.
    pub vms: Vec<VmLoad>,
}

impl HostLoad {
    pub fn new(mips_capacity: f64, mut vms: Vec<VmLoad>) -> Self {
        vms.sort_by_key(|v| v.id);
        Self { mips_capacity, vms }
    }

    pub fn of_state(host: &HostState, vms: &[VmState]) -> Self {
        let loads = host
            .resident_vms()
            .iter()
            .map(|id| {
                let vm = &vms[id.index()];
                VmLoad {
                    id: *id,
                    demand_mips: vm.demand_mips(),
                    requested_mips: vm.spec().requested_mips(),
                }
            })
            .collect();
        Self::new(host.spec().mips_capacity(), loads)
    }

    pub fn demand_mips(&self) -> f64 {
        self.vms.iter().map(|v| v.demand_mips).sum()
    }

    pub fn utilization(&self) -> f64 {
        self.demand_mips() / self.mips_capacity
    }
}

/// Shared loop for all selectors: `pick` chooses an index into the working set
/// given the current excess in MIPS; picks continue until the host is at or
/// below `upper_threshold`.
fn shed_until_relieved(
    host: &HostLoad,
    upper_threshold: f64,
    mut pick: impl FnMut(&[VmLoad], f64) -> usize,
) -> Vec<VmId> {
    let limit = upper_threshold * host.mips_capacity;
    let mut working = host.vms.clone();
    let mut selected = Vec::new();
    loop {
        let total: f64 = working.iter().map(|v| v.demand_mips).sum();
        if total <= limit || working.is_empty() {
            return selected;
        }
        let i = pick(&working, total - limit);
        selected.push(working.remove(i).id);
    }
}

/// Minimization of Migrations: sheds the fewest VMs that bring the host back
/// under the threshold.
///
/// Each step takes the smallest VM whose demand strictly exceeds the current
/// excess; if there is none, the largest VM goes and the step repeats.
pub fn select_vms_mm(host: &HostLoad, upper_threshold: f64) -> Vec<VmId> {
    shed_until_relieved(host, upper_threshold, |working, excess| {
        let fits = working
            .iter()
            .enumerate()
            .filter(|(_, v)| v.demand_mips > excess)
            .min_by(|(_, a), (_, b)| {
                a.demand_mips
                    .total_cmp(&b.demand_mips)
                    .then(a.id.cmp(&b.id))
            });
        match fits {
            Some((i, _)) => i,
            None => {
                working
                    .iter()
                    .enumerate()
                    .max_by(|(_, a), (_, b)| {
                        a.demand_mips
                            .total_cmp(&b.demand_mips)
                            .then(b.id.cmp(&a.id))
                    })
                    .expect("working set is non-empty")
                    .0
            }
        }
    })
}

/// Highest Potential Growth: sheds VMs with the lowest demand relative to
/// their request first.
pub fn select_vms_hpg(host: &HostLoad, upper_threshold: f64) -> Vec<VmId> {
    let mut order = host.vms.clone();
    order.sort_by(|a, b| {
        let ra = a.demand_mips / a.requested_mips;
        let rb = b.demand_mips / b.requested_mips;
        ra.total_cmp(&rb).then(a.id.cmp(&b.id))
    });
    let sorted = HostLoad {
        mips_capacity: host.mips_capacity,
        vms: order,
    };
    // The working set keeps ratio order, so index 0 is always the next pick.
    shed_until_relieved(&sorted, upper_threshold, |_, _| 0)
}

/// Random Choice: sheds uniformly chosen VMs until relieved.
pub fn select_vms_rc(host: &HostLoad, upper_threshold: f64, rng: &mut SeededRng) -> Vec<VmId> {
    shed_until_relieved(host, upper_threshold, |working, _| {
        rng.next_index(working.len())
    })
}

/// Powered-on, non-empty hosts strictly below `lower_threshold`.
pub fn underloaded_hosts(
    hosts: &[HostState],
    vms: &[VmState],
    lower_threshold: f64,
) -> Vec<HostId> {
    hosts
        .iter()
        .filter(|h| h.powered_on() && !h.is_empty() && h.utilization(vms) < lower_threshold)
        .map(|h| h.id())
        .collect()
}

/// Powered-on hosts strictly above `upper_threshold`.
pub fn overloaded_hosts(hosts: &[HostState], vms: &[VmState], upper_threshold: f64) -> Vec<HostId> {
    hosts
        .iter()
        .filter(|h| h.powered_on() && h.utilization(vms) > upper_threshold)
        .map(|h| h.id())
        .collect()
}

/// Computes the migrations `config` wants given the current state.
///
/// `hosts[i]` and `vms[j]` must carry ids `i` and `j`, and every active VM
/// must be placed. Only RC consumes `rng`.
pub fn reallocate(
    config: &PolicyConfig,
    hosts: &[HostState],
    vms: &[VmState],
    rng: &mut SeededRng,
) -> MigrationPlan {
    match config.kind() {
        PolicyKind::Npa | PolicyKind::Dvfs => MigrationPlan::empty(),
        PolicyKind::St => {
            let upper = config.upper().expect("ST carries an upper threshold");
            reallocate_single_threshold(hosts, vms, upper)
        }
        PolicyKind::Mm | PolicyKind::Hpg | PolicyKind::Rc => {
            let lower = config
                .lower()
                .expect("two-threshold policy carries a lower threshold");
            let upper = config
                .upper()
                .expect("two-threshold policy carries an upper threshold");
            reallocate_two_thresholds(config.kind(), hosts, vms, lower, upper, rng)
        }
    }
}

fn active_requests(vms: &[VmState]) -> Vec<VmRequest> {
    vms.iter()
        .filter(|v| !v.completed())
        .map(VmRequest::of_state)
        .collect()
}

/// Converts target assignments into moves, skipping VMs that stay put.
fn diff(assignments: &BTreeMap<VmId, HostId>, vms: &[VmState]) -> MigrationPlan {
    let moves = assignments
        .iter()
        .filter_map(|(&vm, &to)| {
            let from = vms[vm.index()].host();
            (from != Some(to)).then_some(Migration { vm, from, to })
        })
        .collect();
    MigrationPlan::new(moves).expect("diff yields unique, non-trivial moves")
}

fn reallocate_single_threshold(hosts: &[HostState], vms: &[VmState], upper: f64) -> MigrationPlan {
    // VMs that find no room under the threshold keep their current host. They
    // are pinned there and the rest re-placed, until every VM is accounted for.
    let mut pinned: BTreeSet<VmId> = BTreeSet::new();
    loop {
        let mut snapshots: Vec<HostSnapshot> = hosts
            .iter()
            .map(|h| HostSnapshot::empty(h.spec()))
            .collect();
        for vm in &pinned {
            let state = &vms[vm.index()];
            let host = state.host().expect("active VMs are placed");
            let snap = &mut snapshots[host.index()];
            let req = VmRequest::of_state(state);
            snap.powered_on = true;
            snap.demand_mips += req.demand_mips;
            snap.ram_used_mb += req.ram_mb;
            snap.storage_used_gb += req.storage_gb;
        }
        let req = PlacementRequest {
            vms: active_requests(vms)
                .into_iter()
                .filter(|v| !pinned.contains(&v.id))
                .collect(),
            hosts: snapshots,
            upper_threshold: upper,
            allow_power_on: true,
        };
        let plan = mbfd(&req);
        if plan.unplaced.is_empty() {
            return diff(&plan.assignments, vms);
        }
        pinned.extend(plan.unplaced);
    }
}

fn reallocate_two_thresholds(
    kind: PolicyKind,
    hosts: &[HostState],
    vms: &[VmState],
    lower: f64,
    upper: f64,
    rng: &mut SeededRng,
) -> MigrationPlan {
    let mut snapshots: Vec<HostSnapshot> = hosts
        .iter()
        .map(|h| HostSnapshot::of_state(h, vms))
        .collect();

    let mut shed: Vec<(HostId, VmRequest)> = Vec::new();
    for id in overloaded_hosts(hosts, vms, upper) {
        let load = HostLoad::of_state(&hosts[id.index()], vms);
        let picked = match kind {
            PolicyKind::Mm => select_vms_mm(&load, upper),
            PolicyKind::Hpg => select_vms_hpg(&load, upper),
            PolicyKind::Rc => select_vms_rc(&load, upper, rng),
            _ => unreachable!("only two-threshold policies reach here"),
        };
        for vm in picked {
            let req = VmRequest::of_state(&vms[vm.index()]);
            snapshots[id.index()].release(&req);
            shed.push((id, req));
        }
    }

    // Evacuation is all-or-nothing per host: a host whose VMs cannot all be
    // placed keeps them and becomes an ordinary destination again. A shed VM
    // with nowhere to go stays put and its footprint returns to its source.
    let mut evacuating: BTreeSet<HostId> =
        underloaded_hosts(hosts, vms, lower).into_iter().collect();
    loop {
        let mut candidates: Vec<VmRequest> = shed.iter().map(|(_, vm)| *vm).collect();
        for id in &evacuating {
            candidates.extend(hosts[id.index()].resident_vms().iter().map(|vm| VmRequest {
                running_hosts_only: true,
                ..VmRequest::of_state(&vms[vm.index()])
            }));
        }
        let req = PlacementRequest {
            vms: candidates,
            hosts: snapshots
                .iter()
                .filter(|s| !evacuating.contains(&s.id))
                .cloned()
                .collect(),
            upper_threshold: upper,
            allow_power_on: true,
        };
        let plan = mbfd(&req);
        let stuck: Vec<HostId> = evacuating
            .iter()
            .copied()
            .filter(|id| {
                hosts[id.index()]
                    .resident_vms()
                    .iter()
                    .any(|vm| plan.unplaced.contains(vm))
            })
            .collect();
        let (kept, stranded): (Vec<_>, Vec<_>) = shed
            .iter()
            .partition(|(_, vm)| !plan.unplaced.contains(&vm.id));
        if stuck.is_empty() && stranded.is_empty() {
            return diff(&plan.assignments, vms);
        }
        for id in stuck {
            evacuating.remove(&id);
        }
        for (source, vm) in &stranded {
            snapshots[source.index()].commit(vm);
        }
        shed = kept;
    }
}
