//! Modified Best Fit Decreasing (MBFD) placement.
//!
//! VMs are taken in decreasing order of current utilization and each one is put on
//! the feasible host whose power draw grows the least. A powered-off host is a
//! valid target, but its cost includes the whole idle draw, so activation only
//! wins when nothing already running can take the VM. The allocation loop is
//! `O(n * m)` for `n` VMs and `m` hosts.

use std::cmp::Ordering;

use crate::model::{HostId, HostSpec, HostState, PlacementPlan, VmId, VmState};
use crate::power::PowerModelParams;

/// Placement-relevant view of a host.
#[derive(Debug, Clone, PartialEq)]
pub struct HostSnapshot {
    pub id: HostId,
    pub mips_capacity: f64,
    pub ram_mb: u64,
    pub storage_gb: u64,
    pub power: PowerModelParams,
    pub powered_on: bool,
    pub demand_mips: f64,
    pub ram_used_mb: u64,
    pub storage_used_gb: u64,
}

impl HostSnapshot {
    /// A powered-off host with nothing on it.
    pub fn empty(spec: &HostSpec) -> Self {
        Self {
            id: spec.id(),
            mips_capacity: spec.mips_capacity(),
            ram_mb: spec.ram_mb(),
            storage_gb: spec.storage_gb(),
            power: spec.power(),
            powered_on: false,
            demand_mips: 0.0,
            ram_used_mb: 0,
            storage_used_gb: 0,
        }
    }

    /// Snapshot of a live host, using each resident VM's current demand.
    pub fn of_state(host: &HostState, vms: &[VmState]) -> Self {
        Self {
            powered_on: host.powered_on(),
            demand_mips: host.demand_mips(vms),
            ram_used_mb: host.ram_used_mb(),
            storage_used_gb: host.storage_used_gb(),
            ..Self::empty(host.spec())
        }
    }

    pub fn utilization(&self) -> f64 {
        self.demand_mips / self.mips_capacity
    }

    /// Removes a VM's footprint, e.g. for a VM about to leave.
    pub fn release(&mut self, vm: &VmRequest) {
        self.demand_mips = (self.demand_mips - vm.demand_mips).max(0.0);
        self.ram_used_mb -= vm.ram_mb;
        self.storage_used_gb -= vm.storage_gb;
    }

    fn admits(&self, vm: &VmRequest, upper_threshold: f64, allow_power_on: bool) -> bool {
        (self.powered_on || (allow_power_on && !vm.running_hosts_only))
            && self.demand_mips + vm.demand_mips <= upper_threshold * self.mips_capacity
            && self.ram_used_mb + vm.ram_mb <= self.ram_mb
            && self.storage_used_gb + vm.storage_gb <= self.storage_gb
    }

    pub(crate) fn commit(&mut self, vm: &VmRequest) {
        self.powered_on = true;
        self.demand_mips += vm.demand_mips;
        self.ram_used_mb += vm.ram_mb;
        self.storage_used_gb += vm.storage_gb;
    }
}

/// A VM to be placed, sized by its current demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VmRequest {
    pub id: VmId,
    pub demand_mips: f64,
    pub requested_mips: f64,
    pub ram_mb: u64,
    pub storage_gb: u64,
    /// Restricts this VM to hosts that are already powered on, regardless of
    /// the request-wide `allow_power_on`.
    pub running_hosts_only: bool,
}

impl VmRequest {
    pub fn of_state(vm: &VmState) -> Self {
        Self {
            id: vm.id(),
            demand_mips: vm.demand_mips(),
            requested_mips: vm.spec().requested_mips(),
            ram_mb: vm.spec().ram_mb(),
            storage_gb: vm.spec().storage_gb(),
            running_hosts_only: false,
        }
    }

    /// Fraction of the requested capacity currently demanded.
    pub fn utilization(&self) -> f64 {
        self.demand_mips / self.requested_mips
    }

    /// Sized at the VM's full requested capacity.
    pub fn at_requested(vm: &VmState) -> Self {
        Self {
            demand_mips: vm.spec().requested_mips(),
            ..Self::of_state(vm)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementRequest {
    pub vms: Vec<VmRequest>,
    pub hosts: Vec<HostSnapshot>,
    /// Fraction of capacity a host's total demand may not exceed.
    pub upper_threshold: f64,
    pub allow_power_on: bool,
}

/// Extra watts drawn by `host` if a VM demanding `vm_demand_mips` lands on it.
///
/// For a powered-off host this is the full draw at the VM's utilization,
/// idle component included.
pub fn power_increase(host: &HostSnapshot, vm_demand_mips: f64) -> f64 {
    debug_assert!(vm_demand_mips >= 0.0);
    let added = vm_demand_mips / host.mips_capacity;
    if host.powered_on {
        let u = host.utilization();
        // Clamp the increment rather than differencing two powers, so hosts
        // with equal capacity and headroom produce bit-identical costs.
        let effective = if u + added <= 1.0 {
            added
        } else {
            (1.0 - u).max(0.0)
        };
        host.power.slope_watts() * effective
    } else {
        host.power.power_clamped(added)
    }
}

/// Orders VMs by decreasing utilization (demand over requested capacity),
/// ties by ascending id.
pub(crate) fn placement_order(a: &VmRequest, b: &VmRequest) -> Ordering {
    b.utilization()
        .total_cmp(&a.utilization())
        .then_with(|| a.id.cmp(&b.id))
}

/// Runs MBFD over `req`. VMs with no feasible host end up in `unplaced`.
pub fn mbfd(req: &PlacementRequest) -> PlacementPlan {
    assert!(
        req.upper_threshold > 0.0 && req.upper_threshold <= 1.0,
        "upper threshold must lie in (0, 1], got {}",
        req.upper_threshold
    );
    let mut vms = req.vms.clone();
    vms.sort_by(placement_order);

    let mut hosts = req.hosts.clone();
    hosts.sort_by_key(|h| h.id);

    let mut plan = PlacementPlan::default();
    for vm in &vms {
        let mut best: Option<(usize, f64)> = None;
        for (i, host) in hosts.iter().enumerate() {
            if !host.admits(vm, req.upper_threshold, req.allow_power_on) {
                continue;
            }
            let cost = power_increase(host, vm.demand_mips);
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((i, cost));
            }
        }
        match best {
            Some((i, _)) => {
                hosts[i].commit(vm);
                plan.assignments.insert(vm.id, hosts[i].id);
            }
            None => {
                plan.unplaced.insert(vm.id);
            }
        }
    }
    plan
}
