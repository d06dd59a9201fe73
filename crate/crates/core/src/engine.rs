//! Frame-driven simulation loop.
//!
//! Each frame runs in a fixed order:
//!
//! 1. sample every active VM's utilization and set its demand;
//! 2. share each host's MIPS among its VMs and record SLA measurements;
//! 3. charge energy for the frame;
//! 4. execute work and retire finished VMs;
//! 5. ask the policy for migrations and apply them;
//! 6. switch empty hosts off (except under NPA).
//!
//! SLA and energy are therefore charged against the placement in force during
//! the frame, and the policy reacts to the loads just observed.

use thiserror::Error;

use crate::model::{
    FrameMetrics, HostId, HostState, MigrationPlan, ModelError, PolicyKind, RunMetrics, Scenario,
    VmId, VmState, Work,
};
use crate::placement::{mbfd, HostSnapshot, PlacementRequest, VmRequest};
use crate::policies::reallocate;
use crate::power::{energy_wh, host_power, EnergyAccumulator};
use crate::workload::{KeyedWorkload, SeededRng, WorkloadModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("infeasible scenario: {} VM(s) do not fit at requested capacity (first: {})", .unplaced.len(), .unplaced[0])]
    Infeasible { unplaced: Vec<VmId> },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Complete mutable state of one run.
#[derive(Debug, Clone)]
pub struct SimulationState {
    clock_s: f64,
    frame_seconds: f64,
    frame_index: u64,
    hosts: Vec<HostState>,
    vms: Vec<VmState>,
    workload: KeyedWorkload,
    rng: SeededRng,
    accumulator: EnergyAccumulator,
    frames: Vec<FrameMetrics>,
}

impl SimulationState {
    pub fn clock_s(&self) -> f64 {
        self.clock_s
    }
    pub fn frame_index(&self) -> u64 {
        self.frame_index
    }
    pub fn hosts(&self) -> &[HostState] {
        &self.hosts
    }
    pub fn vms(&self) -> &[VmState] {
        &self.vms
    }
    pub fn workload(&self) -> &KeyedWorkload {
        &self.workload
    }
    pub fn rng(&self) -> &SeededRng {
        &self.rng
    }
    pub fn energy(&self) -> EnergyAccumulator {
        self.accumulator
    }
    pub fn frames(&self) -> &[FrameMetrics] {
        &self.frames
    }

    pub fn active_vms(&self) -> usize {
        self.vms.iter().filter(|v| !v.completed()).count()
    }

    pub fn powered_on_hosts(&self) -> usize {
        self.hosts.iter().filter(|h| h.powered_on()).count()
    }

    /// Total work executed so far.
    pub fn executed(&self) -> Work {
        self.frames.iter().map(|f| f.executed).sum()
    }

    /// Verifies placement consistency and per-host hard limits.
    pub fn check_invariants(&self) -> Result<(), String> {
        for vm in &self.vms {
            match vm.host() {
                Some(h) => {
                    if vm.completed() {
                        return Err(format!("{} completed but still on {h}", vm.id()));
                    }
                    if !self.hosts[h.index()].resident_vms().contains(&vm.id()) {
                        return Err(format!("{} claims {h} but is not resident", vm.id()));
                    }
                }
                None if !vm.completed() => {
                    return Err(format!("{} is active but unplaced", vm.id()))
                }
                None => {}
            }
        }
        for host in &self.hosts {
            if !host.powered_on() && !host.is_empty() {
                return Err(format!("{} is off but hosts VMs", host.id()));
            }
            let (mut ram, mut storage) = (0, 0);
            for id in host.resident_vms() {
                let vm = &self.vms[id.index()];
                if vm.host() != Some(host.id()) {
                    return Err(format!("{} lists {id} which lives elsewhere", host.id()));
                }
                ram += vm.spec().ram_mb();
                storage += vm.spec().storage_gb();
            }
            if ram > host.spec().ram_mb() || storage > host.spec().storage_gb() {
                return Err(format!("{} exceeds memory or storage", host.id()));
            }
        }
        if self.frames.len() as u64 != self.frame_index
            || self.clock_s != self.frame_index as f64 * self.frame_seconds
        {
            return Err("frame bookkeeping out of sync".into());
        }
        Ok(())
    }
}

/// Places every VM at its requested capacity with MBFD and builds the initial
/// state, seeding randomness from `scenario.seed()`.
pub fn initial_placement(scenario: &Scenario) -> Result<SimulationState, SimError> {
    start(scenario, scenario.seed())
}

fn start(scenario: &Scenario, seed: u64) -> Result<SimulationState, SimError> {
    let mut hosts: Vec<HostState> = scenario
        .hosts()
        .iter()
        .cloned()
        .map(HostState::new)
        .collect();
    let mut vms: Vec<VmState> = scenario.vms().iter().cloned().map(VmState::new).collect();

    let req = PlacementRequest {
        vms: vms.iter().map(VmRequest::at_requested).collect(),
        hosts: scenario.hosts().iter().map(HostSnapshot::empty).collect(),
        upper_threshold: 1.0,
        allow_power_on: true,
    };
    let plan = mbfd(&req);
    if !plan.unplaced.is_empty() {
        return Err(SimError::Infeasible {
            unplaced: plan.unplaced.into_iter().collect(),
        });
    }
    for (vm, host) in &plan.assignments {
        let h = &mut hosts[host.index()];
        h.set_powered_on(true);
        h.insert_vm(vms[vm.index()].spec());
        vms[vm.index()].set_host(Some(*host));
    }
    if scenario.policy().kind() == PolicyKind::Npa {
        for h in &mut hosts {
            h.set_powered_on(true);
        }
    }

    Ok(SimulationState {
        clock_s: 0.0,
        frame_seconds: scenario.frame_seconds(),
        frame_index: 0,
        hosts,
        vms,
        workload: KeyedWorkload::new(seed),
        rng: SeededRng::new(seed),
        accumulator: EnergyAccumulator::new(),
        frames: Vec::new(),
    })
}

/// Splits `capacity` among `demands`: everyone gets their demand if it all
/// fits, otherwise each gets a share proportional to its demand.
pub fn share_mips(capacity: f64, demands: &[f64]) -> Vec<f64> {
    let total: f64 = demands.iter().sum();
    if total <= capacity {
        demands.to_vec()
    } else {
        demands.iter().map(|d| d * capacity / total).collect()
    }
}

fn apply(state: &mut SimulationState, plan: &MigrationPlan) {
    for m in plan.moves() {
        let spec = state.vms[m.vm.index()].spec().clone();
        if let Some(from) = m.from {
            state.hosts[from.index()].remove_vm(&spec);
        }
    }
    for m in plan.moves() {
        let spec = state.vms[m.vm.index()].spec().clone();
        let dest = &mut state.hosts[m.to.index()];
        dest.set_powered_on(true);
        dest.insert_vm(&spec);
        state.vms[m.vm.index()].set_host(Some(m.to));
    }
}

/// Advances the simulation by one frame. Callers stop once no VM is active.
pub fn step(state: &mut SimulationState, scenario: &Scenario) -> FrameMetrics {
    let frame = state.frame_index;
    let dt = scenario.frame_seconds();
    let kind = scenario.policy().kind();

    for vm in state.vms.iter_mut().filter(|v| !v.completed()) {
        let u = match scenario.workload() {
            WorkloadModel::Uniform => state.workload.utilization(vm.id(), frame),
            WorkloadModel::Constant(u) => u.clamp(0.0, 1.0),
        };
        vm.set_demand_mips(u * vm.spec().requested_mips());
    }

    let mut allocated = vec![0.0; state.vms.len()];
    for host in state.hosts.iter().filter(|h| h.powered_on()) {
        let ids: Vec<VmId> = host.resident_vms().iter().copied().collect();
        let demands: Vec<f64> = ids
            .iter()
            .map(|id| state.vms[id.index()].demand_mips())
            .collect();
        for (id, share) in ids
            .iter()
            .zip(share_mips(host.spec().mips_capacity(), &demands))
        {
            allocated[id.index()] = share;
        }
    }

    let mut measurements = 0;
    let mut violation_events = 0;
    let mut shortfall_sum = 0.0;
    for vm in state.vms.iter().filter(|v| !v.completed()) {
        measurements += 1;
        let demand = vm.demand_mips();
        let got = allocated[vm.id().index()];
        if got < demand {
            violation_events += 1;
            shortfall_sum += (demand - got) / demand;
        }
    }

    let energy: f64 = state
        .hosts
        .iter()
        .map(|h| {
            let watts = if kind == PolicyKind::Npa {
                h.spec().p_max_watts()
            } else {
                host_power(h, &state.vms)
            };
            energy_wh(watts, dt)
        })
        .sum();
    state.accumulator.add_wh(energy);

    let mut executed = Work::ZERO;
    for (vm, &share) in state.vms.iter_mut().zip(&allocated) {
        if vm.completed() {
            continue;
        }
        executed += vm.execute(Work::from_rate(share, dt));
        if vm.completed() {
            let host: HostId = vm.host().expect("active VMs are placed");
            vm.set_host(None);
            vm.set_demand_mips(0.0);
            let spec = vm.spec().clone();
            state.hosts[host.index()].remove_vm(&spec);
        }
    }

    let plan = if state.active_vms() > 0 {
        reallocate(&scenario.policy(), &state.hosts, &state.vms, &mut state.rng)
    } else {
        MigrationPlan::empty()
    };
    apply(state, &plan);

    if kind != PolicyKind::Npa {
        for host in state.hosts.iter_mut().filter(|h| h.is_empty()) {
            host.set_powered_on(false);
        }
    }

    let metrics = FrameMetrics {
        frame_index: frame,
        energy_wh: energy,
        violation_events,
        measurements,
        shortfall_sum,
        migrations: plan.len() as u64,
        executed,
    };
    state.frames.push(metrics.clone());
    state.frame_index += 1;
    state.clock_s = state.frame_index as f64 * dt;
    metrics
}

/// Runs `scenario` to completion under `seed`.
pub fn run(scenario: &Scenario, seed: u64) -> Result<RunMetrics, SimError> {
    let state = run_to_end(scenario, seed)?;
    Ok(RunMetrics::aggregate(
        state.frames(),
        scenario.frame_seconds(),
    ))
}

/// Like [`run`] but returns the final state for inspection.
pub fn run_to_end(scenario: &Scenario, seed: u64) -> Result<SimulationState, SimError> {
    let mut state = start(scenario, seed)?;
    while state.active_vms() > 0 {
        step(&mut state, scenario);
    }
    Ok(state)
}
