//! Simulation core for energy-aware consolidation of virtual machines in a
//! virtualized data center.
//!
//! The crate is split by concern:
//!
//! * [`model`] holds the domain types shared by everything else.
//! * [`power`] is the linear utilization-to-power model and energy integration.
//! * [`placement`] implements Modified Best Fit Decreasing (MBFD) placement.
//! * [`policies`] implements the static baselines and the dynamic
//!   reallocation policies along with their VM-selection heuristics.
//! * [`workload`] owns every source of randomness.
//! * [`engine`] drives the frame-by-frame simulation and produces metrics.

pub mod engine;
pub mod model;
pub mod placement;
pub mod policies;
pub mod power;
pub mod workload;

pub use engine::{initial_placement, run, run_to_end, share_mips, step, SimError, SimulationState};
pub use model::{
    default_paper_scenario, reference_hosts, reference_vms, FrameMetrics, HostId, HostSpec,
    HostState, Migration, MigrationPlan, ModelError, PlacementPlan, PolicyConfig, PolicyKind,
    RunMetrics, Scenario, VmId, VmSpec, VmState, Work,
};
pub use placement::{mbfd, power_increase, HostSnapshot, PlacementRequest, VmRequest};
pub use policies::{
    overloaded_hosts, reallocate, select_vms_hpg, select_vms_mm, select_vms_rc, underloaded_hosts,
    HostLoad, VmLoad,
};
pub use power::{EnergyAccumulator, PowerError, PowerModelParams};
pub use workload::{child_rng, sample_utilization, KeyedWorkload, SeededRng, WorkloadModel};
