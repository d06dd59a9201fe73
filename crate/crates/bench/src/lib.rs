//! Fixtures shared by the benchmarks.

use dcsim_core::model::{reference_hosts, reference_vms};
use dcsim_core::{HostSnapshot, PlacementRequest, PolicyConfig, Scenario, VmRequest, VmState};

/// `vms` VMs at full requested capacity against `hosts` empty reference hosts.
pub fn initial_request(vms: usize, hosts: usize) -> PlacementRequest {
    PlacementRequest {
        vms: reference_vms(vms)
            .into_iter()
            .map(|s| VmRequest::at_requested(&VmState::new(s)))
            .collect(),
        hosts: reference_hosts(hosts)
            .iter()
            .map(HostSnapshot::empty)
            .collect(),
        upper_threshold: 1.0,
        allow_power_on: true,
    }
}

/// Reference fleet of the given size under `policy`, one run.
pub fn scenario(hosts: usize, vms: usize, policy: PolicyConfig) -> Scenario {
    Scenario::new(
        reference_hosts(hosts),
        reference_vms(vms),
        policy,
        5.0,
        0,
        1,
    )
    .expect("valid fleet")
}
