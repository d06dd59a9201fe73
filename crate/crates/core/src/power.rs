//! Linear server power model and energy integration.
//!
//! A host draws `k * P_max` when idle and scales linearly up to `P_max` at
//! full CPU utilization. Energy is integrated with the rectangle rule, which
//! is exact here because utilization is held constant within a frame.

use thiserror::Error;

use crate::model::{HostState, VmState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("maximum power must be positive, got {0}")]
    NonPositiveMaxPower(f64),
    #[error("idle fraction must lie in [0, 1], got {0}")]
    IdleFractionOutOfRange(f64),
    #[error("utilization must lie in [0, 1], got {0}")]
    UtilizationOutOfRange(f64),
    #[error("power must be non-negative, got {0}")]
    NegativePower(f64),
    #[error("interval must be non-negative, got {0}")]
    NegativeInterval(f64),
}

/// Parameters of the linear power model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModelParams {
    p_max_watts: f64,
    idle_fraction: f64,
}

impl PowerModelParams {
    pub fn new(p_max_watts: f64, idle_fraction: f64) -> Result<Self, PowerError> {
        if !p_max_watts.is_finite() || p_max_watts <= 0.0 {
            return Err(PowerError::NonPositiveMaxPower(p_max_watts));
        }
        if !(0.0..=1.0).contains(&idle_fraction) {
            return Err(PowerError::IdleFractionOutOfRange(idle_fraction));
        }
        Ok(Self {
            p_max_watts,
            idle_fraction,
        })
    }

    pub fn p_max_watts(&self) -> f64 {
        self.p_max_watts
    }

    pub fn idle_fraction(&self) -> f64 {
        self.idle_fraction
    }

    pub fn idle_watts(&self) -> f64 {
        self.idle_fraction * self.p_max_watts
    }

    /// Watts added per unit of utilization.
    pub fn slope_watts(&self) -> f64 {
        (1.0 - self.idle_fraction) * self.p_max_watts
    }

    /// Power draw in watts at CPU utilization `u`.
    pub fn power(&self, u: f64) -> Result<f64, PowerError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(PowerError::UtilizationOutOfRange(u));
        }
        Ok(self.power_clamped(u))
    }

    /// Like [`power`](Self::power) but saturates `u` into `[0, 1]`.
    pub fn power_clamped(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        self.idle_fraction * self.p_max_watts + (1.0 - self.idle_fraction) * self.p_max_watts * u
    }
}

/// Running energy total in watt-hours.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergyAccumulator {
    total_wh: f64,
}

impl EnergyAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total_wh(&self) -> f64 {
        self.total_wh
    }

    /// Adds `watts` held for `seconds` to the total.
    pub fn accumulate(self, watts: f64, seconds: f64) -> Result<Self, PowerError> {
        if watts.is_nan() || watts < 0.0 {
            return Err(PowerError::NegativePower(watts));
        }
        if seconds.is_nan() || seconds < 0.0 {
            return Err(PowerError::NegativeInterval(seconds));
        }
        Ok(Self {
            total_wh: self.total_wh + energy_wh(watts, seconds),
        })
    }

    pub(crate) fn add_wh(&mut self, wh: f64) {
        debug_assert!(wh >= 0.0);
        self.total_wh += wh;
    }
}

pub(crate) fn energy_wh(watts: f64, seconds: f64) -> f64 {
    watts * seconds / 3600.0
}

/// Power drawn by `host` given the current demand of each VM.
///
/// Powered-off hosts draw nothing; oversubscribed hosts saturate at full
/// utilization. VMs not resident on `host` are ignored.
pub fn host_power(host: &HostState, vms: &[VmState]) -> f64 {
    if !host.powered_on() {
        return 0.0;
    }
    let demand: f64 = host
        .resident_vms()
        .iter()
        .map(|id| vms[id.index()].demand_mips())
        .sum();
    host.spec()
        .power()
        .power_clamped(demand / host.spec().mips_capacity())
}
