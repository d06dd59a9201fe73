//! Randomness and utilization sampling.
//!
//! Every run owns two sources of randomness, both built on ChaCha8
//! (`rand_chacha`), which produces the same stream on every platform:
//!
//! * [`SeededRng`], a sequential stream on ChaCha stream 0. Only policies that
//!   make random choices (RC) draw from it.
//! * [`KeyedWorkload`], a counter-based sampler. The utilization of VM `v` in
//!   frame `f` is the first 64-bit output of ChaCha8 keyed by the run seed, on
//!   stream `v + 1`, positioned at word `2 f`. The value depends only on
//!   `(seed, v, f)`, so policies that migrate or finish VMs differently still
//!   observe identical workloads.
//!
//! Per-run seeds come from [`child_rng`], which mixes the master seed with the
//! run index through two rounds of the SplitMix64 finalizer.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::VmId;

/// Sequential seeded generator with draw bookkeeping.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
    draws: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of values drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.draws += 1;
        self.inner.random::<f64>()
    }

    /// Uniform index in `0..len`. `len` must be non-zero.
    pub fn next_index(&mut self, len: usize) -> usize {
        assert!(len > 0, "cannot pick from an empty range");
        self.draws += 1;
        self.inner.random_range(0..len)
    }
}

/// Draws one utilization sample in `[0, 1)` from the stream.
pub fn sample_utilization(rng: &mut SeededRng) -> f64 {
    rng.next_f64()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run_index` under master seed `master`.
pub fn child_seed(master: u64, run_index: u64) -> u64 {
    splitmix64(master ^ splitmix64(run_index))
}

/// Independent generator for run `run_index`, derived from `rng`'s seed.
///
/// The derivation is pure: it ignores how far `rng` has advanced.
pub fn child_rng(rng: &SeededRng, run_index: u64) -> SeededRng {
    SeededRng::new(child_seed(rng.seed, run_index))
}

/// Counter-based utilization sampler keyed by `(seed, vm, frame)`.
#[derive(Debug, Clone)]
pub struct KeyedWorkload {
    seed: u64,
    draws: u64,
}

impl KeyedWorkload {
    pub fn new(seed: u64) -> Self {
        Self { seed, draws: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Utilization of `vm` during `frame`, uniform in `[0, 1)`.
    pub fn utilization(&mut self, vm: VmId, frame: u64) -> f64 {
        self.draws += 1;
        Self::peek(self.seed, vm, frame)
    }

    /// Same value as [`utilization`](Self::utilization) without bookkeeping.
    pub fn peek(seed: u64, vm: VmId, frame: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(vm.0) + 1);
        rng.set_word_pos(u128::from(frame) * 2);
        rng.random::<f64>()
    }
}

/// How VM utilization evolves over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WorkloadModel {
    /// Fresh `Uniform[0, 1)` sample per VM per frame.
    #[default]
    Uniform,
    /// Every VM pinned to the given utilization. Consumes no randomness.
    Constant(f64),
}
