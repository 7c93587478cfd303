//! Simulation library and experiment harness for small reservoir computers
//! whose readout basis is enlarged with ordered time shifts.
//!
//! A reservoir computer drives a fixed nonlinear dynamical system with an
//! input signal and fits a target signal as a linear combination of the node
//! time series (ridge regression). This crate splits that construction into
//! two parts: a small reservoir of `M1` physical (or virtual) nodes, and a
//! larger matrix of `M2` ordered time-shifted copies of the node signals.
//! The shifted matrix has higher covariance rank and memory capacity, and a
//! lower testing error on chaotic observer tasks, than the unshifted matrix
//! of the same reservoir.
//!
//! Modules:
//! - [`dynamics`]: fixed-step RK4, Lorenz/Rössler drive signals, uniform noise
//! - [`reservoir`]: tanh map, polynomial ODE, and opto-electronic delay reservoirs
//! - [`readout`]: state matrices, time-shift schedules, ridge training, testing error
//! - [`metrics`]: covariance rank and memory capacity
//! - [`experiment`]: seeded realization sweeps, parameter scatter, reset protocol
//! - [`config`]: declarative sweep configuration files

pub mod config;
pub mod dynamics;
pub mod experiment;
pub mod metrics;
pub mod readout;
pub mod reservoir;

pub use dynamics::TimeSeries;
pub use readout::{ReadoutModel, Ridge, ShiftSchedule, StateMatrix};
pub use reservoir::{NodeTrace, ReservoirKind, ReservoirParams};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A trajectory or node signal left the divergence guard.
    #[error("diverged: {0}")]
    Diverged(String),
    /// An operation that needs signal variance received a constant input.
    #[error("zero-variance input")]
    ZeroVariance,
    /// Dimension or length mismatch between inputs.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// Invalid configuration value or file.
    #[error("config error: {0}")]
    Config(String),
    /// A shift schedule demands samples before the start of the trace.
    #[error("insufficient warmup: schedule needs {needed} leading samples, have {have}")]
    Warmup { needed: usize, have: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Derive a child seed from a master seed and a stable key.
///
/// Stateless (no RNG stream is shared between work units), so realization
/// seeds do not depend on scheduling order or parallelism degree.
pub fn mix_seed(master: u64, parts: &[u64]) -> u64 {
    let mut z = master ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        z = splitmix64(z ^ splitmix64(p));
    }
    splitmix64(z)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over a byte string; used to stamp outputs with a config hash.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
