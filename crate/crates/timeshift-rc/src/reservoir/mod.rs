//! The three reservoir nonlinearities: a tanh map, a polynomial ODE, and an
//! opto-electronic delay oscillator with time-multiplexed virtual nodes.
//!
//! Each simulation takes a drive signal and produces a [`NodeTrace`]: per-node
//! time series for the discrete reservoirs, or the raw scalar oscillator
//! signal at unit steps plus (θ, M1) metadata for the delay reservoir.

mod opto;
mod polyode;
mod tanh;

pub use opto::{opto_fixed_point, simulate_opto};
pub use polyode::simulate_polyode;
pub use tanh::simulate_tanh;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Node values beyond this magnitude mark the realization as diverged.
pub const DIVERGENCE_GUARD: f64 = 1e6;

/// Default integration steps per virtual node for the delay reservoir.
pub const DEFAULT_THETA: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReservoirKind {
    Tanh,
    PolyOde,
    Opto,
}

impl std::fmt::Display for ReservoirKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ReservoirKind::Tanh => "tanh",
            ReservoirKind::PolyOde => "poly-ode",
            ReservoirKind::Opto => "opto",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    /// Entries are ±1.
    Binary,
    /// Entries are uniform on (-1, 1).
    Uniform,
}

/// Per-node input weights. For the delay reservoir the mask is a
/// τ_D-periodic piecewise-constant weight sequence over the node slots.
#[derive(Debug, Clone, PartialEq)]
pub struct InputMask {
    pub weights: Vec<f64>,
    pub kind: MaskKind,
}

impl InputMask {
    pub fn binary(m: usize, rng: &mut impl Rng) -> Self {
        let weights = (0..m)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        Self { weights, kind: MaskKind::Binary }
    }

    pub fn uniform(m: usize, rng: &mut impl Rng) -> Self {
        let weights = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self { weights, kind: MaskKind::Uniform }
    }

    /// All-ones mask; with it the tanh map reduces to a scalar input term.
    pub fn ones(m: usize) -> Self {
        Self { weights: vec![1.0; m], kind: MaskKind::Binary }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Recurrent coupling matrix with exactly ⌈M²/2⌉ Gaussian entries, rescaled
/// to a target spectral radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjacency {
    pub entries: DMatrix<f64>,
    pub spectral_radius_target: f64,
}

impl Adjacency {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Build an M×M adjacency with 50% density and the given spectral radius.
///
/// If the raw draw has zero spectral radius (possible only for degenerate
/// patterns), the draw is retried with an incremented seed.
pub fn build_adjacency(m: usize, radius: f64, seed: u64) -> Adjacency {
    assert!(m >= 1);
    assert!(radius > 0.0);
    let n_nonzero = m * m / 2 + (m * m) % 2;
    let mut attempt = seed;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let mut positions: Vec<usize> = (0..m * m).collect();
        positions.shuffle(&mut rng);
        let mut entries = DMatrix::zeros(m, m);
        for &pos in &positions[..n_nonzero] {
            entries[(pos / m, pos % m)] = rng.sample::<f64, _>(StandardNormal);
        }
        let raw = spectral_radius(&entries);
        if raw > 0.0 {
            entries *= radius / raw;
            return Adjacency { entries, spectral_radius_target: radius };
        }
        attempt = attempt.wrapping_add(1);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TanhParams {
    pub g: f64,
    pub eps: f64,
    pub adjacency: Adjacency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyOdeParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub alpha: f64,
    pub adjacency: Adjacency,
    pub mask: InputMask,
}

/// Parameters of the delay oscillator `T_L ν̇ = -ν + β sin²(ν(t-τ_D) + φ + ρ W(t) s(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptoParams {
    /// Low-pass filter time constant T_L.
    pub t_l: f64,
    /// Feedback gain β.
    pub beta: f64,
    /// Input gain ρ (distinct from any adjacency spectral radius).
    pub rho: f64,
    /// Bias phase φ.
    pub phi: f64,
    /// Integration steps per virtual node θ.
    pub theta: usize,
    /// Number of virtual nodes M1; the delay is τ_D = M1·θ.
    pub m1: usize,
    pub mask: InputMask,
}

impl OptoParams {
    pub fn tau_d(&self) -> usize {
        self.m1 * self.theta
    }
}

/// One reservoir realization: parameters plus input mask.
#[derive(Debug, Clone, PartialEq)]
pub enum ReservoirParams {
    Tanh { params: TanhParams, mask: InputMask },
    PolyOde(PolyOdeParams),
    Opto(OptoParams),
}

impl ReservoirParams {
    pub fn kind(&self) -> ReservoirKind {
        match self {
            ReservoirParams::Tanh { .. } => ReservoirKind::Tanh,
            ReservoirParams::PolyOde(_) => ReservoirKind::PolyOde,
            ReservoirParams::Opto(_) => ReservoirKind::Opto,
        }
    }
}

/// Draw a fresh random parameter set, adjacency, and mask for one realization.
///
/// Ranges: tanh has g, ε, spectral radius uniform on (0,1); the polynomial
/// ODE has p1 ∈ (-5,0), p2 ∈ (0,1), p3 ∈ (-1,1), α ∈ (0,5), radius ∈ (0,1);
/// the delay oscillator has T_L ∈ (0,300), ρ, β ∈ (0,1), φ ∈ (0,π).
pub fn draw_random_params(kind: ReservoirKind, m: usize, seed: u64) -> ReservoirParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ReservoirKind::Tanh => {
            let g = rng.random::<f64>();
            let eps = rng.random::<f64>();
            let radius = rng.random::<f64>();
            let adj_seed = rng.random::<u64>();
            let mask = InputMask::uniform(m, &mut rng);
            ReservoirParams::Tanh {
                params: TanhParams { g, eps, adjacency: build_adjacency(m, radius, adj_seed) },
                mask,
            }
        }
        ReservoirKind::PolyOde => {
            let p1 = rng.random_range(-5.0..0.0);
            let p2 = rng.random_range(0.0..1.0);
            let p3 = rng.random_range(-1.0..1.0);
            let radius = rng.random::<f64>();
            let alpha = rng.random_range(0.0..5.0);
            let adj_seed = rng.random::<u64>();
            let mask = InputMask::uniform(m, &mut rng);
            ReservoirParams::PolyOde(PolyOdeParams {
                p1,
                p2,
                p3,
                alpha,
                adjacency: build_adjacency(m, radius, adj_seed),
                mask,
            })
        }
        ReservoirKind::Opto => {
            let t_l = rng.random_range(0.0..300.0);
            let rho = rng.random::<f64>();
            let beta = rng.random::<f64>();
            let phi = rng.random_range(0.0..std::f64::consts::PI);
            let mask = InputMask::binary(m, &mut rng);
            ReservoirParams::Opto(OptoParams {
                t_l,
                beta,
                rho,
                phi,
                theta: DEFAULT_THETA,
                m1: m,
                mask,
            })
        }
    }
}

/// Node signals produced by a reservoir simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTrace {
    pub kind: TraceKind,
    /// Set when any node value left the divergence guard; the trace is
    /// truncated at the offending step.
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceKind {
    /// `nodes[i][n]` is node i after consuming drive sample n.
    Discrete { nodes: Vec<Vec<f64>> },
    /// Raw oscillator signal: `nu[t]` is ν at integer time t = 0..=N·τ_D.
    Delay { nu: Vec<f64>, theta: usize, m1: usize },
}

impl NodeTrace {
    pub fn n_nodes(&self) -> usize {
        match &self.kind {
            TraceKind::Discrete { nodes } => nodes.len(),
            TraceKind::Delay { m1, .. } => *m1,
        }
    }

    /// Number of drive samples fully represented by the trace.
    pub fn n_samples(&self) -> usize {
        match &self.kind {
            TraceKind::Discrete { nodes } => nodes.first().map_or(0, Vec::len),
            TraceKind::Delay { nu, theta, m1 } => nu.len().saturating_sub(1) / (theta * m1),
        }
    }
}
