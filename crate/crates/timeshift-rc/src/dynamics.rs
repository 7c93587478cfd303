//! Drive-signal generation: fixed-step RK4 integration of the Lorenz and
//! Rössler systems, uniform noise, and signal normalization.
//!
//! Both chaotic systems carry their time-scale factor inside the vector
//! field and are sampled on a unit output grid (`dt = 1`). The integrator
//! takes a fixed number of internal substeps per output sample: 2 for
//! Lorenz and 4 for Rössler. A single unit step is unstable for the Rössler
//! z-spikes and biases the Lorenz z statistics by >2%.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Internal RK4 substeps per unit output sample.
pub const LORENZ_SUBSTEPS: usize = 2;
pub const ROSSLER_SUBSTEPS: usize = 4;

/// Magnitude bound beyond which a trajectory is declared diverged.
const DIVERGENCE_GUARD: f64 = 1e6;

/// Uniformly sampled scalar signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub values: Vec<f64>,
    /// Integration time units per sample.
    pub dt: f64,
    pub t0: f64,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Self {
        assert!(dt > 0.0, "dt must be positive");
        Self { values, dt, t0: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Population standard deviation (divide by N). This convention is used
    /// consistently for normalization, testing error, and memory capacity.
    pub fn std(&self) -> f64 {
        population_std(&self.values)
    }

    /// Rescale to empirical mean 0 and population standard deviation 1.
    pub fn normalized(&self) -> Result<TimeSeries> {
        let m = self.mean();
        let s = self.std();
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::ZeroVariance);
        }
        Ok(TimeSeries {
            values: self.values.iter().map(|v| (v - m) / s).collect(),
            dt: self.dt,
            t0: self.t0,
        })
    }
}

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn population_std(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
}

/// One classical 4-stage Runge–Kutta step of `h` from `(t, y)`.
///
/// `f(t, y, dy)` writes the derivative into `dy`.
pub fn rk4_step<F>(f: F, y: &[f64], t: f64, h: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    assert!(h > 0.0, "step size must be positive");
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    f(t, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(t + 0.5 * h, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(t + 0.5 * h, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(t + h, &tmp, &mut k4);

    (0..n)
        .map(|i| y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Lorenz system parameters; the time-scale `tl` multiplies the vector field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub tl: f64,
}

impl Default for LorenzParams {
    fn default() -> Self {
        Self { p1: 10.0, p2: 28.0, p3: 8.0 / 3.0, tl: 0.1 }
    }
}

/// Rössler system parameters; the time-scale `tr` multiplies the vector field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosslerParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub tr: f64,
}

impl Default for RosslerParams {
    fn default() -> Self {
        Self { p1: 1.0, p2: 0.2, p3: 0.2, p4: 5.7, tr: 0.65 }
    }
}

pub fn lorenz_deriv(p: &LorenzParams, y: &[f64], dy: &mut [f64]) {
    dy[0] = p.tl * (p.p1 * (y[1] - y[0]));
    dy[1] = p.tl * (y[0] * (p.p2 - y[2]) - y[1]);
    dy[2] = p.tl * (y[0] * y[1] - p.p3 * y[2]);
}

pub fn rossler_deriv(p: &RosslerParams, y: &[f64], dy: &mut [f64]) {
    dy[0] = p.tr * (-y[1] - p.p1 * y[2]);
    dy[1] = p.tr * (y[0] + p.p2 * y[1]);
    dy[2] = p.tr * (p.p3 + y[2] * (y[0] - p.p4));
}

fn integrate_sampled<F>(
    deriv: F,
    y0: [f64; 3],
    n_samples: usize,
    transient: usize,
    substeps: usize,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let h = 1.0 / substeps as f64;
    let mut y = y0;
    let mut x_out = Vec::with_capacity(n_samples);
    let mut z_out = Vec::with_capacity(n_samples);
    let mut k1 = [0.0; 3];
    let mut k2 = [0.0; 3];
    let mut k3 = [0.0; 3];
    let mut k4 = [0.0; 3];
    let mut tmp = [0.0; 3];

    for sample in 0..transient + n_samples {
        for _ in 0..substeps {
            deriv(&y, &mut k1);
            for i in 0..3 {
                tmp[i] = y[i] + 0.5 * h * k1[i];
            }
            deriv(&tmp, &mut k2);
            for i in 0..3 {
                tmp[i] = y[i] + 0.5 * h * k2[i];
            }
            deriv(&tmp, &mut k3);
            for i in 0..3 {
                tmp[i] = y[i] + h * k3[i];
            }
            deriv(&tmp, &mut k4);
            for i in 0..3 {
                y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        if !y.iter().all(|v| v.is_finite() && v.abs() < DIVERGENCE_GUARD) {
            return Err(Error::Diverged(format!(
                "trajectory left the guard at sample {sample}"
            )));
        }
        if sample >= transient {
            x_out.push(y[0]);
            z_out.push(y[2]);
        }
    }
    Ok((x_out, z_out))
}

fn initial_condition(seed: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
    ]
}

/// Generate `(x, z)` from the Lorenz system after discarding `transient`
/// output samples. The initial condition is drawn uniformly from [-5,5]^3.
pub fn generate_lorenz(
    params: &LorenzParams,
    n_samples: usize,
    seed: u64,
    transient: usize,
) -> Result<(TimeSeries, TimeSeries)> {
    assert!(n_samples > 0);
    let (x, z) = integrate_sampled(
        |y, dy| lorenz_deriv(params, y, dy),
        initial_condition(seed),
        n_samples,
        transient,
        LORENZ_SUBSTEPS,
    )?;
    Ok((TimeSeries::new(x, 1.0), TimeSeries::new(z, 1.0)))
}

/// Generate `(x, z)` from the Rössler system; see [`generate_lorenz`].
pub fn generate_rossler(
    params: &RosslerParams,
    n_samples: usize,
    seed: u64,
    transient: usize,
) -> Result<(TimeSeries, TimeSeries)> {
    assert!(n_samples > 0);
    let (x, z) = integrate_sampled(
        |y, dy| rossler_deriv(params, y, dy),
        initial_condition(seed),
        n_samples,
        transient,
        ROSSLER_SUBSTEPS,
    )?;
    Ok((TimeSeries::new(x, 1.0), TimeSeries::new(z, 1.0)))
}

/// I.i.d. uniform samples on [-1, 1], deterministic per seed.
pub fn generate_uniform_noise(n_samples: usize, seed: u64) -> TimeSeries {
    assert!(n_samples > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n_samples).map(|_| rng.random_range(-1.0..1.0)).collect();
    TimeSeries::new(values, 1.0)
}
