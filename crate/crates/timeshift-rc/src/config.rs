//! Declarative experiment configuration: a flat TOML file with a strict
//! schema (unknown keys are rejected, parse errors carry line/column info).
//!
//! Keys and defaults:
//!
//! | key          | default                | meaning                                      |
//! |--------------|------------------------|----------------------------------------------|
//! | `task`       | required               | `lorenz-observer` or `rossler-observer`      |
//! | `kind`       | required               | `tanh`, `poly-ode`, or `opto`                |
//! | `m1_list`    | `[2,5,10,20,50,100,200]` | reservoir sizes to sweep                   |
//! | `m2_list`    | `[200]`                | shifted-matrix widths                        |
//! | `tau_max`    | 10 (Lorenz) / 20 (Rössler) | max shift, in input samples              |
//! | `realizations` | 20                   | seeded repeats (input masks / random draws)  |
//! | `n_train`    | 8000                   | training drive samples                       |
//! | `n_test`     | 4000                   | testing drive samples                        |
//! | `transient`  | 1000                   | drive-generator samples discarded up front   |
//! | `washout`    | 200                    | leading matrix rows dropped                  |
//! | `ridge`      | unset (auto scale rule)| explicit ridge value                         |
//! | `ridge_scale`| unset                  | ridge as a multiple of max diag ΩᵀΩ          |
//! | `seed`       | 12345                  | master seed                                  |
//! | `theta`      | 50                     | integration steps per virtual node (opto)    |
//! | `t_l`        | 200                    | opto filter time constant                    |
//! | `beta`       | 0.5                    | opto feedback gain                           |
//! | `rho`        | 1.0                    | opto input gain                              |
//! | `phi`        | π/4                    | opto bias phase                              |
//! | `compute_mc` | true                   | attach memory capacities to sweep records    |
//! | `mc_samples` | 1700                   | noise-drive length for memory capacity       |
//! | `mc_washout` | 200                    | washout rows for memory capacity             |
//! | `mc_k_max`   | 50                     | maximum delay                                |
//! | `reset_gap`  | 100                    | zero-input samples in the reset protocol     |
//! | `m_list`     | `[50,100]`             | scatter: reservoir sizes                     |
//! | `count`      | 100                    | scatter: random draws per size               |

use serde::Deserialize;

use crate::experiment::Task;
use crate::readout::Ridge;
use crate::reservoir::ReservoirKind;
use crate::{Error, Result};

/// Resolved experiment configuration shared by the sweep, scatter, and
/// reset-protocol operations.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub task: Task,
    pub kind: ReservoirKind,
    pub m1_list: Vec<usize>,
    pub m2_list: Vec<usize>,
    /// Maximum time shift in input samples (delay periods for opto).
    pub tau_max: f64,
    pub realizations: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub transient: usize,
    pub washout: usize,
    pub ridge: Ridge,
    pub seed: u64,
    pub theta: usize,
    pub t_l: f64,
    pub beta: f64,
    pub rho: f64,
    pub phi: f64,
    pub compute_mc: bool,
    pub mc_samples: usize,
    pub mc_washout: usize,
    pub mc_k_max: usize,
    pub reset_gap: usize,
}

/// Scatter-specific settings carried by the same file.
#[derive(Debug, Clone)]
pub struct ScatterSpec {
    pub m_list: Vec<usize>,
    pub count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    task: Task,
    kind: ReservoirKind,
    m1_list: Option<Vec<usize>>,
    m2_list: Option<Vec<usize>>,
    tau_max: Option<f64>,
    realizations: Option<usize>,
    n_train: Option<usize>,
    n_test: Option<usize>,
    transient: Option<usize>,
    washout: Option<usize>,
    ridge: Option<f64>,
    ridge_scale: Option<f64>,
    seed: Option<u64>,
    theta: Option<usize>,
    t_l: Option<f64>,
    beta: Option<f64>,
    rho: Option<f64>,
    phi: Option<f64>,
    compute_mc: Option<bool>,
    mc_samples: Option<usize>,
    mc_washout: Option<usize>,
    mc_k_max: Option<usize>,
    reset_gap: Option<usize>,
    m_list: Option<Vec<usize>>,
    count: Option<usize>,
}

impl RawConfig {
    fn resolve(self) -> (SweepConfig, ScatterSpec) {
        let task = self.task;
        let cfg = SweepConfig {
            task,
            kind: self.kind,
            m1_list: self.m1_list.unwrap_or_else(|| vec![2, 5, 10, 20, 50, 100, 200]),
            m2_list: self.m2_list.unwrap_or_else(|| vec![200]),
            tau_max: self.tau_max.unwrap_or_else(|| task.default_tau_max()),
            realizations: self.realizations.unwrap_or(20),
            n_train: self.n_train.unwrap_or(8000),
            n_test: self.n_test.unwrap_or(4000),
            transient: self.transient.unwrap_or(1000),
            washout: self.washout.unwrap_or(200),
            ridge: match (self.ridge, self.ridge_scale) {
                (Some(v), None) => Ridge::Value(v),
                (None, Some(s)) => Ridge::Scale(s),
                _ => Ridge::Auto,
            },
            seed: self.seed.unwrap_or(12345),
            theta: self.theta.unwrap_or(crate::reservoir::DEFAULT_THETA),
            t_l: self.t_l.unwrap_or(200.0),
            beta: self.beta.unwrap_or(0.5),
            rho: self.rho.unwrap_or(1.0),
            phi: self.phi.unwrap_or(std::f64::consts::FRAC_PI_4),
            compute_mc: self.compute_mc.unwrap_or(true),
            mc_samples: self.mc_samples.unwrap_or(1700),
            mc_washout: self.mc_washout.unwrap_or(200),
            mc_k_max: self.mc_k_max.unwrap_or(50),
            reset_gap: self.reset_gap.unwrap_or(100),
        };
        let scatter = ScatterSpec {
            m_list: self.m_list.unwrap_or_else(|| vec![50, 100]),
            count: self.count.unwrap_or(100),
        };
        (cfg, scatter)
    }
}

impl SweepConfig {
    /// Stable short hash of the full configuration, embedded in outputs.
    pub fn config_hash(&self) -> String {
        format!("{:016x}", crate::fnv1a(format!("{self:?}").as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Config(msg));
        if self.m1_list.is_empty() || self.m2_list.is_empty() {
            return err("m1_list and m2_list must be non-empty".into());
        }
        if self.m1_list.contains(&0) || self.m2_list.contains(&0) {
            return err("reservoir sizes must be positive".into());
        }
        let m1_max = *self.m1_list.iter().max().unwrap();
        let m2_min = *self.m2_list.iter().min().unwrap();
        if m1_max > m2_min {
            return err(format!(
                "every m2 must be >= every m1 (got m1 {m1_max} > m2 {m2_min})"
            ));
        }
        if self.realizations == 0 {
            return err("realizations must be >= 1".into());
        }
        if self.tau_max < 0.0 {
            return err("tau_max must be nonnegative".into());
        }
        match self.ridge {
            Ridge::Value(v) if v < 0.0 => return err("ridge must be nonnegative".into()),
            Ridge::Scale(s) if s < 0.0 => return err("ridge_scale must be nonnegative".into()),
            _ => {}
        }
        if self.theta == 0 {
            return err("theta must be >= 1".into());
        }
        if self.t_l <= 0.0 {
            return err("t_l must be positive".into());
        }
        let skip = self.washout.max(self.tau_max.ceil() as usize);
        if self.n_train <= skip || self.n_test <= skip {
            return err(format!(
                "n_train and n_test must exceed the warmup ({skip} samples)"
            ));
        }
        if self.compute_mc {
            if self.mc_washout == 0 || self.mc_samples <= self.mc_washout.max(self.tau_max.ceil() as usize) {
                return err("mc_samples must exceed the memory-capacity washout".into());
            }
            if self.mc_k_max == 0 {
                return err("mc_k_max must be >= 1".into());
            }
        }
        Ok(())
    }
}

fn parse_raw(text: &str) -> Result<RawConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if raw.ridge.is_some() && raw.ridge_scale.is_some() {
        return Err(Error::Config("set either ridge or ridge_scale, not both".into()));
    }
    Ok(raw)
}

/// Parse and validate a sweep/protocol configuration.
pub fn parse_sweep(text: &str) -> Result<SweepConfig> {
    let (cfg, _) = parse_raw(text)?.resolve();
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a scatter configuration (base settings plus `m_list`/`count`).
pub fn parse_scatter(text: &str) -> Result<(SweepConfig, ScatterSpec)> {
    let (cfg, scatter) = parse_raw(text)?.resolve();
    cfg.validate()?;
    if scatter.m_list.is_empty() || scatter.m_list.contains(&0) {
        return Err(Error::Config("m_list must be non-empty and positive".into()));
    }
    if scatter.count == 0 {
        return Err(Error::Config("count must be >= 1".into()));
    }
    Ok((cfg, scatter))
}

pub fn load_sweep(path: &std::path::Path) -> Result<SweepConfig> {
    parse_sweep(&std::fs::read_to_string(path)?)
}

pub fn load_scatter(path: &std::path::Path) -> Result<(SweepConfig, ScatterSpec)> {
    parse_scatter(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_sweep("task = \"lorenz-observer\"\nkind = \"opto\"\n").unwrap();
        assert_eq!(cfg.tau_max, 10.0);
        assert_eq!(cfg.theta, 50);
        assert_eq!(cfg.realizations, 20);
        assert_eq!(cfg.ridge, Ridge::Auto);
        assert_eq!(cfg.m2_list, vec![200]);

        let cfg = parse_sweep("task = \"rossler-observer\"\nkind = \"opto\"\n").unwrap();
        assert_eq!(cfg.tau_max, 20.0);
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = parse_sweep(
            "task = \"lorenz-observer\"\nkind = \"opto\"\ntypo_key = 3\n",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("typo_key"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn invalid_values_are_rejected() {
        let base = "task = \"lorenz-observer\"\nkind = \"opto\"\n";
        for extra in [
            "realizations = 0\n",
            "tau_max = -1.0\n",
            "ridge = -0.5\n",
            "m1_list = [300]\n",
            "n_train = 100\nwashout = 200\n",
            "theta = 0\n",
        ] {
            let text = format!("{base}{extra}");
            assert!(parse_sweep(&text).is_err(), "accepted: {extra}");
        }
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let a = parse_sweep("task = \"lorenz-observer\"\nkind = \"opto\"\n").unwrap();
        let b = parse_sweep("task = \"lorenz-observer\"\nkind = \"opto\"\n").unwrap();
        let c = parse_sweep("task = \"lorenz-observer\"\nkind = \"opto\"\nseed = 1\n").unwrap();
        assert_eq!(a.config_hash(), b.config_hash());
        assert_ne!(a.config_hash(), c.config_hash());
    }

    #[test]
    fn scatter_spec_defaults_and_validation() {
        let (_, s) = parse_scatter("task = \"lorenz-observer\"\nkind = \"tanh\"\n").unwrap();
        assert_eq!(s.m_list, vec![50, 100]);
        assert_eq!(s.count, 100);
        assert!(parse_scatter("task = \"lorenz-observer\"\nkind = \"tanh\"\ncount = 0\n").is_err());
    }
}
