//! Seeded experiment protocols: per-realization observer runs, node-count
//! sweeps at fixed shifted-matrix width, random-parameter scatter, and the
//! drive/reset/drive schedule used to mimic the hardware run.
//!
//! Realization seeds are derived statelessly from the master seed and the
//! work-unit key, and results are sorted by key before aggregation, so a
//! sweep is reproducible byte-for-byte at any parallelism degree. Diverged
//! realizations are flagged, excluded from means, and counted.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::SweepConfig;
use crate::dynamics::{
    generate_lorenz, generate_rossler, mean, population_std, LorenzParams, RosslerParams,
    TimeSeries,
};
use crate::metrics::{covariance_rank, memory_capacity, MemoryParams};
use crate::readout::{
    augment_squares, build_shifted_matrix, build_state_matrix, ridge_train, testing_error,
    ShiftSchedule, StateMatrix,
};
use crate::reservoir::{
    draw_random_params, simulate_opto, simulate_polyode, simulate_tanh, InputMask, NodeTrace,
    OptoParams, ReservoirKind, ReservoirParams,
};
use crate::{mix_seed, Error, Result};

/// Observer task: infer the z variable of a chaotic system from its x variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    LorenzObserver,
    RosslerObserver,
}

impl Task {
    /// Default maximum shift (in input samples) for the shifted matrix.
    pub fn default_tau_max(self) -> f64 {
        match self {
            Task::LorenzObserver => 10.0,
            Task::RosslerObserver => 20.0,
        }
    }

    fn generate(self, n: usize, seed: u64, transient: usize) -> Result<(TimeSeries, TimeSeries)> {
        match self {
            Task::LorenzObserver => generate_lorenz(&LorenzParams::default(), n, seed, transient),
            Task::RosslerObserver => {
                generate_rossler(&RosslerParams::default(), n, seed, transient)
            }
        }
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Task::LorenzObserver => "lorenz-observer",
            Task::RosslerObserver => "rossler-observer",
        };
        f.write_str(s)
    }
}

/// One seeded run: testing errors, covariance ranks, and memory capacities
/// for the plain and the time-shifted matrix.
#[derive(Debug, Clone, Serialize)]
pub struct RealizationRecord {
    pub task: String,
    pub kind: String,
    pub m1: usize,
    pub m2: usize,
    pub tau_max: f64,
    pub seed: u64,
    pub err_omega1: f64,
    pub err_omega2: f64,
    pub rank_omega1: usize,
    pub rank_omega2: usize,
    pub mc_omega1: f64,
    pub mc_omega2: f64,
    pub diverged: bool,
    #[serde(skip)]
    pub realization: usize,
}

/// Scatter record: one random parameter draw evaluated with the plain matrix.
#[derive(Debug, Clone, Serialize)]
pub struct ScatterRecord {
    pub task: String,
    pub kind: String,
    pub m: usize,
    pub seed: u64,
    pub rank: usize,
    pub mc: f64,
    pub err: f64,
    pub diverged: bool,
    #[serde(skip)]
    pub realization: usize,
}

fn reservoir_for(cfg: &SweepConfig, m1: usize, seed: u64) -> ReservoirParams {
    match cfg.kind {
        ReservoirKind::Opto => {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            ReservoirParams::Opto(OptoParams {
                t_l: cfg.t_l,
                beta: cfg.beta,
                rho: cfg.rho,
                phi: cfg.phi,
                theta: cfg.theta,
                m1,
                mask: InputMask::binary(m1, &mut rng),
            })
        }
        kind => draw_random_params(kind, m1, seed),
    }
}

fn simulate(params: &ReservoirParams, drive: &TimeSeries) -> NodeTrace {
    match params {
        ReservoirParams::Tanh { params, mask } => simulate_tanh(params, drive, mask),
        ReservoirParams::PolyOde(p) => simulate_polyode(p, drive),
        ReservoirParams::Opto(p) => simulate_opto(p, drive),
    }
}

/// Plain-matrix construction for the given kind (tanh bases are supplemented
/// with their squares; the shifted matrix never is).
fn plain_matrix(trace: &NodeTrace, kind: ReservoirKind, skip: usize) -> Result<StateMatrix> {
    let m = build_state_matrix(trace, skip)?;
    if kind == ReservoirKind::Tanh {
        augment_squares(&m)
    } else {
        Ok(m)
    }
}

fn diverged_record(cfg: &SweepConfig, m1: usize, m2: usize, realization: usize, seed: u64) -> RealizationRecord {
    RealizationRecord {
        task: cfg.task.to_string(),
        kind: cfg.kind.to_string(),
        m1,
        m2,
        tau_max: cfg.tau_max,
        seed,
        err_omega1: f64::NAN,
        err_omega2: f64::NAN,
        rank_omega1: 0,
        rank_omega2: 0,
        mc_omega1: f64::NAN,
        mc_omega2: f64::NAN,
        diverged: true,
        realization,
    }
}

/// Run one seeded observer realization: simulate the reservoir on a training
/// signal, build Ω1 and Ω2 over identical target rows, train both readouts,
/// evaluate on a fresh-initial-condition continuation, and attach covariance
/// ranks and memory capacities.
pub fn run_observer_realization(
    cfg: &SweepConfig,
    m1: usize,
    m2: usize,
    realization: usize,
) -> Result<RealizationRecord> {
    let mask_seed = mix_seed(cfg.seed, &[1, m1 as u64, m2 as u64, realization as u64]);
    let train_seed = mix_seed(cfg.seed, &[2]);
    let test_seed = mix_seed(cfg.seed, &[3]);
    let mc_seed = mix_seed(cfg.seed, &[4]);

    let (x_train, z_train) = cfg.task.generate(cfg.n_train, train_seed, cfg.transient)?;
    let (x_test, z_test) = cfg.task.generate(cfg.n_test, test_seed, cfg.transient)?;
    let x_train = x_train.normalized()?;
    let z_train = z_train.normalized()?;
    let x_test = x_test.normalized()?;
    let z_test = z_test.normalized()?;

    let params = reservoir_for(cfg, m1, mask_seed);
    let schedule = ShiftSchedule::new(cfg.tau_max, m2);
    let skip = cfg.washout.max(schedule.required_warmup());

    let trace_train = simulate(&params, &x_train);
    let trace_test = simulate(&params, &x_test);
    if trace_train.diverged || trace_test.diverged {
        return Ok(diverged_record(cfg, m1, m2, realization, mask_seed));
    }

    let omega1 = plain_matrix(&trace_train, cfg.kind, skip)?;
    let omega2 = build_shifted_matrix(&trace_train, &schedule, skip)?;
    let omega1_test = plain_matrix(&trace_test, cfg.kind, skip)?;
    let omega2_test = build_shifted_matrix(&trace_test, &schedule, skip)?;

    let f_train = &z_train.values[skip..];
    let f_test = &z_test.values[skip..];
    let model1 = ridge_train(&omega1, f_train, cfg.ridge)?;
    let model2 = ridge_train(&omega2, f_train, cfg.ridge)?;
    let err1 = testing_error(&omega1_test, &model1, f_test)?;
    let err2 = testing_error(&omega2_test, &model2, f_test)?;

    let rank1 = covariance_rank(&omega1).rank;
    let rank2 = covariance_rank(&omega2).rank;

    let (mc1, mc2) = if cfg.compute_mc {
        let mc_params = MemoryParams {
            n_samples: cfg.mc_samples,
            washout: cfg.mc_washout.max(schedule.required_warmup()),
            k_max: cfg.mc_k_max,
            ridge: cfg.ridge,
        };
        let kind = cfg.kind;
        let p1 = params.clone();
        let mc1 = memory_capacity(
            move |drive, skip| {
                let trace = simulate(&p1, drive);
                plain_matrix(&trace, kind, skip)
            },
            &mc_params,
            mc_seed,
        );
        let p2 = params.clone();
        let sched = schedule.clone();
        let mc2 = memory_capacity(
            move |drive, skip| {
                let trace = simulate(&p2, drive);
                build_shifted_matrix(&trace, &sched, skip)
            },
            &mc_params,
            mc_seed,
        );
        match (mc1, mc2) {
            (Ok(a), Ok(b)) => (a.total, b.total),
            // noise drive diverged the reservoir
            (Err(Error::Diverged(_)), _) | (_, Err(Error::Diverged(_))) => {
                return Ok(diverged_record(cfg, m1, m2, realization, mask_seed));
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    } else {
        (f64::NAN, f64::NAN)
    };

    Ok(RealizationRecord {
        task: cfg.task.to_string(),
        kind: cfg.kind.to_string(),
        m1,
        m2,
        tau_max: cfg.tau_max,
        seed: mask_seed,
        err_omega1: err1,
        err_omega2: err2,
        rank_omega1: rank1,
        rank_omega2: rank2,
        mc_omega1: mc1,
        mc_omega2: mc2,
        diverged: false,
        realization,
    })
}

/// Run the full (M1, M2, realization) grid in parallel. Output order is
/// independent of the parallelism degree.
pub fn sweep_nodes(cfg: &SweepConfig) -> Result<Vec<RealizationRecord>> {
    let mut work = Vec::new();
    for &m1 in &cfg.m1_list {
        for &m2 in &cfg.m2_list {
            for r in 0..cfg.realizations {
                work.push((m1, m2, r));
            }
        }
    }
    let mut records = work
        .into_par_iter()
        .map(|(m1, m2, r)| run_observer_realization(cfg, m1, m2, r))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.m1, r.m2, r.realization));
    Ok(records)
}

/// Draw random reservoir parameter sets and record (rank, memory capacity,
/// testing error) for each, using the plain matrix only.
pub fn scatter_random_params(cfg: &SweepConfig, m_list: &[usize], count: usize) -> Result<Vec<ScatterRecord>> {
    let mut work = Vec::new();
    for &m in m_list {
        for r in 0..count {
            work.push((m, r));
        }
    }
    let mut records = work
        .into_par_iter()
        .map(|(m, r)| scatter_one(cfg, m, r))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.m, r.realization));
    Ok(records)
}

fn scatter_one(cfg: &SweepConfig, m: usize, realization: usize) -> Result<ScatterRecord> {
    let draw_seed = mix_seed(cfg.seed, &[5, m as u64, realization as u64]);
    let train_seed = mix_seed(cfg.seed, &[2]);
    let test_seed = mix_seed(cfg.seed, &[3]);
    let mc_seed = mix_seed(cfg.seed, &[4]);

    let (x_train, z_train) = cfg.task.generate(cfg.n_train, train_seed, cfg.transient)?;
    let (x_test, z_test) = cfg.task.generate(cfg.n_test, test_seed, cfg.transient)?;
    let x_train = x_train.normalized()?;
    let z_train = z_train.normalized()?;
    let x_test = x_test.normalized()?;
    let z_test = z_test.normalized()?;

    let params = draw_random_params(cfg.kind, m, draw_seed);
    let skip = cfg.washout;

    let diverged = |seed| ScatterRecord {
        task: cfg.task.to_string(),
        kind: cfg.kind.to_string(),
        m,
        seed,
        rank: 0,
        mc: f64::NAN,
        err: f64::NAN,
        diverged: true,
        realization,
    };

    let trace_train = simulate(&params, &x_train);
    let trace_test = simulate(&params, &x_test);
    if trace_train.diverged || trace_test.diverged {
        return Ok(diverged(draw_seed));
    }
    let omega = plain_matrix(&trace_train, cfg.kind, skip)?;
    let omega_test = plain_matrix(&trace_test, cfg.kind, skip)?;
    let model = ridge_train(&omega, &z_train.values[skip..], cfg.ridge)?;
    let err = testing_error(&omega_test, &model, &z_test.values[skip..])?;
    let rank = covariance_rank(&omega).rank;

    let mc_params = MemoryParams {
        n_samples: cfg.mc_samples,
        washout: cfg.mc_washout,
        k_max: cfg.mc_k_max,
        ridge: cfg.ridge,
    };
    let kind = cfg.kind;
    let p = params.clone();
    let mc = match memory_capacity(
        move |drive, skip| {
            let trace = simulate(&p, drive);
            plain_matrix(&trace, kind, skip)
        },
        &mc_params,
        mc_seed,
    ) {
        Ok(r) => r.total,
        Err(Error::Diverged(_)) => return Ok(diverged(draw_seed)),
        Err(e) => return Err(e),
    };

    Ok(ScatterRecord {
        task: cfg.task.to_string(),
        kind: cfg.kind.to_string(),
        m,
        seed: draw_seed,
        rank,
        mc,
        err,
        diverged: false,
        realization,
    })
}

/// Drive/reset/drive schedule: the input is the task's x variable for
/// `n_train` samples, zero for `reset_gap` samples, then the continuation of
/// the same trajectory for `n_test` samples. Training uses the first driven
/// segment minus the washout; testing uses the full post-reset segment.
/// Normalization constants come from the training segment.
pub fn experiment_protocol_sim(cfg: &SweepConfig) -> Result<Vec<RealizationRecord>> {
    let drive_seed = mix_seed(cfg.seed, &[6]);
    let (x, z) = cfg.task.generate(cfg.n_train + cfg.n_test, drive_seed, cfg.transient)?;

    let mx = mean(&x.values[..cfg.n_train]);
    let sx = population_std(&x.values[..cfg.n_train]);
    let mz = mean(&z.values[..cfg.n_train]);
    let sz = population_std(&z.values[..cfg.n_train]);
    if sx <= 0.0 || sz <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let xn: Vec<f64> = x.values.iter().map(|v| (v - mx) / sx).collect();
    let zn: Vec<f64> = z.values.iter().map(|v| (v - mz) / sz).collect();

    let mut drive_values = Vec::with_capacity(xn.len() + cfg.reset_gap);
    drive_values.extend_from_slice(&xn[..cfg.n_train]);
    drive_values.extend(std::iter::repeat_n(0.0, cfg.reset_gap));
    drive_values.extend_from_slice(&xn[cfg.n_train..]);
    let drive = TimeSeries::new(drive_values, 1.0);

    let mut work = Vec::new();
    for &m1 in &cfg.m1_list {
        for &m2 in &cfg.m2_list {
            for r in 0..cfg.realizations {
                work.push((m1, m2, r));
            }
        }
    }
    let mut records = work
        .into_par_iter()
        .map(|(m1, m2, r)| protocol_one(cfg, &drive, &zn, m1, m2, r))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.m1, r.m2, r.realization));
    Ok(records)
}

fn protocol_one(
    cfg: &SweepConfig,
    drive: &TimeSeries,
    zn: &[f64],
    m1: usize,
    m2: usize,
    realization: usize,
) -> Result<RealizationRecord> {
    let mask_seed = mix_seed(cfg.seed, &[7, m1 as u64, m2 as u64, realization as u64]);
    let params = reservoir_for(cfg, m1, mask_seed);
    let schedule = ShiftSchedule::new(cfg.tau_max, m2);
    let skip = cfg.washout.max(schedule.required_warmup());

    let trace = simulate(&params, drive);
    if trace.diverged {
        return Ok(diverged_record(cfg, m1, m2, realization, mask_seed));
    }
    let omega1 = plain_matrix(&trace, cfg.kind, skip)?;
    let omega2 = build_shifted_matrix(&trace, &schedule, skip)?;

    // rows r correspond to drive positions skip + r
    let train_rows = cfg.n_train - skip;
    let test_start = cfg.n_train + cfg.reset_gap - skip;
    let test_rows = cfg.n_test;
    let slice_rows = |m: &StateMatrix, start: usize, len: usize| StateMatrix {
        data: m.data.rows(start, len).into_owned(),
        columns: m.columns.clone(),
        squares_augmented: m.squares_augmented,
    };
    let o1_train = slice_rows(&omega1, 0, train_rows);
    let o2_train = slice_rows(&omega2, 0, train_rows);
    let o1_test = slice_rows(&omega1, test_start, test_rows);
    let o2_test = slice_rows(&omega2, test_start, test_rows);

    let f_train = &zn[skip..cfg.n_train];
    let f_test = &zn[cfg.n_train..];
    let model1 = ridge_train(&o1_train, f_train, cfg.ridge)?;
    let model2 = ridge_train(&o2_train, f_train, cfg.ridge)?;
    let err1 = testing_error(&o1_test, &model1, f_test)?;
    let err2 = testing_error(&o2_test, &model2, f_test)?;

    Ok(RealizationRecord {
        task: cfg.task.to_string(),
        kind: cfg.kind.to_string(),
        m1,
        m2,
        tau_max: cfg.tau_max,
        seed: mask_seed,
        err_omega1: err1,
        err_omega2: err2,
        rank_omega1: covariance_rank(&o1_train).rank,
        rank_omega2: covariance_rank(&o2_train).rank,
        mc_omega1: f64::NAN,
        mc_omega2: f64::NAN,
        diverged: false,
        realization,
    })
}

/// One cell of the memory-capacity table: reservoir size × basis choice.
#[derive(Debug, Clone, Serialize)]
pub struct MemoryTableCell {
    pub m: usize,
    pub squares: bool,
    pub mean_mc: f64,
    pub se_mc: f64,
    pub n: usize,
}

/// Mean memory capacity of noise-driven random tanh reservoirs, for 50 and
/// 100 nodes, fitting with the node signals alone or supplemented with their
/// squares. Draw d uses the same parameter seed in every cell, so the
/// plain/squares comparison is paired.
pub fn memory_table(draws: usize, seed: u64, mc: &MemoryParams) -> Result<Vec<MemoryTableCell>> {
    let mc_seed = mix_seed(seed, &[9]);
    let mut cells = Vec::new();
    for m in [50usize, 100] {
        let totals: Vec<(f64, f64)> = (0..draws)
            .into_par_iter()
            .map(|d| {
                let draw_seed = mix_seed(seed, &[8, d as u64]);
                let params = draw_random_params(ReservoirKind::Tanh, m, draw_seed);
                let run = |squares: bool| {
                    let p = params.clone();
                    memory_capacity(
                        move |drive, skip| {
                            let trace = simulate(&p, drive);
                            let base = build_state_matrix(&trace, skip)?;
                            if squares {
                                augment_squares(&base)
                            } else {
                                Ok(base)
                            }
                        },
                        mc,
                        mc_seed,
                    )
                    .map(|r| r.total)
                };
                Ok((run(false)?, run(true)?))
            })
            .collect::<Result<Vec<_>>>()?;
        for squares in [false, true] {
            let vals: Vec<f64> = totals
                .iter()
                .map(|&(plain, sq)| if squares { sq } else { plain })
                .collect();
            let (mean_mc, se_mc) = mean_se(&vals);
            cells.push(MemoryTableCell { m, squares, mean_mc, se_mc, n: vals.len() });
        }
    }
    Ok(cells)
}

/// Error-vs-rank bin for scatter plots.
#[derive(Debug, Clone, Serialize)]
pub struct ScatterBin {
    pub m: usize,
    pub rank_lo: usize,
    pub rank_hi: usize,
    pub n: usize,
    pub mean_err: f64,
    pub se_err: f64,
}

/// Bin non-diverged scatter records by covariance rank (per reservoir size).
pub fn bin_scatter(records: &[ScatterRecord], bin_width: usize) -> Vec<ScatterBin> {
    assert!(bin_width >= 1);
    let mut sizes: Vec<usize> = records.iter().map(|r| r.m).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut bins = Vec::new();
    for m in sizes {
        let mut by_bin: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
        for r in records.iter().filter(|r| r.m == m && !r.diverged) {
            by_bin.entry(r.rank / bin_width).or_default().push(r.err);
        }
        for (b, errs) in by_bin {
            let (mean_err, se_err) = mean_se(&errs);
            bins.push(ScatterBin {
                m,
                rank_lo: b * bin_width,
                rank_hi: (b + 1) * bin_width,
                n: errs.len(),
                mean_err,
                se_err,
            });
        }
    }
    bins
}

// ---- aggregation and output --------------------------------------------

/// Mean and standard error of the mean (population std / sqrt(n)).
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    (mean(values), population_std(values) / (values.len() as f64).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub m1: usize,
    pub m2: usize,
    pub n_ok: usize,
    pub n_diverged: usize,
    pub mean_err_omega1: f64,
    pub se_err_omega1: f64,
    pub mean_err_omega2: f64,
    pub se_err_omega2: f64,
    pub mean_rank_omega1: f64,
    pub se_rank_omega1: f64,
    pub mean_rank_omega2: f64,
    pub se_rank_omega2: f64,
    pub mean_mc_omega1: f64,
    pub se_mc_omega1: f64,
    pub mean_mc_omega2: f64,
    pub se_mc_omega2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub config_hash: String,
    pub task: String,
    pub kind: String,
    pub tau_max: f64,
    pub groups: Vec<GroupSummary>,
}

/// Group records by (M1, M2) and summarize the non-diverged ones.
pub fn summarize(records: &[RealizationRecord], config_hash: &str) -> SweepSummary {
    let mut keys: Vec<(usize, usize)> = records.iter().map(|r| (r.m1, r.m2)).collect();
    keys.sort_unstable();
    keys.dedup();

    let groups = keys
        .iter()
        .map(|&(m1, m2)| {
            let group: Vec<&RealizationRecord> = records
                .iter()
                .filter(|r| r.m1 == m1 && r.m2 == m2)
                .collect();
            let ok: Vec<&&RealizationRecord> = group.iter().filter(|r| !r.diverged).collect();
            let col = |f: &dyn Fn(&RealizationRecord) -> f64| -> Vec<f64> {
                ok.iter().map(|r| f(r)).collect()
            };
            let (mean_err_omega1, se_err_omega1) = mean_se(&col(&|r| r.err_omega1));
            let (mean_err_omega2, se_err_omega2) = mean_se(&col(&|r| r.err_omega2));
            let (mean_rank_omega1, se_rank_omega1) = mean_se(&col(&|r| r.rank_omega1 as f64));
            let (mean_rank_omega2, se_rank_omega2) = mean_se(&col(&|r| r.rank_omega2 as f64));
            let (mean_mc_omega1, se_mc_omega1) = mean_se(&col(&|r| r.mc_omega1));
            let (mean_mc_omega2, se_mc_omega2) = mean_se(&col(&|r| r.mc_omega2));
            GroupSummary {
                m1,
                m2,
                n_ok: ok.len(),
                n_diverged: group.len() - ok.len(),
                mean_err_omega1,
                se_err_omega1,
                mean_err_omega2,
                se_err_omega2,
                mean_rank_omega1,
                se_rank_omega1,
                mean_rank_omega2,
                se_rank_omega2,
                mean_mc_omega1,
                se_mc_omega1,
                mean_mc_omega2,
                se_mc_omega2,
            }
        })
        .collect();

    let (task, kind, tau_max) = records
        .first()
        .map(|r| (r.task.clone(), r.kind.clone(), r.tau_max))
        .unwrap_or_default();
    SweepSummary { config_hash: config_hash.to_string(), task, kind, tau_max, groups }
}

/// Serialize records as CSV with a leading config-hash comment line.
pub fn records_to_csv<T: Serialize>(records: &[T], config_hash: &str) -> Result<String> {
    let mut out = format!("# config_hash={config_hash}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

/// Plot-ready per-group curves (means and standard errors vs M1).
pub fn curves_to_csv(summary: &SweepSummary) -> Result<String> {
    records_to_csv(&summary.groups, &summary.config_hash)
}
