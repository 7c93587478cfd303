//! Command-line front end: signal generation, sweeps, parameter scatter,
//! matrix metrics, the memory-capacity table, and the reset-protocol run.
//!
//! Exit codes: 0 success, 1 usage error, 2 configuration/input error,
//! 3 numerical failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use timeshift_rc::config::{load_scatter, load_sweep, SweepConfig};
use timeshift_rc::dynamics::{
    generate_lorenz, generate_rossler, generate_uniform_noise, LorenzParams, RosslerParams,
};
use timeshift_rc::experiment::{
    bin_scatter, curves_to_csv, experiment_protocol_sim, memory_table, records_to_csv,
    scatter_random_params, summarize, sweep_nodes,
};
use timeshift_rc::metrics::{rank_with_mode, MemoryParams, RankMode};
use timeshift_rc::readout::read_matrix_csv;
use timeshift_rc::Error;

#[derive(Parser)]
#[command(name = "timeshift-rc", version, about = "Reservoir computers with time-shifted readout matrices")]
struct Cli {
    /// Worker threads for realization-level parallelism (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    Lorenz,
    Rossler,
    Noise,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a drive signal (x and z for the chaotic systems) as CSV.
    Generate {
        #[arg(long, value_enum)]
        system: System,
        #[arg(long, default_value_t = 10000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        transient: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep reservoir sizes at fixed shifted-matrix widths.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (results.csv, summary.json, curves.csv).
        #[arg(long)]
        out: PathBuf,
        /// Override the config master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Random-parameter scatter: (rank, memory, error) per draw.
    Scatter {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Drive/reset/drive schedule mimicking a hardware run.
    ProtocolSim {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Covariance rank and singular values of a state-matrix CSV.
    Metrics {
        /// Matrix CSV (as written by the library or any numeric CSV with header).
        #[arg(long)]
        matrix: PathBuf,
        /// Apply the threshold rule to the matrix itself instead of its covariance.
        #[arg(long)]
        direct: bool,
        #[arg(long)]
        json: bool,
    },
    /// Mean memory capacity of random tanh reservoirs (50/100 nodes,
    /// with/without squared signals).
    Table1 {
        #[arg(long, default_value_t = 100)]
        draws: usize,
        #[arg(long, default_value_t = 12345)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        let code = match e {
            Error::Diverged(_) | Error::ZeroVariance => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn run(cmd: Command) -> timeshift_rc::Result<()> {
    match cmd {
        Command::Generate { system, samples, seed, transient, out } => {
            generate(system, samples, seed, transient, &out)
        }
        Command::Sweep { config, out, seed } => {
            let mut cfg = load_sweep(&config)?;
            apply_seed(&mut cfg, seed);
            warn_underdetermined(&cfg);
            let records = sweep_nodes(&cfg)?;
            write_record_outputs(&cfg, &records, &out)
        }
        Command::Scatter { config, out, seed } => {
            let (mut cfg, spec) = load_scatter(&config)?;
            apply_seed(&mut cfg, seed);
            let records = scatter_random_params(&cfg, &spec.m_list, spec.count)?;
            let hash = cfg.config_hash();
            std::fs::create_dir_all(&out)?;
            write_text(&out.join("scatter.csv"), &records_to_csv(&records, &hash)?)?;
            let bins = bin_scatter(&records, 10);
            write_text(&out.join("binned.csv"), &records_to_csv(&bins, &hash)?)?;
            let diverged = records.iter().filter(|r| r.diverged).count();
            println!(
                "wrote {} scatter records ({} diverged) and {} bins to {}",
                records.len(),
                diverged,
                bins.len(),
                out.display()
            );
            Ok(())
        }
        Command::ProtocolSim { config, out, seed } => {
            let mut cfg = load_sweep(&config)?;
            apply_seed(&mut cfg, seed);
            let records = experiment_protocol_sim(&cfg)?;
            write_record_outputs(&cfg, &records, &out)
        }
        Command::Metrics { matrix, direct, json } => {
            let file = std::fs::File::open(&matrix)?;
            let m = read_matrix_csv(std::io::BufReader::new(file))?;
            let mode = if direct { RankMode::Direct } else { RankMode::Covariance };
            let res = rank_with_mode(&m, mode);
            if json {
                let payload = serde_json::json!({
                    "rows": m.rows(),
                    "cols": m.cols(),
                    "mode": if direct { "direct" } else { "covariance" },
                    "rank": res.rank,
                    "threshold": res.threshold,
                    "singular_values": res.singular_values,
                });
                println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
            } else {
                println!("matrix: {} rows x {} cols", m.rows(), m.cols());
                println!("mode: {}", if direct { "direct" } else { "covariance" });
                println!("rank: {}", res.rank);
                println!("threshold: {:.6e}", res.threshold);
                println!("singular values (descending):");
                for (i, s) in res.singular_values.iter().enumerate() {
                    println!("  {:>4}  {:.9e}", i + 1, s);
                }
            }
            Ok(())
        }
        Command::Table1 { draws, seed, json } => {
            let cells = memory_table(draws, seed, &MemoryParams::default())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&cells).expect("json"));
            } else {
                println!("mean memory capacity, {draws} random tanh reservoirs per cell:");
                println!("{:<22} {:>10} {:>10}", "cell", "mean MC", "std err");
                for c in &cells {
                    let label = format!("{} nodes{}", c.m, if c.squares { " + squares" } else { "" });
                    println!("{label:<22} {:>10.3} {:>10.3}", c.mean_mc, c.se_mc);
                }
            }
            Ok(())
        }
    }
}

fn apply_seed(cfg: &mut SweepConfig, seed: Option<u64>) {
    if let Some(s) = seed {
        cfg.seed = s;
    }
}

fn warn_underdetermined(cfg: &SweepConfig) {
    let rows = cfg.n_train - cfg.washout.max(cfg.tau_max.ceil() as usize);
    let cols = cfg.m2_list.iter().max().copied().unwrap_or(0);
    if rows <= cols {
        eprintln!("warning: {rows} training rows for up to {cols} columns; fits are underdetermined");
    }
}

fn write_text(path: &Path, text: &str) -> timeshift_rc::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn write_record_outputs(
    cfg: &SweepConfig,
    records: &[timeshift_rc::experiment::RealizationRecord],
    out: &Path,
) -> timeshift_rc::Result<()> {
    std::fs::create_dir_all(out)?;
    let hash = cfg.config_hash();
    write_text(&out.join("results.csv"), &records_to_csv(records, &hash)?)?;
    let summary = summarize(records, &hash);
    write_text(
        &out.join("summary.json"),
        &serde_json::to_string_pretty(&summary).expect("json"),
    )?;
    write_text(&out.join("curves.csv"), &curves_to_csv(&summary)?)?;
    let diverged = records.iter().filter(|r| r.diverged).count();
    println!(
        "wrote {} records ({} diverged) to {}",
        records.len(),
        diverged,
        out.display()
    );
    Ok(())
}

fn generate(
    system: System,
    samples: usize,
    seed: u64,
    transient: usize,
    out: &Path,
) -> timeshift_rc::Result<()> {
    if samples == 0 {
        return Err(Error::Config("samples must be >= 1".into()));
    }
    let mut w = csv::Writer::from_path(out)?;
    match system {
        System::Lorenz => {
            let (x, z) = generate_lorenz(&LorenzParams::default(), samples, seed, transient)?;
            w.write_record(["t", "x", "z"])?;
            for i in 0..samples {
                w.write_record([
                    i.to_string(),
                    x.values[i].to_string(),
                    z.values[i].to_string(),
                ])?;
            }
        }
        System::Rossler => {
            let (x, z) = generate_rossler(&RosslerParams::default(), samples, seed, transient)?;
            w.write_record(["t", "x", "z"])?;
            for i in 0..samples {
                w.write_record([
                    i.to_string(),
                    x.values[i].to_string(),
                    z.values[i].to_string(),
                ])?;
            }
        }
        System::Noise => {
            let s = generate_uniform_noise(samples, seed);
            w.write_record(["t", "value"])?;
            for (i, v) in s.values.iter().enumerate() {
                w.write_record([i.to_string(), v.to_string()])?;
            }
        }
    }
    w.flush()?;
    println!("wrote {samples} samples to {}", out.display());
    Ok(())
}
