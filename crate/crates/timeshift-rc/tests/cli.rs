//! End-to-end checks of the command-line interface: file outputs,
//! determinism, seed overrides, exit codes, and diagnostics.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_timeshift-rc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn timeshift-rc")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {path:?}: {e}"))
}

const TINY_SWEEP: &str = "\
task = \"lorenz-observer\"
kind = \"opto\"
m1_list = [2, 3]
m2_list = [4]
tau_max = 1.0
realizations = 2
n_train = 300
n_test = 200
transient = 50
washout = 20
theta = 4
t_l = 10.0
mc_samples = 200
mc_washout = 25
mc_k_max = 5
";

#[test]
fn generate_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[
            "generate", "--system", "rossler", "--samples", "50", "--seed", "7",
            "--transient", "100", "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(read(&a), read(&b));
    assert!(read(&a).starts_with("t,x,z\n"));

    let n = dir.path().join("n.csv");
    let o = run(&["generate", "--system", "noise", "--samples", "20", "--seed", "1", "--out", n.to_str().unwrap()]);
    assert!(o.status.success());
    let text = read(&n);
    assert!(text.starts_with("t,value\n"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn sweep_outputs_row_counts_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, TINY_SWEEP).unwrap();

    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    for out in [&out1, &out2] {
        let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let results = read(&out1.join("results.csv"));
    // comment + header + one row per (m1, m2, realization)
    let (n_m1, n_m2, realizations) = (2, 1, 2);
    assert_eq!(results.lines().count(), 2 + n_m1 * n_m2 * realizations);
    assert!(results.starts_with("# config_hash="));
    assert!(out1.join("summary.json").exists());
    assert!(out1.join("curves.csv").exists());
    // byte-identical rerun
    assert_eq!(results, read(&out2.join("results.csv")));
    assert_eq!(read(&out1.join("summary.json")), read(&out2.join("summary.json")));
    assert_eq!(read(&out1.join("curves.csv")), read(&out2.join("curves.csv")));
}

#[test]
fn sweep_is_parallelism_invariant_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, TINY_SWEEP).unwrap();
    let out1 = dir.path().join("j1");
    let out2 = dir.path().join("j2");
    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap(), "--jobs", "1"]);
    assert!(o.status.success());
    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out2.to_str().unwrap(), "--jobs", "2"]);
    assert!(o.status.success());
    assert_eq!(read(&out1.join("results.csv")), read(&out2.join("results.csv")));
}

#[test]
fn seed_override_changes_only_seeded_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, TINY_SWEEP).unwrap();
    let out1 = dir.path().join("default");
    let out2 = dir.path().join("override");
    assert!(run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap()]).status.success());
    assert!(run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out2.to_str().unwrap(), "--seed", "777"]).status.success());
    let a = read(&out1.join("results.csv"));
    let b = read(&out2.join("results.csv"));
    assert_ne!(a, b);
    // structural columns agree line by line; seed-derived ones differ
    for (la, lb) in a.lines().zip(b.lines()).skip(2) {
        let fa: Vec<&str> = la.split(',').collect();
        let fb: Vec<&str> = lb.split(',').collect();
        assert_eq!(&fa[..5], &fb[..5], "task,kind,m1,m2,tau_max must match");
        assert_ne!(fa[5], fb[5], "seed column must differ");
    }
}

#[test]
fn scatter_and_protocol_sim_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(
        &cfg,
        "task = \"lorenz-observer\"\nkind = \"tanh\"\nm_list = [3, 4]\ncount = 2\n\
         n_train = 300\nn_test = 200\ntransient = 50\nwashout = 30\n\
         mc_samples = 200\nmc_washout = 25\nmc_k_max = 5\n",
    )
    .unwrap();
    let out = dir.path().join("scatter");
    let o = run(&["scatter", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let scatter = read(&out.join("scatter.csv"));
    assert_eq!(scatter.lines().count(), 2 + 2 * 2);
    assert!(out.join("binned.csv").exists());

    let pcfg = dir.path().join("proto.toml");
    std::fs::write(
        &pcfg,
        "task = \"lorenz-observer\"\nkind = \"opto\"\nm1_list = [2]\nm2_list = [3]\n\
         tau_max = 1.0\nrealizations = 2\nn_train = 300\nn_test = 150\ntransient = 50\n\
         washout = 20\ntheta = 4\nt_l = 10.0\nreset_gap = 30\ncompute_mc = false\n",
    )
    .unwrap();
    let pout = dir.path().join("proto");
    let o = run(&["protocol-sim", "--config", pcfg.to_str().unwrap(), "--out", pout.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&pout.join("results.csv")).lines().count(), 2 + 2);
}

#[test]
fn metrics_reports_rank_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();

    // identical columns -> rank 1
    let dup = dir.path().join("dup.csv");
    std::fs::write(&dup, "n1_s0,n2_s0\n1.0,1.0\n2.0,2.0\n-0.5,-0.5\n").unwrap();
    let o = run(&["metrics", "--matrix", dup.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    assert!(text.contains("rank: 1"), "{text}");

    // in-process rank must match the CLI on an exported matrix
    let trace = timeshift_rc::reservoir::NodeTrace {
        kind: timeshift_rc::reservoir::TraceKind::Discrete {
            nodes: vec![
                vec![0.1, 0.5, -0.3, 0.8, 0.2],
                vec![1.0, -0.2, 0.4, 0.0, -0.7],
                vec![0.3, 0.3, 0.3, 0.3, 0.3],
            ],
        },
        diverged: false,
    };
    let m = timeshift_rc::readout::build_state_matrix(&trace, 0).unwrap();
    let expected = timeshift_rc::metrics::covariance_rank(&m).rank;
    let path = dir.path().join("m.csv");
    let mut buf = Vec::new();
    timeshift_rc::readout::write_matrix_csv(&m, &mut buf).unwrap();
    std::fs::write(&path, buf).unwrap();
    let o = run(&["metrics", "--matrix", path.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"].as_u64().unwrap() as usize, expected);
    assert_eq!(v["mode"], "covariance");

    // empty file -> error
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["metrics", "--matrix", empty.to_str().unwrap()]);
    assert!(!o.status.success());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table1_json_has_four_cells() {
    let o = run(&["table1", "--draws", "2", "--seed", "3", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cells: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cells = cells.as_array().unwrap();
    assert_eq!(cells.len(), 4);
    let ms: Vec<u64> = cells.iter().map(|c| c["m"].as_u64().unwrap()).collect();
    assert_eq!(ms, vec![50, 50, 100, 100]);
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage error
    let o = run(&["sweep", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    // help is not an error
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    // missing config file
    let o = run(&["sweep", "--config", "/nonexistent.toml", "--out", "/tmp/x"]);
    assert_eq!(o.status.code(), Some(2));
    // malformed config carries a line-precise diagnostic
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "task = \"lorenz-observer\"\nkind = \"opto\"\nbogus = 1\n").unwrap();
    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("bogus") && err.contains("line 3"), "{err}");
    // invalid value
    let cfg2 = dir.path().join("bad2.toml");
    std::fs::write(&cfg2, "task = \"lorenz-observer\"\nkind = \"opto\"\nrealizations = 0\n").unwrap();
    let o = run(&["sweep", "--config", cfg2.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
