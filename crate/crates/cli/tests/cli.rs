//! End-to-end tests of the `dpg` binary: exit codes, artifact layout, CSV
//! determinism, and config handling.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dpg_cli::config::ExperimentConfig;
use dpg_cli::runner::CSV_HEADER;

fn dpg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dpg"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run_in(dir: &Path, config: &Path) -> Output {
    dpg().arg("run").arg(config).current_dir(dir).output().unwrap()
}

const GROUND_STATE: &str = r#"
output_dir = "out"

[lattice]
dim = 2
radius = 2

[exponents]
p = 1.5
q = 2.5
r = 7.0

[coefficient]
profile = "coercive"
c = 1.0
s = 1.0

[mode]
kind = "ground_state"
t = 0.5

[solver]
grad_tol = 1e-6
restarts = 1
seed = 3
"#;

#[test]
fn zero_source_monotone_writes_zero_solution_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "zero.toml",
        r#"
output_dir = "out"

[lattice]
dim = 2
radius = 1

[exponents]
p = 1.5
q = 2.5

[coefficient]
profile = "zero"

[mode]
kind = "monotone"
source = { kind = "zero" }
"#,
    );
    let out = run_in(tmp.path(), &config);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let solution = fs::read_to_string(tmp.path().join("out/solution_monotone.txt")).unwrap();
    for line in solution.lines().skip(1) {
        let value: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
        assert_eq!(value, 0.0);
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["runs"][0]["report"]["iters"], 0);
}

#[test]
fn invalid_config_exits_two_with_field_path() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "bad.toml",
        &GROUND_STATE.replace("r = 7.0", "r = 3.0"),
    );
    let out = run_in(tmp.path(), &config);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("exponents.r"), "stderr: {}", stderr);

    let missing = tmp.path().join("never_written.toml");
    let out = dpg().arg("run").arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normalize_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "gs.toml", GROUND_STATE);
    let out = dpg().arg("run").arg(&config).arg("--normalize").output().unwrap();
    assert!(out.status.success());
    let normalized = String::from_utf8(out.stdout).unwrap();
    let parsed = ExperimentConfig::parse(&normalized).unwrap();
    let original = ExperimentConfig::parse(GROUND_STATE).unwrap();
    assert_eq!(parsed, original);
}

#[test]
fn ground_state_artifacts_and_positivity() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "gs.toml", GROUND_STATE);
    let out = run_in(tmp.path(), &config);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let solution =
        fs::read_to_string(tmp.path().join("out/solution_ground_state.txt")).unwrap();
    let mut count = 0;
    for line in solution.lines().skip(1) {
        let value: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
        assert!(value > 0.0, "ground state must be positive");
        count += 1;
    }
    assert_eq!(count, 25);
}

#[test]
fn periodic_period_one_matches_constant_energy() {
    let tmp = tempfile::tempdir().unwrap();
    let constant = GROUND_STATE.replace(
        "profile = \"coercive\"\nc = 1.0\ns = 1.0",
        "profile = \"constant\"\nc = 0.8",
    );
    let periodic = GROUND_STATE
        .replace(
            "profile = \"coercive\"\nc = 1.0\ns = 1.0",
            "profile = \"periodic\"\nperiod = 1\ntable = [0.8]",
        )
        .replace("output_dir = \"out\"", "output_dir = \"out2\"");
    let c1 = write_config(tmp.path(), "constant.toml", &constant);
    let c2 = write_config(tmp.path(), "periodic.toml", &periodic);
    assert!(run_in(tmp.path(), &c1).status.success());
    assert!(run_in(tmp.path(), &c2).status.success());

    let energy = |dir: &str| -> f64 {
        let report: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(tmp.path().join(dir).join("report.json")).unwrap(),
        )
        .unwrap();
        report["runs"][0]["report"]["energy"].as_f64().unwrap()
    };
    let (e1, e2) = (energy("out"), energy("out2"));
    assert!((e1 - e2).abs() <= 1e-8 * (1.0 + e1.abs()), "{} vs {}", e1, e2);
}

const SWEEP: &str = r#"
output_dir = "out"

[lattice]
dim = 2
radius = 2

[exponents]
p = 1.5
q = 2.5
r = 7.0

[coefficient]
profile = "coercive"
c = 1.0
s = 1.0

[mode]
kind = "sweep"
t_values = [0.0625, 0.25, 1.0, 4.0, 16.0]

[solver]
grad_tol = 1e-5
restarts = 1
seed = 9
warm_start = true
"#;

#[test]
fn sweep_writes_schema_frozen_csv_with_decreasing_lambda() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "sweep.toml", SWEEP);
    let out = run_in(tmp.path(), &config);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(tmp.path().join("out/sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let mut prev_t = 0.0;
    let mut prev_lambda = f64::INFINITY;
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        let t: f64 = fields[0].parse().unwrap();
        let lambda: f64 = fields[2].parse().unwrap();
        assert!(t > prev_t, "rows ordered by t");
        assert!(lambda < prev_lambda, "lambda strictly decreasing");
        assert_eq!(fields[6], "true");
        prev_t = t;
        prev_lambda = lambda;
        rows += 1;
    }
    assert_eq!(rows, 5);
}

#[test]
fn identical_config_gives_bit_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    fs::create_dir_all(&a).unwrap();
    fs::create_dir_all(&b).unwrap();
    let ca = write_config(&a, "sweep.toml", SWEEP);
    let cb = write_config(&b, "sweep.toml", SWEEP);
    assert!(run_in(&a, &ca).status.success());
    assert!(run_in(&b, &cb).status.success());
    let csv_a = fs::read(a.join("out/sweep.csv")).unwrap();
    let csv_b = fs::read(b.join("out/sweep.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "CSV must be bit-identical for identical configs");
}

#[test]
fn parallel_sweep_matches_row_set_and_order() {
    let tmp = tempfile::tempdir().unwrap();
    let sequential = SWEEP.replace("warm_start = true", "warm_start = false");
    let parallel = sequential.replace("seed = 9", "seed = 9\nworkers = 4");
    let ca = write_config(tmp.path(), "seq.toml", &sequential);
    let cb = write_config(
        tmp.path(),
        "par.toml",
        &parallel.replace("output_dir = \"out\"", "output_dir = \"out_par\""),
    );
    assert!(run_in(tmp.path(), &ca).status.success());
    assert!(run_in(tmp.path(), &cb).status.success());
    let a = fs::read_to_string(tmp.path().join("out/sweep.csv")).unwrap();
    let b = fs::read_to_string(tmp.path().join("out_par/sweep.csv")).unwrap();
    assert_eq!(a, b, "independent points are schedule-invariant");
}

#[test]
fn custom_coefficient_table_from_file() {
    let tmp = tempfile::tempdir().unwrap();
    // constant-by-table must agree with the built-in constant profile
    let g = dpg_core::build_lattice(&dpg_core::LatticeSpec::new(2, 2)).unwrap();
    let mut table = String::new();
    for v in 0..g.n_vertices() {
        let c = g.coords_of(v);
        table.push_str(&format!("{} {} 0.8\n", c[0], c[1]));
    }
    fs::write(tmp.path().join("a.txt"), table).unwrap();

    let custom = GROUND_STATE
        .replace(
            "profile = \"coercive\"\nc = 1.0\ns = 1.0",
            "profile = \"custom\"\nfile = \"a.txt\"",
        )
        .replace("output_dir = \"out\"", "output_dir = \"out_custom\"");
    let constant = GROUND_STATE.replace(
        "profile = \"coercive\"\nc = 1.0\ns = 1.0",
        "profile = \"constant\"\nc = 0.8",
    );
    let cc = write_config(tmp.path(), "custom.toml", &custom);
    let ck = write_config(tmp.path(), "constant.toml", &constant);
    assert!(run_in(tmp.path(), &cc).status.success());
    assert!(run_in(tmp.path(), &ck).status.success());

    let energy = |dir: &str| -> f64 {
        let report: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(tmp.path().join(dir).join("report.json")).unwrap(),
        )
        .unwrap();
        report["runs"][0]["report"]["energy"].as_f64().unwrap()
    };
    assert!((energy("out_custom") - energy("out")).abs() <= 1e-10);
}

#[test]
fn graph_dump_artifact_is_loadable() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "gs.toml",
        &GROUND_STATE.replace("output_dir = \"out\"", "output_dir = \"out\"\ndump_graph = true"),
    );
    assert!(run_in(tmp.path(), &config).status.success());
    let dump = fs::read_to_string(tmp.path().join("out/graph.dump")).unwrap();
    let g = dpg_core::Graph::from_dump(&dump).unwrap();
    assert_eq!(g.n_interior(), 25);
    assert_eq!(g.n_halo(), 20);
}

#[test]
fn delta_source_solves_and_reports_convergence() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "mono.toml",
        r#"
output_dir = "out"

[lattice]
dim = 2
radius = 3

[exponents]
p = 1.5
q = 2.5

[coefficient]
profile = "constant"
c = 1.0

[mode]
kind = "monotone"
source = { kind = "delta", site = [0, 0], scale = 1.0 }

[solver]
grad_tol = 1e-8
"#,
    );
    let out = run_in(tmp.path(), &config);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/report.json")).unwrap())
            .unwrap();
    let run = &report["runs"][0]["report"];
    assert_eq!(run["converged"], true);
    assert!(run["residual_inf"].as_f64().unwrap() <= 1e-8);
}
