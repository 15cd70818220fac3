use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use stwave_cli::config::{ProblemId, RunConfig};

fn stwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stwave")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const WALKING: &str = "problem = \"walking_burgers\"\n[levels]\nj_max = 3\n";

#[test]
fn walking_solve_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{WALKING}[output]\npattern = true\n"));
    let out = dir.path().join("out");
    let res = stwave(&["solve", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "1"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for name in ["field.csv", "report.json", "sparsity.csv", "timings.json"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["outcome"]["status"], "converged");
    let hist = report["levels"][0]["residual_history"].as_array().unwrap();
    let first = hist[0].as_f64().unwrap();
    let last = hist.last().unwrap().as_f64().unwrap();
    assert!(last < 1e-6 * first);
    let field = fs::read_to_string(out.join("field.csv")).unwrap();
    assert!(field.starts_with("x,t,f\n"));
    assert_eq!(field.lines().count(), 49 * 33 + 1);
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), WALKING);
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let res = stwave(&["solve", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "11", "--threads", "1"]);
        assert!(res.status.success());
        outputs.push((fs::read(out.join("field.csv")).unwrap(), fs::read(out.join("report.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn invalid_order_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"walking_burgers\"\n[levels]\npx = 5\n");
    let res = stwave(&["solve", "--config", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("levels.px"));
}

#[test]
fn sod_schedule_length_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"sod\"\n[levels]\nj_start = 2\nj_max = 4\n[schedule]\ndelta = [0.05, 0.01]\n");
    let res = stwave(&["solve", "--config", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("schedule.delta"));
}

#[test]
fn iteration_cap_reports_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{WALKING}[newton]\nmax_iterations = 1\n"));
    let out = dir.path().join("out");
    let res = stwave(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
    // the partial report is still written
    assert!(out.join("report.json").exists());
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), WALKING);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let res = stwave(&["pattern", "--config", &cfg, "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(4));
    let missing = stwave(&["solve", "--config", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(4));
}

#[test]
fn single_level_study_has_empty_rates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"walking_burgers\"\n[levels]\nstudy = [3]\n");
    let out = dir.path().join("out");
    let res = stwave(&["study", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = fs::read_to_string(out.join("study.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "3");
    assert!(row[6..].iter().all(|c| c.is_empty()));
}

#[test]
fn uniform_riemann_has_zero_difference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "problem = \"sod\"\n[levels]\nj_start = 2\nj_max = 2\n[physics.right]\nrho = 1.0\np = 1.0\n",
    );
    let out = dir.path().join("out");
    let res = stwave(&["riemann", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("riemann.json")).unwrap()).unwrap();
    for d in rep["masked_difference"].as_array().unwrap() {
        assert!(d.as_f64().unwrap() < 1e-12);
    }
    assert!(out.join("riemann.csv").exists());
}

#[test]
fn riemann_rejects_burgers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), WALKING);
    assert_eq!(stwave(&["riemann", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn level_override_moves_the_plan() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"sod\"\n[levels]\nj_start = 2\nj_max = 4\n");
    let out = dir.path().join("out");
    let res = stwave(&["pattern", "--config", &cfg, "--out", out.to_str().unwrap(), "--level-override", "3"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("pattern.json")).unwrap()).unwrap();
    assert_eq!(summary["level"], 3);
    assert_eq!(summary["block_nnz"].as_array().unwrap().iter().filter(|v| v.as_u64() != Some(0)).count(), 8);
    let too_low = stwave(&["pattern", "--config", &cfg, "--level-override", "2"]);
    assert_eq!(too_low.status.code(), Some(2));
}

#[test]
fn config_round_trip() {
    let text = r#"
problem = "sod"
seed = 42

[domain]
x_lo = 0.0
x_hi = 1.0
t_end = 0.2

[levels]
j_start = 2
j_max = 4
px = 6
pt = 6
guess = "prolongated"
error_tolerance = 0.05
study = [2, 3]

[physics]
delta = 0.01
mu = 1.9e-5

[physics.left]
rho = 1.0
v = 0.0
p = 1.0

[schedule]
delta = [0.05, 0.03, 0.01]
chi = [1.0, 1.0, 1.0]

[newton]
rel_tol = 1e-6
max_iterations = 40

[output]
dir = "results"
pattern = true
"#;
    let a = RunConfig::parse(text).unwrap();
    let b = RunConfig::parse(&a.to_toml()).unwrap();
    assert_eq!(a, b);
    assert!(a.resolve().is_ok());
    let minimal = RunConfig::new(ProblemId::MmsBurgers);
    assert_eq!(RunConfig::parse(&minimal.to_toml()).unwrap(), minimal);
}
