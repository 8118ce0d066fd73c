//! End-to-end runs of the binary: exit codes, outputs and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const DISK: &str = r#"
[domain]
kind = "circle"
radius = 1.0

[potential]
kind = "quadratic_form"
matrix = [[1.0, 0.0], [0.0, 1.0]]

[expansion]
order = 2
grid_size = 32

[run]
eps = [0.5, 0.35]
probes = [[0.0, 0.0], [0.6, 0.0]]
max_grid = 8

[validate]
bvp_intervals = 512
eigen_intervals = 512
"#;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_exitwell")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn exitwell(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(exe())
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("EXITWELL_OUT")
        .output()
        .unwrap()
}

#[test]
fn report_succeeds_and_writes_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "disk.toml", DISK);
    let out = tmp.path().join("out");
    let o = exitwell(&["report"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.json", "layers.csv", "scalars.csv", "exit_law.csv"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["subcommand"], "report");
    assert!(report["comparisons"].as_array().is_some_and(|c| !c.is_empty()));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("eps"), "{stdout}");
}

#[test]
fn every_subcommand_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "disk.toml", DISK);
    for sub in ["inspect", "expand", "evaluate", "validate"] {
        let out = tmp.path().join(sub);
        let o = exitwell(&[sub], &cfg, &out);
        assert_eq!(o.status.code(), Some(0), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join(format!("{sub}.json")).is_file());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let text = DISK.replace("[validate]", "[validate]\nmonte_carlo = true") + "\n[monte_carlo]\nn_paths = 64\ndt = 1e-3\nmin_eps = 0.45\n";
    let cfg = write_config(tmp.path(), "mc.toml", &text);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(exitwell(&["report", "--seed", "9"], &cfg, &a).status.code(), Some(0));
    assert_eq!(exitwell(&["report", "--seed", "9", "--threads", "2"], &cfg, &b).status.code(), Some(0));
    for f in ["report.json", "scalars.csv", "exit_law.csv", "layers.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn config_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "bad.toml", &DISK.replace("[0.5, 0.35]", "[0.35, 0.5]"));
    let o = exitwell(&["evaluate"], &bad, &tmp.path().join("o"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("decreasing"));
    let missing = tmp.path().join("nope.toml");
    assert_eq!(exitwell(&["inspect"], &missing, &tmp.path().join("o")).status.code(), Some(1));
}

#[test]
fn violated_assumption_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    // V = |x|²/2 − 0.4x³ decreases outward near (1, 0).
    let text = DISK.replace(
        "kind = \"quadratic_form\"\nmatrix = [[1.0, 0.0], [0.0, 1.0]]",
        "kind = \"polynomial\"\nk = 2\nmonomials = [[2, 0, 0.5], [0, 2, 0.5], [3, 0, -0.4]]",
    );
    let cfg = write_config(tmp.path(), "tilt.toml", &text);
    let o = exitwell(&["report"], &cfg, &tmp.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("required assumption"));
}

#[test]
fn numerical_failure_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    // e^{−1/(2ε²)} underflows for the radial finite-volume weights.
    let text = DISK
        .replace("eps = [0.5, 0.35]", "eps = [0.025]")
        .replace("bvp_intervals = 512", "bvp_intervals = 8192")
        .replace("eigen_intervals = 512", "eigen_intervals = 8192");
    let cfg = write_config(tmp.path(), "tiny.toml", &text);
    let o = exitwell(&["validate"], &cfg, &tmp.path().join("o"));
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
}
