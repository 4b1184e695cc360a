//! End-to-end tests that drive the compiled binary: golden output formats,
//! exit-code contract, and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ibm-exit"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed ({:?}):\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

const POLY_TAIL: &str = r#"
[tail]
kind = "polynomial"
c = 2.0

[t_grid]
start = 1e2
stop = 1e4
points = 4
"#;

const UNIT_INTERVAL: &str = r#"
process = "bm"
seed = 42

[domain]
bounds = [[0.0, 1.0]]
z = [0.5]

[t_grid]
start = 0.1
stop = 1.0
points = 3

[montecarlo]
samples = 4000
"#;

// ---------------------------------------------------------------------------
// golden output formats
// ---------------------------------------------------------------------------

#[test]
fn quadrature_csv_matches_golden_header() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "tail.toml", POLY_TAIL);
    let csv = dir.path().join("out.csv");
    let out = run(&["quadrature", "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    stdout(&out);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,log_value,error,scaled,prediction,ratio"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row.split(',').count(), 6, "bad row: {row}");
    }
    // log-survival of the c = 2 transferred tail decays like −log t
    let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((first[0] - 100.0).abs() < 1e-12);
    assert!(first[1] < 0.0 && first[5] > 0.0);
}

#[test]
fn converge_csv_appends_slope_column_that_fits_the_law() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "tail.toml", POLY_TAIL);
    let csv = dir.path().join("out.csv");
    let out = run(&["converge", "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--t-stop", "1e6", "--t-points", "5"]);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    stdout(&out);
    assert!(err.contains("fitted log-log slope"), "missing summary: {err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,log_value,error,scaled,prediction,ratio,slope"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0][6].is_empty(), "first slope cell must be empty");
    // polynomial tail with c = 2 transfers to log P ~ −log t: slope → −1
    let last_slope: f64 = rows[4][6].parse().unwrap();
    assert!((last_slope + 1.0).abs() < 0.1, "slope {last_slope} not near -1");
}

#[test]
fn montecarlo_csv_matches_golden_header() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "mc.toml", UNIT_INTERVAL);
    let csv = dir.path().join("mc.csv");
    let out = run(&["montecarlo", "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    stdout(&out);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,p_hat,std_err,n,seed"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row[3], "4000");
        assert_eq!(row[4], "42");
        let p: f64 = row[1].parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn verify_json_report_has_stable_schema() {
    let out = run(&["verify", "--item", "8", "--json", "-"]);
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).expect("verify --json - must print JSON");
    assert_eq!(v["suite"], "acceptance");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["fault_scale_sharp_constant"], 1.0);
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 1);
    let item = &items[0];
    assert_eq!(item["id"], 8);
    assert_eq!(item["name"], "algebraic-identities");
    assert_eq!(item["passed"], true);
    assert!(item["details"].as_array().is_some());
    assert!(item["runtime_s"].as_f64().is_some());
}

#[test]
fn verify_reports_fault_injection_as_failure_with_exit_1() {
    let out = bin()
        .args(["verify", "--item", "3", "--fault-scale-sharp-constant", "1.1", "--json", "-"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["fault_scale_sharp_constant"], 1.1);
}

#[test]
fn predict_prints_interval_constants() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "dom.toml",
        r#"
[domain]
bounds = [[0.0, 1.0]]
z = [0.5]
"#,
    );
    let out = run(&["predict", "--config", cfg.to_str().unwrap()]);
    let text = stdout(&out);
    // iterated-process sharp law on the unit interval from the center:
    // rate (3/2)(π²λ²)^{1/3} ≈ 9.3263 and prefactor constant ≈ 29.48
    assert!(text.contains("-9.326"), "missing sharp rate:\n{text}");
    assert!(text.contains("29.48"), "missing sharp constant:\n{text}");
    assert!(text.contains("sharp"), "missing status column:\n{text}");
}

#[test]
fn predict_prints_twisted_linear_growth_laws() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "tw.toml",
        r#"
[twisted]
gamma = 1.0
p = 1.0
"#,
    );
    let out = run(&["predict", "--config", cfg.to_str().unwrap()]);
    let text = stdout(&out);
    // C(1) = 1: BM decays like t^{-1}, the time-changed processes like t^{-1/2}
    assert!(text.contains("-1.000000"), "missing BM rate:\n{text}");
    assert!(text.contains("-0.500000"), "missing time-changed rate:\n{text}");
    assert!(text.contains("upper-bound-only"), "missing one-sided flag:\n{text}");
    assert!(text.contains("log t"), "missing log-t scale:\n{text}");
}

#[test]
fn predict_json_mirrors_the_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "dom.toml",
        r#"
[domain]
bounds = [[0.0, 1.0]]
z = [0.5]
"#,
    );
    let json = dir.path().join("pred.json");
    let out = run(&["predict", "--config", cfg.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    stdout(&out);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let preds = v["predictions"].as_array().unwrap();
    assert_eq!(preds.len(), 4, "bounded domain yields BM, two iterated laws, and BTBM");
    let sharp = preds
        .iter()
        .find(|p| p["prefactor_constant"].is_number() && p["t_power"] == 1.0 / 3.0)
        .expect("sharp iterated law present");
    let rate = sharp["rate"].as_f64().unwrap();
    assert!((rate + 9.3263).abs() < 1e-3, "sharp rate {rate}");
    assert!(v["inputs"]["domain"].is_object());
}

// ---------------------------------------------------------------------------
// exit-code contract
// ---------------------------------------------------------------------------

fn expect_config_error(args: &[&str], needle: &str) {
    let out = run_raw(args);
    assert_eq!(
        out.status.code(),
        Some(2),
        "expected exit 2 for {args:?}; stderr:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(needle), "stderr missing {needle:?}:\n{err}");
}

fn run_raw(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn invalid_configurations_exit_2_with_a_reason() {
    let dir = TempDir::new().unwrap();

    let twisted = write(&dir, "tw.toml", "[twisted]\ngamma = 1.0\np = 1.5\n");
    expect_config_error(&["predict", "--config", twisted.to_str().unwrap()], "(0, 1]");

    let empty_grid = write(
        &dir,
        "grid.toml",
        "[tail]\nkind = \"polynomial\"\nc = 2.0\n\n[t_grid]\nstart = 1.0\nstop = 2.0\npoints = 0\n",
    );
    expect_config_error(
        &["quadrature", "--config", empty_grid.to_str().unwrap()],
        "at least 1",
    );

    let unknown = write(&dir, "unk.toml", "[tail]\nkind = \"polynomial\"\nc = 2.0\nslope = 1\n");
    expect_config_error(&["predict", "--config", unknown.to_str().unwrap()], "unknown field");

    let both = write(
        &dir,
        "both.toml",
        "[domain]\nbounds = [[0.0, 1.0]]\nz = [0.5]\n\n[tail]\nkind = \"polynomial\"\nc = 2.0\n\n[t_grid]\nstart = 1e2\nstop = 1e4\npoints = 2\n",
    );
    expect_config_error(
        &["quadrature", "--config", both.to_str().unwrap()],
        "mutually exclusive",
    );

    expect_config_error(&["predict", "--config", "/nonexistent/x.toml"], "cannot read");

    expect_config_error(&["verify", "--item", "12"], "1..=9");
}

#[test]
fn tail_sampling_is_rejected_as_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "tail.toml", POLY_TAIL);
    expect_config_error(&["montecarlo", "--config", cfg.to_str().unwrap()], "no sampler");
}

#[test]
fn missing_sections_exit_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "empty.toml", "seed = 1\n");
    expect_config_error(&["quadrature", "--config", cfg.to_str().unwrap()], "required");
    expect_config_error(&["predict", "--config", cfg.to_str().unwrap()], "at least one");
}

// ---------------------------------------------------------------------------
// determinism
// ---------------------------------------------------------------------------

fn mc_bytes(cfg: &Path, csv: &Path, extra: &[&str]) -> Vec<u8> {
    let mut args = vec!["montecarlo", "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    stdout(&out);
    std::fs::read(csv).unwrap()
}

#[test]
fn identical_configuration_produces_identical_files() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "mc.toml", UNIT_INTERVAL);
    let csv = dir.path().join("mc.csv");
    let a = mc_bytes(&cfg, &csv, &[]);
    let b = mc_bytes(&cfg, &csv, &[]);
    assert_eq!(a, b, "same seed and grid must reproduce the table byte for byte");
    let one = mc_bytes(&cfg, &csv, &["--workers", "1"]);
    let four = mc_bytes(&cfg, &csv, &["--workers", "4"]);
    assert_eq!(one, four, "estimates must not depend on the worker count");
    assert_eq!(a, one);
}

#[test]
fn seed_override_changes_the_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "mc.toml", UNIT_INTERVAL);
    let csv = dir.path().join("mc.csv");
    let a = mc_bytes(&cfg, &csv, &[]);
    let b = mc_bytes(&cfg, &csv, &["--seed", "43"]);
    assert_ne!(a, b, "a different seed must move the estimates");
}

// ---------------------------------------------------------------------------
// svg + method=both plumbing
// ---------------------------------------------------------------------------

#[test]
fn converge_both_writes_svg_and_sibling_mc_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "both.toml",
        r#"
process = "ibm"
seed = 7

[domain]
bounds = [[0.0, 1.0]]
z = [0.5]

[t_grid]
start = 2.0
stop = 8.0
points = 3

[montecarlo]
samples = 2000
"#,
    );
    let csv = dir.path().join("study.csv");
    let svg = dir.path().join("study.svg");
    let out = run(&[
        "converge",
        "--config",
        cfg.to_str().unwrap(),
        "--method",
        "both",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    stdout(&out);
    let quad = std::fs::read_to_string(&csv).unwrap();
    assert!(quad.starts_with("t,log_value,error,scaled,prediction,ratio,slope"));
    let mc = std::fs::read_to_string(dir.path().join("study.mc.csv")).unwrap();
    assert!(mc.starts_with("t,p_hat,std_err,n,seed"));
    assert_eq!(mc.lines().count(), 4);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("polyline"));
    assert!(svg_text.ends_with("</svg>\n"));
}

#[test]
fn method_both_without_csv_path_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "mc.toml", UNIT_INTERVAL);
    expect_config_error(
        &["converge", "--config", cfg.to_str().unwrap(), "--method", "both"],
        "output.csv",
    );
}

// ---------------------------------------------------------------------------
// shipped sample configurations stay valid
// ---------------------------------------------------------------------------

fn shipped_configs() -> Vec<std::path::PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .expect("configs/ directory ships with the workspace")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn shipped_configs_parse_and_predict() {
    for cfg in shipped_configs() {
        let out = run(&["predict", "--config", cfg.to_str().unwrap()]);
        let text = stdout(&out);
        assert!(text.contains("rate"), "no prediction table for {}:\n{text}", cfg.display());
    }
}

#[test]
fn shipped_polynomial_study_runs_end_to_end() {
    let dir = TempDir::new().unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/polynomial-tail.toml");
    let out = bin()
        .args(["converge", "--config", cfg.to_str().unwrap()])
        .current_dir(dir.path())
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.is_empty(), "CSV goes to the configured file, not stdout");
    let csv = std::fs::read_to_string(dir.path().join("polynomial-tail.csv")).unwrap();
    assert_eq!(csv.lines().count(), 14);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fitted log-log slope"), "{err}");
}
