//! End-to-end runs of the compiled binary: exit codes, output layout, and
//! the byte-level determinism contract for CSV results.

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avgdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const SCAN_CONFIG: &str = "\
# small and fast: two truncations of one lacunary scan
[lacunary]
kernel = cesaro
sequence = geometric:2
k_list = 3, 6
grid = 512
log_samples = 64
";

#[test]
fn scan_is_deterministic_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.ini");
    fs::write(&cfg, SCAN_CONFIG).unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let r = run(&[
            "scan",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "9",
        ]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a = fs::read(out_a.join("scan.csv")).unwrap();
    let b = fs::read(out_b.join("scan.csv")).unwrap();
    assert_eq!(a, b, "same config and seed must give identical bytes");

    let manifest = fs::read_to_string(out_a.join("scan.manifest.json")).unwrap();
    assert!(manifest.contains("\"command\": \"scan\""));
    assert!(manifest.contains("\"seed\": 9"));
    assert!(manifest.contains("scan.csv"));
}

#[test]
fn bad_configs_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.ini");
    fs::write(&cfg, "[bad]\nkernel = frobnicator\nsequence = identity\nk_max = 3\n").unwrap();
    let out = dir.path().join("out");
    let r = run(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 2);
    assert!(!out.exists(), "failed runs must not leave partial outputs");

    // the config flag itself is mandatory for scan
    let r = run(&["scan", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&r), 2);
}

#[test]
fn verify_single_criterion_passes() {
    let r = run(&["verify", "--only", "14"]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));
    let text = stdout(&r);
    assert!(text.contains("box-difference-ladder"), "{text}");
    assert!(text.contains("1 of 1 criteria passed"), "{text}");
}

#[test]
fn verify_unmatched_filter_exits_2() {
    let r = run(&["verify", "--only", "no-such-criterion"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn plot_renders_scan_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.ini");
    fs::write(&cfg, SCAN_CONFIG).unwrap();
    let out = dir.path().join("out");
    let r = run(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);

    let table = out.join("scan.csv");
    let r = run(&[
        "plot",
        table.to_str().unwrap(),
        "sup-vs-K",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let svg = fs::read_to_string(out.join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg"), "self-contained SVG expected");
    assert!(svg.contains("cesaro / geometric2"), "series legend expected");
}

#[test]
fn plot_of_empty_table_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("empty.csv");
    fs::write(&table, "kernel,sequence,K,p,frequency,value,refined\n").unwrap();
    let r = run(&[
        "plot",
        table.to_str().unwrap(),
        "au-ratio",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 2);

    let r = run(&["plot", table.to_str().unwrap(), "nonsense"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn rotation_emits_three_series_per_job() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("rot.ini");
    fs::write(&cfg, "[tiny]\nl_half = 40\nk_max = 5\n").unwrap();
    let out = dir.path().join("out");
    let r = run(&[
        "rotation",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let csv = fs::read_to_string(out.join("rotation.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 5, "header plus A, U, A/U rows");
    assert!(csv.contains("tiny:A/U"));

    // sum of sup norms dominates the stacked sup row by row
    let manifest = fs::read_to_string(out.join("rotation.manifest.json")).unwrap();
    assert!(manifest.contains("downgraded=0"));
}

#[test]
fn oracle_routes_agree() {
    let r = run(&["oracle", "--seed", "5"]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));
    let text = stdout(&r);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("ok")), "{text}");
}

#[test]
fn sup_prints_certified_lower_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.ini");
    fs::write(&cfg, SCAN_CONFIG).unwrap();
    let r = run(&["sup", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&r), 0);
    let text = stdout(&r);
    assert!(text.contains("[lacunary]"), "{text}");
    assert!(text.contains("K=6"), "deepest truncation only: {text}");
    assert!(!text.contains("K=3"), "{text}");
}
