use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use cogrowth::graph::complete_bipartite;
use cogrowth::io;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn predict_regular_example() {
    let out = run(&["predict", "--alpha", "2", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["beta"].as_f64().unwrap(), 3.0);
    assert_eq!(v["branch"], "supercritical");
}

#[test]
fn predict_inverse_round_trips() {
    let forward = stdout_json(&run(&["predict", "--alpha", "3.5", "--k", "3", "--l", "4"]));
    let beta = forward["beta"].as_f64().unwrap().to_string();
    let back = run(&["predict", "--inverse", "--beta", &beta, "--k", "3", "--l", "4"]);
    assert_eq!(code(&back), 0);
    assert!((stdout_json(&back)["alpha"].as_f64().unwrap() - 3.5).abs() < 1e-10);
}

#[test]
fn ball_counts_example() {
    let out = run(&[
        "counts",
        "--ball",
        "3,3,6",
        "--function",
        "geometric:1.0",
        "--kind",
        "b",
        "--rmax",
        "6",
    ]);
    assert_eq!(code(&out), 0);
    let series = io::series_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let values: Vec<String> = series
        .entries
        .iter()
        .map(|e| io::rational_to_string(e.exact.as_ref().unwrap()))
        .collect();
    assert_eq!(values, ["1", "3", "9", "27", "81", "243", "729"]);
}

#[test]
fn biresolvent_example_passes() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("K34.json");
    assert_eq!(code(&run(&["gen", "bipartite:3,4", "--output", path_str(&graph)])), 0);
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--identity",
        "biresolvent",
        "--graph",
        path_str(&graph),
        "--z1",
        "6",
        "--z2",
        "5",
        "--terms",
        "80",
        "--output",
        path_str(&report),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass"));
    let reports: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(reports[0]["abs_gap"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn scalar_identities_pass() {
    for args in [
        vec![
            "verify",
            "--identity",
            "regular-scalar",
            "--d",
            "3",
            "--rho",
            "3",
            "--function",
            "radial:0,0,1/6",
            "--rmax",
            "200",
        ],
        vec![
            "verify",
            "--identity",
            "parity",
            "--d",
            "3",
            "--rho",
            "3",
            "--rmax",
            "200",
        ],
        vec![
            "verify",
            "--identity",
            "biregular-scalar",
            "--k",
            "3",
            "--l",
            "4",
            "--rho",
            "2.5",
        ],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn verification_failures_exit_one() {
    // z inside the spectrum of K_4
    let out = run(&["verify", "--identity", "resolvent", "--graph", "complete:4", "--z", "2"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
    // past the ball's horizon without --allow-truncated
    assert_eq!(code(&run(&["counts", "--ball", "3,3,3", "--rmax", "5"])), 1);
    // too few terms for the requested tolerance
    let out = run(&[
        "verify",
        "--identity",
        "biregular-scalar",
        "--k",
        "3",
        "--l",
        "4",
        "--rho",
        "2",
        "--rmax",
        "20",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn argument_errors_exit_two() {
    assert_eq!(code(&run(&["predict", "--d", "3"])), 2);
    assert_eq!(code(&run(&["counts", "--rmax", "3"])), 2);
    assert_eq!(code(&run(&["gen", "hypercube:3"])), 2);
    assert_eq!(code(&run(&["estimate", "--series", "/nonexistent/series.json"])), 2);
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vertex_count": 2, "edges": [[0, 0]]}"#).unwrap();
    assert_eq!(code(&run(&["counts", "--graph", path_str(&bad), "--rmax", "2"])), 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let (x, y) = (dir.path().join("x.json"), dir.path().join("y.json"));
    for p in [&x, &y] {
        let out = run(&[
            "counts",
            "--radial",
            "3,4",
            "--function",
            "geometric:1.3",
            "--kind",
            "a",
            "--rmax",
            "300",
            "--output",
            path_str(p),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&x).unwrap(), fs::read(&y).unwrap());
}

#[test]
fn emitted_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.json");
    run(&["gen", "bipartite:3,4", "--output", path_str(&graph)]);
    let parsed = io::graph_from_json(&fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(parsed, complete_bipartite(3, 4).unwrap());

    let json = dir.path().join("b.json");
    let csv = dir.path().join("b.csv");
    for (p, format) in [(&json, "json"), (&csv, "csv")] {
        let out = run(&[
            "counts",
            "--graph",
            path_str(&graph),
            "--function",
            "ones",
            "--rmax",
            "12",
            "--format",
            format,
            "--output",
            path_str(p),
        ]);
        assert_eq!(code(&out), 0);
    }
    let from_json = io::series_from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(io::series_to_json(&from_json), fs::read_to_string(&json).unwrap());
    let from_csv = io::series_from_csv(&fs::read_to_string(&csv).unwrap(), from_json.kind, 0).unwrap();
    assert_eq!(from_csv.entries, from_json.entries);
}

#[test]
fn estimate_reads_counts_output() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let out = run(&[
        "counts",
        "--radial",
        "3,3",
        "--function",
        "geometric:1.2",
        "--kind",
        "a",
        "--rmax",
        "200",
        "--format",
        "csv",
        "--output",
        path_str(&a),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["estimate", "--series", path_str(&a), "--kind", "a", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["alpha"].as_f64().unwrap() - 2.4).abs() < 1e-9);
    assert!((v["beta"].as_f64().unwrap() - (2.4 + 2.0 / 2.4)).abs() < 1e-9);
    assert_eq!(v["method"], "ratio2");
}

#[test]
fn plot_data_lists_log_values() {
    let dir = TempDir::new().unwrap();
    let plot = dir.path().join("plot.csv");
    let out = run(&[
        "counts",
        "--radial",
        "3,3",
        "--rmax",
        "4",
        "--plot-data",
        path_str(&plot),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&plot).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,log_value");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[2], "1,-inf");
    assert!(lines[3].starts_with("2,1.0986"));
}

#[test]
fn lift_reports_equal_counts() {
    let out = run(&[
        "lift",
        "--graph",
        "complete:4",
        "--base",
        "1",
        "--radius",
        "6",
        "--function",
        "ones",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["all_equal"], true);
    assert_eq!(v["counts"].as_array().unwrap().len(), 7);
    assert_eq!(v["counts"][6]["b_base"], "729");
    assert_eq!(v["cover_vertices"], 1 + 3 * 63);
}
