use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lsxgc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsxgc"))
        .args(args)
        .env_remove("LSXGC_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = lsxgc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_exits_zero() {
    let out = lsxgc(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["connectivity", "simulate", "mvpa", "report"] {
        assert!(text.contains(sub));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lsxgc(&["mvpa", "--bogus"]).status.code(), Some(2));
    assert_eq!(lsxgc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        lsxgc(&["mvpa", "--manifest", "m.json", "--out", "r.json", "--test-frac", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lsxgc(&["mvpa", "--manifest", "m.json", "--out", "r.json", "--features", "5:1:1"]).status.code(),
        Some(2)
    );
}

#[test]
fn runtime_error_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = lsxgc(&["mvpa", "--manifest", p(&dir.path().join("missing.json")), "--out", p(&out_path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_path.exists());
}

#[test]
fn connectivity_writes_matrix_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.csv");
    let rows: Vec<String> = (0..4)
        .map(|i| {
            (0..60)
                .map(|t| format!("{}", ((t * (i + 3)) % 11) as f64 + 0.1 * i as f64))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    fs::write(&input, rows.join("\n")).unwrap();

    let output = dir.path().join("conn.csv");
    ok(&["connectivity", "--method", "lsxgc", "--p", "2", "--m", "2", "--input", p(&input), "--output", p(&output)]);
    let csv = fs::read_to_string(&output).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().all(|l| l.split(',').count() == 4));
    let sidecar: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("conn.json")).unwrap()).unwrap();
    assert_eq!(sidecar["schema_version"], "1");
    assert_eq!(sidecar["method"], "lsxgc");
    assert_eq!(sidecar["config"]["p"], 2);
    assert!(sidecar["timing_ms"].is_number());

    let corr = dir.path().join("corr.csv");
    ok(&["connectivity", "--method", "correlation", "--input", p(&input), "--output", p(&corr)]);
    let first = fs::read_to_string(&corr).unwrap();
    assert!(first.lines().next().unwrap().starts_with("1,"));

    // p too large for N = 4
    let out = lsxgc(&["connectivity", "--p", "8", "--input", p(&input), "--output", p(&dir.path().join("bad.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("bad.csv").exists());
}

#[test]
fn full_pipeline_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let cohort = dir.path().join("cohort");
    ok(&[
        "simulate", "--n", "8", "--t", "150", "--q", "2", "--density", "0.2", "--subjects-per-class", "12",
        "--coupling-delta", "1.0", "--seed", "3", "--out-dir", p(&cohort),
    ]);
    assert!(cohort.join("adjacency.csv").exists());
    let manifest = cohort.join("manifest.json");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subjects"].as_array().unwrap().len(), 24);

    let mut reports = Vec::new();
    for method in ["lsxgc", "correlation"] {
        let out = dir.path().join(format!("{method}.json"));
        ok(&[
            "mvpa", "--manifest", p(&manifest), "--method", method, "--p", "4", "--m", "2", "--splits", "10",
            "--test-frac", "0.2", "--features", "5:30:5", "--seed", "11", "--out", p(&out),
        ]);
        reports.push(out);
    }
    let fig = dir.path().join("fig.svg");
    let csv = dir.path().join("fig.csv");
    ok(&["report", "--in", p(&reports[0]), p(&reports[1]), "--out", p(&fig), "--csv", p(&csv)]);
    let svg = fs::read_to_string(&fig).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polygon"));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 1 + 2 * 6);
    assert!(table.lines().nth(1).unwrap().starts_with("lsxgc,lsxgc,5,"));
}

#[test]
fn outputs_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cohort = dir.path().join("cohort");
    ok(&[
        "simulate", "--n", "6", "--t", "120", "--subjects-per-class", "8", "--seed", "5", "--binary", "--out-dir", p(&cohort),
    ]);
    let manifest = cohort.join("manifest.json");
    let mut outputs = Vec::new();
    for threads in ["1", "4", "0"] {
        let out = dir.path().join(format!("r{threads}.json"));
        ok(&[
            "--threads", threads, "mvpa", "--manifest", p(&manifest), "--p", "3", "--m", "2", "--splits", "8",
            "--test-frac", "0.25", "--features", "2,5,30", "--out", p(&out),
        ]);
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}
