use std::path::Path;
use std::process::{Command, Output};

fn varlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varlap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV with one comment line and one header line.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn hypotheses_summary_line() {
    let o = varlap(&["hypotheses", "--exponent", "const:2", "--dim", "3", "--alpha", "0", "--claim", "cor35"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "pass 1.5 < 2 <= 2 < 4");

    let o = varlap(&["hypotheses", "--exponent", "const:1.2", "--claim", "cor35", "--json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("fail "));
    assert!(out.contains("failed: lower < p-"));
    assert!(out.contains("\"b_class\": \"sufficient-condition check only\""));
}

#[test]
fn hypotheses_report_file_has_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = varlap(&["hypotheses", "--exponent", "const:2", "--claim", "thm34", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let gamma = report["thm34_witness"]["gamma"].as_f64().unwrap();
    assert!(gamma > 1.0);
    assert!(report["lemma_witness"]["theta"].as_f64().unwrap() > 0.0);
}

#[test]
fn decay_fit_slope() {
    let o = varlap(&["decay-fit", "--dim", "3", "--alpha", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = v["slope"].as_f64().unwrap();
    assert!((-1.6..=-1.4).contains(&slope), "{slope}");
}

#[test]
fn norm_growth_identity_row() {
    let o = varlap(&["norm-growth", "--exponent", "const:2", "--size", "16", "--u-points", "5", "--u-max", "16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = rows(&stdout(&o));
    assert_eq!(table[0], vec!["0.0", "1.0"]);
    assert_eq!(table.len(), 5);
}

#[test]
fn csv_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = varlap(&[
            "spherical-max",
            "--function",
            "random:3",
            "--seed",
            "9",
            "--size",
            "16",
            "--t-points",
            "6",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with(&format!("# varlap {}", env!("CARGO_PKG_VERSION"))));
    assert!(comment.contains("seed=9") && comment.contains("command=spherical-max"));
    assert_eq!(lines.next().unwrap(), "index,x0,x1,f,maximal,argmax_t");
    assert_eq!(lines.count(), 256);
}

#[test]
fn every_csv_has_comment_and_header() {
    for args in [
        vec!["mellin-table", "--u-points", "3", "--u-max", "2", "--steps", "2000"],
        vec!["reconstruct", "--u-points", "2", "--u-max", "100"],
        vec!["norm-growth", "--size", "8", "--u-points", "3"],
        vec!["wave-demo", "--size", "8", "--t-points", "2"],
    ] {
        let o = varlap(&args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let out = stdout(&o);
        let mut lines = out.lines();
        assert!(lines.next().unwrap().starts_with("# varlap "), "{args:?}");
        assert!(lines.next().unwrap().split(',').all(|h| !h.is_empty() && h.parse::<f64>().is_err()));
    }
}

#[test]
fn precondition_failures_exit_with_two() {
    let o = varlap(&["decay-fit", "--u-min", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: precondition: "), "{err}");

    let o = varlap(&["mellin-table", "--dim", "3", "--alpha", "-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: domain: "));

    let o = varlap(&["norm-growth", "--size", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: grid: "));

    let o = varlap(&["norm-growth", "--exponent", "cubic:3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strict_escalates_accuracy_warnings() {
    let args = ["mellin-table", "--s-max", "2", "--steps", "2000", "--u-points", "3", "--u-max", "2"];
    let lenient = varlap(&args);
    assert!(lenient.status.success());
    assert!(stderr(&lenient).contains("warning:"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    let o = varlap(&strict);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).lines().last().unwrap().starts_with("error: accuracy: "));
}

#[test]
fn gen_writes_readable_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let p = dir.path().join("p.json");
    let fs = f.to_str().unwrap();
    let ps = p.to_str().unwrap();
    assert!(varlap(&["gen", "--function", "random:2", "--size", "8", "--seed", "4", "--out", fs]).status.success());
    assert!(varlap(&["gen", "--exponent", "step:1.5,inf", "--size", "8", "--out", ps]).status.success());
    let grid = varlap::grid::read_grid(&f).unwrap();
    let want = varlap::grid::random_band_limited(grid.geometry(), 4, 2).unwrap();
    assert_eq!(grid, want);
    assert!(varlap::varlp::read_exponent(&p).unwrap().has_infinite_region());

    let o = varlap(&["norm-growth", "--size", "8", "--function", fs, "--exponent", "sin:2,0.3", "--u-points", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!Path::new(&dir.path().join("missing.json")).exists());
}

#[test]
fn wave_demo_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("w.json");
    let o = varlap(&["wave-demo", "--size", "16", "--t-points", "4", "--report", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(v["fd"]["l2_error"].as_f64().unwrap() < 1e-3);
    assert!(v["a_priori_ratio"].as_f64().unwrap() > 0.0);
    assert!(v["energy_relative_drift"].as_f64().unwrap() < 1e-8);
    assert_eq!(rows(&stdout(&o)).len(), 4);
}
