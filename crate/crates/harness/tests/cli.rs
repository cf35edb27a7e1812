use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrd"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_then_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = lrd(&[
        "simulate",
        "--hurst",
        "0.8",
        "-n",
        "4096",
        "--seed",
        "3",
        "--out-dir",
        d,
    ]);
    assert!(o.status.success(), "{o:?}");
    let path = stdout(&o).trim().to_owned();
    assert!(Path::new(&path).exists());
    assert!(Path::new(&format!("{path}.json")).exists());

    let o = lrd(&[
        "estimate",
        "--input",
        &path,
        "--estimator",
        "variance",
        "--window",
        "1,30",
    ]);
    assert!(o.status.success(), "{o:?}");
    let line = stdout(&o);
    assert!(
        line.starts_with("variance n=4096 n1=1 n2=30 slope="),
        "{line}"
    );
    assert!(line.trim_end().ends_with("label=LRD"), "{line}");

    let o = lrd(&[
        "estimate",
        "--input",
        &path,
        "--estimator",
        "variance",
        "--delta",
        "0.25",
        "--m",
        "4",
    ]);
    assert!(stdout(&o).contains("n1=8 n2=32"), "{o:?}");

    let o = lrd(&[
        "estimate",
        "--input",
        &path,
        "--estimator",
        "gph",
        "--bandwidth-exponent",
        "0.5",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).starts_with("gph n=4096 l=1 w=64 d="), "{o:?}");
}

#[test]
fn estimate_after_excursion_transform() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = lrd(&[
        "simulate",
        "--scenario",
        "subordinated-fgn",
        "--hurst",
        "0.7",
        "-n",
        "300",
        "--seed",
        "1",
        "--count",
        "2",
        "--out-dir",
        d,
    ]);
    assert!(o.status.success(), "{o:?}");
    let paths: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(paths.len(), 2);
    let o = lrd(&[
        "estimate",
        "--input",
        &paths[1],
        "--estimator",
        "gph",
        "--frequencies",
        "5,88",
        "--ie",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("l=5 w=88"));
}

#[test]
fn study_and_rank() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("study.json");
    fs::write(
        &cfg,
        r#"{"scenario": "fgn", "seed": 7, "replications": 4, "lengths": [80],
            "gph_grid": [[1, 40], [2, 79]], "workers": 2}"#,
    )
    .unwrap();
    let o = lrd(&[
        "study",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
        "--top",
        "3",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("variance, n = 80"));
    let csv = fs::read_to_string(out.join("fgn_n80.csv")).unwrap();
    assert!(csv.starts_with("estimator,n1,n2,tp,fp,tn,fn,skips,accuracy,sensitivity,specificity"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 7);
    assert_eq!(manifest["replications"], 4);

    let o = lrd(&[
        "rank",
        "--dir",
        out.to_str().unwrap(),
        "-k",
        "2",
        "--estimator",
        "gph",
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert!(text.contains("gph, n = 80") && !text.contains("variance"));
    assert_eq!(
        text.lines()
            .filter(|l| l.trim_start().starts_with(char::is_numeric))
            .count(),
        2
    );
}

#[test]
fn missing_required_settings_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    // no --workers
    let o = lrd(&["study", "--scenario", "fgn", "--seed", "1", "--out-dir", d]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("workers"));

    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"scenario": "fgn", "seed": 1, "workers": 1, "variance_grid": [[3, 500]], "lengths": [100]}"#)
        .unwrap();
    let o = lrd(&["study", "--config", cfg.to_str().unwrap(), "--out-dir", d]);
    assert_eq!(o.status.code(), Some(2));

    let o = lrd(&[
        "study",
        "--scenario",
        "farima",
        "--seed",
        "1",
        "--workers",
        "1",
        "--out-dir",
        d,
    ]);
    assert!(!o.status.success());
}
