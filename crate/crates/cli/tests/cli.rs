use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qglauber")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV table, split into fields.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn zeros_example() {
    let o = run(&["zeros", "--q", "0.5", "--alpha-eq-q", "--beta", "0.9"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    let z: f64 = r[0][1].parse().unwrap();
    assert!((z - 0.3922323).abs() < 1e-7);
    // closed-form zero at these parameters
    assert!((z - (0.1f64 / 0.65).sqrt()).abs() < 1e-14);
}

#[test]
fn magnetization_kernel_starts_as_a_delta() {
    let o = run(&["magnetization", "--kappa", "0.5", "--kernel", "1", "3", "--t", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("t,n,k,value"));
    let v: f64 = rows(&o)[0][3].parse().unwrap();
    assert!(v.abs() <= 1e-8);
}

#[test]
fn kernels_from_one_initial_site() {
    let o = run(&["magnetization", "--kappa", "0.5", "--from", "3", "--sites", "1:5", "--t-grid", "0:4:3"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 15);
    for row in &r[..5] {
        let (n, v): (usize, f64) = (row[1].parse().unwrap(), row[3].parse().unwrap());
        assert!((v - if n == 3 { 1.0 } else { 0.0 }).abs() < 1e-8);
    }
    // later rows are row-major over the grid
    assert_eq!(r[5][0].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn seventeen_significant_digits() {
    let o = run(&["qpoch", "--q", "0.5", "--a", "0.5", "--n", "3"]);
    let r = rows(&o);
    assert_eq!(r[0][0], "3.2812500000000000e-1");
    assert_eq!(r[0][0].parse::<f64>().unwrap(), 0.5 * 0.75 * 0.875);
}

#[test]
fn wrong_layer_flags_are_rejected() {
    for args in [
        &["magnetization", "--kappa", "0.5", "--q", "0.3", "--kernel", "1", "3", "--t", "0"][..],
        &["zeros", "--kappa", "0.5", "--q", "0.5", "--alpha-eq-q", "--beta", "0.9"][..],
        &["zeros", "--q", "0.5", "--alpha", "0.5", "--alpha-eq-q", "--beta", "0.9"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn validation_failures_exit_one() {
    for args in [
        &["stationary", "--kappa", "0.5", "--tol", "0.1"][..],
        &["stationary", "--kappa", "-1"][..],
        &["magnetization", "--kappa", "0.5", "--kernel", "1", "3", "--t-grid", "0:1"][..],
        &["oracle", "master", "--kappa", "0.5", "--sites", "1:13", "--t", "1"][..],
        &["oracle", "expm", "--kappa", "0.5", "--t", "1", "--observable", "correlation"][..],
        &["oracle", "sample", "--kappa", "0.5", "--sites", "1:3", "--spins", "1,0,1", "--t", "1"][..],
        &["zeros", "--q", "1.5", "--alpha-eq-q", "--beta", "0.9"][..],
        &["verify", "--only", "14"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_two() {
    let o = run(&["stationary", "--kappa", "0.7", "--sites", "1:40", "--tol", "1e-14"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("truncation"));
}

#[test]
fn identical_config_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = run(&[
            "oracle",
            "sample",
            "--kappa",
            "0.5",
            "--sites",
            "1:4",
            "--t-grid",
            "0:2:3",
            "--trajectories",
            "3000",
            "--seed",
            "7",
            "--observable",
            "correlation",
            "--format",
            "json",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["meta"]["seed"], 7);
    assert_eq!(v["data"].as_array().unwrap().len(), 3 * 6);
}

#[test]
fn oracles_agree_through_the_cli() {
    let base = ["--kappa", "0.5", "--sites", "1:5", "--spins", "1,-1,1,1,-1", "--t", "1.5"];
    let values = |mode: &str| -> Vec<f64> {
        let mut args = vec!["oracle", mode];
        args.extend(base);
        rows(&run(&args)).iter().map(|r| r[2].parse().unwrap()).collect()
    };
    let (e, m) = (values("expm"), values("master"));
    for (a, b) in e.iter().zip(&m) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn correlation_starts_uncorrelated() {
    let o = run(&["correlation", "--kappa", "0.7", "--t", "0", "--sites", "1:3", "--window", "24", "--tol", "1e-6"]);
    assert!(o.status.success());
    for r in rows(&o) {
        assert!(r[3].parse::<f64>().unwrap().abs() < 1e-10);
    }
}

#[test]
fn verify_reports_and_sets_the_exit_code() {
    let o = run(&["verify", "--quick", "--only", "1,2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("criterion  1 PASS") && s.contains("criterion  2 PASS"));
    // the documented failures keep the exit code non-zero unless explicitly allowed
    assert_eq!(run(&["verify", "--quick", "--only", "11"]).status.code(), Some(3));
    assert!(run(&["verify", "--quick", "--only", "11", "--allow-known"]).status.success());
}
