use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn olo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_olo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parse a `label: number` line from a command summary.
fn summary_value(text: &str, label: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{label}: ")))
        .unwrap_or_else(|| panic!("no {label:?} in {text}"))
        .parse()
        .unwrap()
}

fn csv_column(text: &str, column: usize) -> Vec<f64> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(column).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn value_range_for_absolute_game() {
    let out = olo(&["value", "--kind", "abs", "--t", "2..8:2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("T,exact_value,asymptote,ratio\n"));
    let values = csv_column(&text, 1);
    for (got, want) in values.iter().zip([1.0, 1.5, 1.875, 2.1875]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn value_single_horizons() {
    let exp = csv_column(
        &stdout(&olo(&["value", "--kind", "exp", "--alpha", "0.5", "--t", "1000"])),
        1,
    );
    assert!((exp[0] - 1.648583919609612).abs() < 1e-9);
    let quad = stdout(&olo(&[
        "value", "--kind", "quad", "--sigma", "2", "--t", "10", "--format", "json",
    ]));
    let row: serde_json::Value = serde_json::from_str(quad.trim()).unwrap();
    assert_eq!(row["exact_value"], 2.5);
    assert_eq!(row["T"], 10);
}

#[test]
fn minimax_play_realizes_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = olo(&[
        "play",
        "--kind",
        "abs",
        "--t",
        "10",
        "--strategy",
        "hypercube",
        "--adversary",
        "minimax",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let regret = summary_value(&text, "regret");
    let value = summary_value(&text, "game value");
    assert!((regret - value).abs() < 1e-9);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 11);
}

#[test]
fn replayed_quadratic_game() {
    let dir = tempfile::tempdir().unwrap();
    let grads = dir.path().join("g.txt");
    fs::write(&grads, "1\n1\n").unwrap();
    let out = olo(&[
        "play",
        "--kind",
        "quad",
        "--sigma",
        "1",
        "--t",
        "2",
        "--strategy",
        "gd",
        "--adversary",
        "replay",
        "--gradients",
        grads.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "round,x,g,inst_loss,cum_loss\n1,0,1,0,0\n2,-1,1,-1,-1\n");
    let summary = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(summary_value(&summary, "regret"), 1.0);
}

#[test]
fn random_betting_game_within_value() {
    let out = olo(&[
        "play",
        "--kind",
        "exp",
        "--t",
        "5",
        "--strategy",
        "betting",
        "--adversary",
        "random",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let regret = summary_value(&String::from_utf8(out.stderr.clone()).unwrap(), "regret");
    assert!(regret <= (1.0 / 5f64.sqrt()).cosh().powi(5) + 1e-9);
    let last = stdout(&out).lines().last().unwrap().to_string();
    let summary: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(summary["summary"]["regret"].as_f64().unwrap(), regret);
}

#[test]
fn minimax_regret_never_exceeds_reported_value() {
    for (kind, adversary) in [
        ("quad", "greedy"),
        ("abs", "biased"),
        ("exp", "random"),
        ("exp-sym", "minimax"),
    ] {
        for seed in ["1", "2", "3"] {
            let out = olo(&[
                "play",
                "--kind",
                kind,
                "--t",
                "25",
                "--adversary",
                adversary,
                "--p",
                "0.8",
                "--seed",
                seed,
            ]);
            assert!(out.status.success());
            let summary = String::from_utf8(out.stderr).unwrap();
            assert!(summary_value(&summary, "regret") <= summary_value(&summary, "game value") + 1e-9);
        }
    }
}

fn run_to_file(args: &[&str], path: &Path) -> Vec<u8> {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    assert!(olo(&full).status.success());
    fs::read(path).unwrap()
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for args in [
        &["play", "--kind", "abs", "--t", "40", "--dim", "3", "--seed", "11"][..],
        &[
            "bet",
            "--t",
            "60",
            "--adversary",
            "biased",
            "--p",
            "0.7",
            "--seed",
            "11",
            "--format",
            "json",
        ][..],
    ] {
        assert_eq!(run_to_file(args, &a), run_to_file(args, &b));
    }
    let other = run_to_file(
        &["play", "--kind", "abs", "--t", "40", "--dim", "3", "--seed", "12"],
        &b,
    );
    assert_ne!(
        run_to_file(
            &["play", "--kind", "abs", "--t", "40", "--dim", "3", "--seed", "11"],
            &a
        ),
        other
    );
}

#[test]
fn verify_reports_and_exit_codes() {
    let empty = olo(&["verify", "--max-t", "0"]);
    assert!(empty.status.success());
    assert_eq!(stdout(&empty), "check,expected,got,tolerance,status\n");

    let full = olo(&["verify", "--max-t", "10"]);
    assert_eq!(full.status.code(), Some(0));
    let text = stdout(&full);
    assert_eq!(text.lines().count(), 1 + 4 * 10 * 2);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));

    let grid = olo(&["verify", "--grid", "--max-t", "4", "--kind", "exp"]);
    assert_eq!(grid.status.code(), Some(0));
    assert_eq!(stdout(&grid).lines().filter(|l| l.starts_with("grid exp ")).count(), 4);
    assert_eq!(
        stdout(&grid).lines().filter(|l| l.starts_with("grid extremes")).count(),
        4
    );

    assert_eq!(olo(&["verify", "--max-t", "40"]).status.code(), Some(1));
}

#[test]
fn betting_sessions() {
    let out = olo(&[
        "bet",
        "--t",
        "100",
        "--budget",
        "1",
        "--adversary",
        "random",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let wealth = csv_column(&stdout(&out), 3);
    assert_eq!(wealth.len(), 101);
    assert!(*wealth.last().unwrap() >= 0.0);

    let dir = tempfile::tempdir().unwrap();
    let grads = dir.path().join("plus");
    fs::write(&grads, "1\n".repeat(100)).unwrap();
    let out = olo(&[
        "bet",
        "--t",
        "100",
        "--adversary",
        "replay",
        "--gradients",
        grads.to_str().unwrap(),
    ]);
    let summary = String::from_utf8(out.stderr).unwrap();
    let floor = 10f64.exp() / (2.0 * 0.5f64.exp());
    assert!(summary_value(&summary, "final wealth") >= floor - 1e-6);
    assert_eq!(summary_value(&summary, "|G|"), 100.0);

    let first = olo(&["bet", "--t", "1", "--budget", "1", "--adversary", "random"]);
    assert_eq!(csv_column(&stdout(&first), 3), vec![1.0, 1.0]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "kind = \"quad\"\nsigma = 4.0\nt = \"2..6:2\"\n").unwrap();
    let from_file = csv_column(&stdout(&olo(&["value", "--config", cfg.to_str().unwrap()])), 1);
    assert_eq!(from_file, vec![0.25, 0.5, 0.75]);
    let overridden = csv_column(
        &stdout(&olo(&["value", "--config", cfg.to_str().unwrap(), "--sigma", "1"])),
        1,
    );
    assert_eq!(overridden, vec![1.0, 2.0, 3.0]);

    fs::write(&cfg, "kind = \"quad\"\nbogus = 1\n").unwrap();
    assert_eq!(
        olo(&["value", "--config", cfg.to_str().unwrap(), "--t", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn error_exit_codes() {
    assert_eq!(olo(&["value", "--kind", "nope", "--t", "3"]).status.code(), Some(1));
    assert_eq!(
        olo(&["value", "--kind", "exp", "--alpha", "0.9", "--t", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(olo(&["play", "--kind", "abs", "--t", "2..4"]).status.code(), Some(1));
    assert_eq!(olo(&["bet", "--t", "5", "--budget", "-1"]).status.code(), Some(1));
    assert_eq!(olo(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(olo(&["--help"]).status.code(), Some(0));
    let missing = olo(&[
        "play",
        "--kind",
        "abs",
        "--t",
        "4",
        "--adversary",
        "replay",
        "--gradients",
        "/nonexistent/g",
    ]);
    assert_eq!(missing.status.code(), Some(3));
    let unwritable = olo(&[
        "value",
        "--kind",
        "abs",
        "--t",
        "4",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad");
    fs::write(&bad, "0.5\n2\n").unwrap();
    let out = olo(&[
        "play",
        "--kind",
        "abs",
        "--t",
        "2",
        "--adversary",
        "replay",
        "--gradients",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}
