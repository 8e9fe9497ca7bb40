use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_incidents");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tail_value(out: &Output) -> f64 {
    let text = stdout(out);
    let line = text.lines().next().unwrap();
    line.rsplit("= ").next().unwrap().trim().parse().unwrap()
}

#[test]
fn tail_accepts_fraction_literals() {
    let out = run(&[
        "tail", "--mu", "26/1734", "--t", "203", "--rho", "1", "--n", "7",
    ]);
    assert!(out.status.success());
    let p = tail_value(&out);
    assert!((p - 0.13690).abs() < 5e-6);
    let digits = stdout(&out)
        .lines()
        .next()
        .unwrap()
        .rsplit("= ")
        .next()
        .unwrap()
        .trim_start_matches("0.")
        .len();
    assert!(digits >= 10, "{}", stdout(&out));
}

#[test]
fn tail_at_zero_is_one() {
    let out = run(&["tail", "--mu", "26/1734", "--t", "203", "--n", "0"]);
    assert_eq!(tail_value(&out), 1.0);
}

#[test]
fn tail_general_shape_matches_pmf_sum() {
    let out = run(&[
        "tail", "--mu", "0.01", "--t", "100", "--rho", "2", "--n", "3",
    ]);
    // Negative binomial with r = 2, p = r / (r + t mu) = 2/3.
    let (r, p) = (2.0f64, 2.0f64 / 3.0);
    let pmf = |k: i32| {
        let coeff = (0..k)
            .map(|i| (r + i as f64) / (i + 1) as f64)
            .product::<f64>();
        coeff * p.powf(r) * (1.0 - p).powi(k)
    };
    let want = 1.0 - (0..3).map(pmf).sum::<f64>();
    assert!((tail_value(&out) - want).abs() < 1e-12);
}

#[test]
fn tail_check_prints_cross_checks() {
    let out = run(&[
        "tail",
        "--scenario",
        "GGJ7",
        "--check",
        "--reps",
        "20000",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rec = &v[0];
    assert_eq!(rec["n"], 7);
    let p = rec["probability"].as_f64().unwrap();
    assert!((rec["quadrature"].as_f64().unwrap() - p).abs() < 1e-10);
    assert!(rec["monte_carlo_std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn invalid_parameters_are_usage_errors() {
    for args in [
        &["tail", "--mu", "-1", "--t", "203", "--n", "7"][..],
        &["tail", "--mu", "1/0", "--t", "203", "--n", "7"],
        &["tail", "--mu", "26/1734", "--t", "203"],
        &["figure1", "--k-max", "0"],
        &["reproduce", "--format", "xml"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sensitivity_reproduces_relocation_table() {
    let out = run(&[
        "sensitivity",
        "jkz-original",
        "--max-moved",
        "8",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("moved_out,table,p_value,inverse_p,inverse_p_rounded")
    );
    let printed = [
        9043864.0, 1137586.0, 257538.0, 79497.0, 29989.0, 13051.0, 6329.0, 3341.0, 1889.0,
    ];
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for (row, want) in rows.iter().zip(printed) {
        let inv: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(((inv - want) / want).abs() < 1e-3, "{row}");
    }
}

#[test]
fn sensitivity_zero_moves_is_one_row() {
    let out = run(&[
        "sensitivity",
        "jkz-original",
        "--max-moved",
        "0",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn sensitivity_unknown_table_lists_builtins() {
    let out = run(&["sensitivity", "no-such-table", "--max-moved", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("jkz-original") && err.contains("rkz41-corrected"),
        "{err}"
    );
}

/// Hypergeometric upper tail by exact integer enumeration.
fn enumerated_tail(a: u64, b: u64, c: u64, d: u64) -> f64 {
    fn choose(n: u64, k: u64) -> f64 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as f64
    }
    let (incidents, suspect, total) = (a + c, a + b, a + b + c + d);
    let denom = choose(total, suspect);
    (a..=incidents.min(suspect))
        .map(|x| choose(incidents, x) * choose(total - incidents, suspect - x))
        .sum::<f64>()
        / denom
}

#[test]
fn sensitivity_custom_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.toml");
    fs::write(
        &path,
        "format_version = 1\nname = \"small\"\nsuspect_shifts = 6\nsuspect_incidents = 3\ntotal_shifts = 20\ntotal_incidents = 5\n",
    )
    .unwrap();
    let out = run(&[
        "sensitivity",
        path.to_str().unwrap(),
        "--max-moved",
        "2",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Pooled table 3/3/2/12; each move shifts one shift from d to c.
    for (k, row) in rows.as_array().unwrap().iter().enumerate() {
        let k = k as u64;
        let want = enumerated_tail(3, 3, 2 + k, 12 - k);
        let got = row["p_value"].as_f64().unwrap();
        assert!((got - want).abs() < 1e-14, "k={k}: {got} vs {want}");
    }
}

#[test]
fn figure_csv_has_header_and_full_precision() {
    let out = run(&["figure1", "--k-max", "14", "--format", "csv"]);
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,probability"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 14);
    let (k, p) = rows[0].split_once(',').unwrap();
    assert_eq!(k, "1");
    assert!((p.parse::<f64>().unwrap() - 0.75270964061608).abs() < 1e-10);
    assert!(p.len() >= 14, "{p}");
}

#[test]
fn figure_single_point() {
    let out = run(&["figure1", "--k-max", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert!((v[0]["probability"].as_f64().unwrap() - 0.75270964061608).abs() < 1e-10);
}

#[test]
fn reproduce_csv_and_quiet() {
    let out = run(&["reproduce", "--format", "csv", "--reps", "20000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let refs = text.lines().filter(|l| l.starts_with("reference,")).count();
    assert_eq!(refs, 26);

    let out = run(&["reproduce", "--quiet", "--reps", "20000"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "30/30 checks passed");
}

#[test]
fn reproduce_reads_fixture_directory() {
    let dir = tempfile::tempdir().unwrap();
    use incidence::case_data::fixtures::{GGJ13_TOML, GGJ7_TOML, WARDS_TOML};
    fs::write(dir.path().join("wards.toml"), WARDS_TOML).unwrap();
    fs::write(dir.path().join("ggj7.toml"), GGJ7_TOML).unwrap();
    fs::write(dir.path().join("ggj13.toml"), GGJ13_TOML).unwrap();
    let out = Command::new(BIN)
        .args(["reproduce", "--quiet", "--reps", "20000", "--fixtures"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));

    fs::remove_file(dir.path().join("ggj13.toml")).unwrap();
    let out = Command::new(BIN)
        .args(["reproduce", "--fixtures"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_subcommands() {
    let out = run(&[
        "simulate",
        "rate-ratio",
        "--k",
        "5",
        "--reps",
        "200000",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["analytic"].as_f64().unwrap(), 1.0 / 3.0);
    assert!(v[0]["z_score"].as_f64().unwrap() <= 4.0);

    let out = run(&[
        "simulate", "mixture", "--mu", "26/1734", "--t", "203", "--n", "0", "--reps", "1000",
        "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["estimate"].as_f64().unwrap(), 1.0);
    assert_eq!(v[0]["std_error"].as_f64().unwrap(), 0.0);

    let out = run(&[
        "simulate",
        "allocation",
        "jkz-corrected",
        "--reps",
        "100000",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v[0]["z_score"].as_f64().unwrap() <= 4.0);
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate", "mixture", "--mu", "26/1734", "--t", "203", "--n", "7", "--reps", "50000",
        "--seed", "3",
    ];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn scenario_validate_flags_without_fixing() {
    let out = run(&["scenario", "validate"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text
        .contains("[FLAG] GGJ7 suspect incidents vs corrected ward tables: expected 7, found 9"));
    assert!(
        text.contains("[ok  ] GGJ7 suspect incidents vs ledger GGJ7 flags: expected 7, found 7")
    );
}

#[test]
fn scenario_show_round_trips_through_validate() {
    let out = run(&["scenario", "show", "GGJ7", "--wards"]);
    assert!(out.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ggj7.toml");
    fs::write(&path, &out.stdout).unwrap();
    let out = run(&["scenario", "validate", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("expected 7, found 9"));
}

#[test]
fn scenario_validate_reports_parse_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(
        &path,
        "format_version = 1\nname = \"x\"\nsuspect_shifts = \"many\"\n",
    )
    .unwrap();
    let out = run(&["scenario", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
