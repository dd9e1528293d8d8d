//! End-to-end tests running the compiled binary: exit codes, output
//! schemas, determinism, and the documented example invocations.

use serde_json::Value;
use std::process::{Command, Output};

fn pdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdlab"))
        .args(args)
        .env_remove("PDLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn parse_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is json: {e}\n--- stdout ---\n{}\n--- stderr ---\n{}",
            stdout_str(out),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn sample_csv_output_is_deterministic_and_well_formed() {
    let args = [
        "sample", "--theta", "0.1", "--n", "50", "--trunc-eps", "1e-10", "--seed", "42",
        "--format", "csv",
    ];
    let first = pdlab(&args);
    let second = pdlab(&args);
    assert_eq!(first.status.code(), Some(0), "sample run succeeds");
    assert_eq!(
        first.stdout, second.stdout,
        "identical config must give byte-identical output"
    );

    let text = stdout_str(&first);
    assert!(
        text.starts_with("# command=sample"),
        "config echo leads the file"
    );
    assert!(text.contains("# seed=42"), "seed echoed in the header");
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(
        lines.next(),
        Some("draw_id,k,p_k"),
        "draw schema header present"
    );

    let mut draws_seen = 0u32;
    let mut residuals_seen = 0u32;
    let mut last: Option<(u64, f64)> = None;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "three columns per row, got {line:?}");
        let id: u64 = fields[0].parse().expect("draw_id is an integer");
        if fields[1] == "residual" {
            residuals_seen += 1;
            last = None;
            continue;
        }
        let p: f64 = fields[2].parse().expect("p_k is a number");
        if let Some((prev_id, prev_p)) = last {
            if prev_id == id {
                assert!(p <= prev_p, "frequencies descend within draw {id}");
            }
        }
        if last.map(|(i, _)| i) != Some(id) {
            draws_seen += 1;
        }
        last = Some((id, p));
    }
    assert_eq!(draws_seen, 50, "one block per requested draw");
    assert_eq!(residuals_seen, 50, "one residual row per draw");
}

#[test]
fn worker_count_does_not_change_results() {
    let base = [
        "verify",
        "--experiment",
        "slope-p1",
        "--x",
        "0.5",
        "--estimator",
        "mc",
        "--thetas",
        "0.3,0.1",
        "--n-samples",
        "20000",
        "--seed",
        "11",
    ];
    let mut one: Vec<&str> = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut three: Vec<&str> = base.to_vec();
    three.extend(["--threads", "3"]);
    let a = pdlab(&one);
    let b = pdlab(&three);
    assert_eq!(a.status.code(), Some(0));
    // the config echo records the differing --threads value; every result
    // field must agree exactly
    let mut left = parse_json(&a);
    let mut right = parse_json(&b);
    left["config"].as_object_mut().unwrap().remove("threads");
    right["config"].as_object_mut().unwrap().remove("threads");
    assert_eq!(left, right, "estimates must not depend on the worker count");
}

#[test]
fn density_dump_load_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().expect("tempdir");
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");

    let solve = pdlab(&[
        "density", "--theta", "0.5", "--k-max", "4", "--grid", "128", "--dump",
        first.to_str().unwrap(),
    ]);
    assert_eq!(solve.status.code(), Some(0), "solve+dump succeeds");

    let reload = pdlab(&[
        "density", "--load", first.to_str().unwrap(), "--dump",
        second.to_str().unwrap(),
    ]);
    assert_eq!(reload.status.code(), Some(0), "load+dump succeeds");

    let bytes_first = std::fs::read(&first).expect("first dump readable");
    let bytes_second = std::fs::read(&second).expect("second dump readable");
    assert_eq!(
        bytes_first, bytes_second,
        "a loaded table re-dumps to the identical file"
    );

    let queries = "0.3,0.5,0.9";
    let solved = pdlab(&[
        "density", "--theta", "0.5", "--k-max", "4", "--grid", "128", "--query", queries,
    ]);
    let loaded = pdlab(&[
        "density", "--load", first.to_str().unwrap(), "--query", queries,
    ]);
    let solved_json = parse_json(&solved);
    let loaded_json = parse_json(&loaded);
    assert_eq!(
        solved_json["queries"], loaded_json["queries"],
        "cdf queries through a loaded table match the solved table exactly"
    );
}

#[test]
fn rejects_invalid_parameter_ranges() {
    let cases: &[&[&str]] = &[
        &["sample", "--theta", "0"],
        &["sample", "--theta", "-1"],
        &["rate", "--kind", "J", "--r", "1", "--p", "0.5"],
        &["verify", "--experiment", "beta-tail", "--theta", "1e-8", "--a", "0.5", "--b", "0.5"],
        &["verify", "--experiment", "no-such-thing"],
        &["rate", "--kind", "no-such-kind", "--p", "0.5"],
        &["sample", "--theta", "0.5", "--bogus-flag"],
        &["sample", "--theta", "0.5", "--threads", "0"],
    ];
    for args in cases {
        let out = pdlab(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "usage error expected for {args:?}, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn runtime_failures_exit_one() {
    // a strong positive tilt at low sample count trips the reliability gate
    let gate = pdlab(&[
        "select", "--theta", "0.9", "--s", "80", "--alpha", "40", "--n-samples", "2000",
    ]);
    assert_eq!(gate.status.code(), Some(1), "ESS gate is a runtime error");
    assert!(
        String::from_utf8_lossy(&gate.stderr).contains("effective sample size"),
        "gate failure names the cause"
    );

    let missing = pdlab(&["density", "--load", "/nonexistent/table.csv"]);
    assert_eq!(missing.status.code(), Some(1), "missing file is a runtime error");
}

#[test]
fn beta_tail_example_reports_the_scaled_value() {
    let out = pdlab(&[
        "verify", "--experiment", "beta-tail", "--theta", "1e-8", "--a", "0", "--b", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_json(&out);
    assert_eq!(report["experiment"], "beta-tail");
    assert_eq!(report["pass"], true, "scaled value lies inside the window");
    let scaled = report["detail"]["scaled"].as_f64().expect("scaled is a number");
    assert!(
        (scaled - (-1.02)).abs() < 0.01,
        "scaled value near -1.02, got {scaled}"
    );
}

#[test]
fn selection_rate_is_zero_at_the_coexistence_tie() {
    let out = pdlab(&[
        "rate", "--kind", "Sprime", "--s", "-2", "--r", "2", "--regime", "critical",
        "--point", "0.5,0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_json(&out);
    let value = report["value"].as_f64().expect("finite value");
    assert!(value.abs() <= 1e-12, "tie point evaluates to 0, got {value}");
}

#[test]
fn tilted_supremum_reports_tied_minimizers_and_infinities_serialize_as_strings() {
    let sup = pdlab(&["rate", "--kind", "tilted-sup", "--s", "-2", "--r", "2"]);
    assert_eq!(sup.status.code(), Some(0));
    let report = parse_json(&sup);
    assert_eq!(
        report["minimizers"],
        serde_json::json!([1, 2]),
        "integer tie at s = -2"
    );

    let inf = pdlab(&["rate", "--kind", "S1", "--p", "0"]);
    assert_eq!(inf.status.code(), Some(0));
    let report = parse_json(&inf);
    assert_eq!(
        report["value"], "inf",
        "infinite rates serialize as a string, not null"
    );
}

#[test]
fn config_echo_contains_resolved_parameters() {
    let out = pdlab(&[
        "sample", "--theta", "0.25", "--n", "3", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_json(&out);
    let config = &report["config"];
    assert_eq!(config["command"], "sample");
    assert_eq!(config["seed"], 7);
    assert_eq!(config["theta"], 0.25);
    assert_eq!(config["n"], 3);
    assert_eq!(config["method"], "gem", "defaults appear resolved, not omitted");
}

#[test]
fn seed_env_var_is_honored_and_the_flag_wins() {
    let flagged = pdlab(&["sample", "--theta", "0.5", "--n", "5", "--seed", "99", "--format", "csv"]);
    let from_env = Command::new(env!("CARGO_BIN_EXE_pdlab"))
        .args(["sample", "--theta", "0.5", "--n", "5", "--format", "csv"])
        .env("PDLAB_SEED", "99")
        .output()
        .expect("binary runs");
    assert_eq!(flagged.stdout, from_env.stdout, "env default matches the flag");

    let flag_beats_env = Command::new(env!("CARGO_BIN_EXE_pdlab"))
        .args(["sample", "--theta", "0.5", "--n", "5", "--seed", "42", "--format", "csv"])
        .env("PDLAB_SEED", "7")
        .output()
        .expect("binary runs");
    let plain = pdlab(&["sample", "--theta", "0.5", "--n", "5", "--seed", "42", "--format", "csv"]);
    assert_eq!(
        flag_beats_env.stdout, plain.stdout,
        "an explicit --seed overrides the environment"
    );
}

#[test]
fn labeled_sampler_adds_a_label_column() {
    let out = pdlab(&[
        "sample", "--theta", "0.5", "--n", "4", "--method", "dp", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("schema header");
    assert_eq!(header, "draw_id,k,p_k,label");
}

#[test]
fn select_reports_class_masses() {
    let out = pdlab(&["select", "--theta", "0.2", "--s", "-2", "--n-samples", "3000"]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_json(&out);
    let masses = report["masses"].as_array().expect("masses array");
    assert!(!masses.is_empty(), "at least one coexistence class");
    let total: f64 = masses
        .iter()
        .map(|m| m["mass"].as_f64().expect("mass is a number"))
        .sum();
    let unclassified = report["unclassified_mass"].as_f64().expect("unclassified mass");
    assert!(
        (total + unclassified - 1.0).abs() < 1e-9,
        "class masses and the unclassified remainder partition the weight"
    );
    assert!(report["ess"].as_f64().expect("ess") > 0.0);
}

#[test]
fn gamma_route_orders_frequencies_and_echoes_the_cutoff() {
    let out = pdlab(&[
        "sample", "--theta", "0.5", "--n", "4", "--method", "gamma", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_json(&out);
    assert_eq!(report["config"]["method"], "gamma");
    assert!(report["config"]["atom_cutoff"].is_number());
    for draw in report["draws"].as_array().expect("draws array") {
        let freqs: Vec<f64> = draw["freqs"]
            .as_array()
            .expect("freqs array")
            .iter()
            .map(|v| v.as_f64().expect("finite frequency"))
            .collect();
        assert!(
            freqs.windows(2).all(|w| w[0] >= w[1]),
            "frequencies sorted descending"
        );
        let residual = draw["residual"].as_f64().expect("residual present");
        let total: f64 = freqs.iter().sum::<f64>() + residual;
        assert!((total - 1.0).abs() < 1e-9, "mass accounted for, got {total}");
    }
}
