use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptlattice"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

/// Split an artifact into its `# ptlattice <version> | <json>` header and the
/// payload below it.
fn split_artifact(text: &str) -> (String, String) {
    let mut lines = text.splitn(2, '\n');
    let header = lines.next().expect("header line").to_string();
    let payload = lines.next().unwrap_or("").to_string();
    assert!(
        header.starts_with("# ptlattice 0.1.0 | {"),
        "bad header: {header}"
    );
    (header, payload)
}

fn header_config(header: &str) -> String {
    header
        .split(" | ")
        .nth(1)
        .expect("config in header")
        .to_string()
}

fn payload_json(out: &Output) -> serde_json::Value {
    let (_, payload) = split_artifact(&stdout_of(out));
    serde_json::from_str(payload.trim()).expect("payload parses as JSON")
}

#[test]
fn spectrum_reports_dimer_eigenvalues() {
    let out = run(&["spectrum", "--model", "dimer", "--gamma", "0.6"]);
    assert!(out.status.success());
    let v = payload_json(&out);
    let eigenvalues = v["eigenvalues"].as_array().unwrap();
    assert_eq!(eigenvalues.len(), 2);
    assert!((eigenvalues[0]["re"].as_f64().unwrap() + 0.8).abs() < 1e-12);
    assert!((eigenvalues[1]["re"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert!(v["condition"].as_f64().unwrap() > 1.0);
}

#[test]
fn usage_errors_exit_with_2() {
    let out = run(&["spectrum", "--model", "penrose"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("model"));

    let out = run(&["spectrum", "--model", "dimer", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains('n'));

    let out = run(&["spectrum", "--model", "chain"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "site count is required for chains"
    );

    let out = run(&["spectrum", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2), "clap rejects unknown flags");
}

#[test]
fn runtime_errors_exit_with_3() {
    let out = run(&[
        "evolve",
        "--model",
        "chain",
        "--n",
        "6",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn evolve_csv_schema() {
    let out = run(&[
        "evolve", "--model", "chain", "--n", "6", "--tmax", "1", "--dt", "0.1", "--seed", "3",
    ]);
    assert!(out.status.success());
    let (_, payload) = split_artifact(&stdout_of(&out));
    let mut lines = payload.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,log_norm,re_pt,im_pt,theta_2,theta_3,theta_4,theta_5,theta_6"
    );

    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    let cell_re = regex_lite();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 9, "row {i}");
        let t: f64 = parse_cell(cells[0]);
        assert!((t - 0.1 * i as f64).abs() < 1e-12);
        for cell in cells {
            assert!(cell_re(cell), "cell {cell:?} not in fixed exponent format");
        }
    }
}

/// Matches the uniform cell format: 12 significant digits, exponent notation,
/// e.g. -2.22044604925e-16. Empty cells (masked phases) are allowed.
fn regex_lite() -> impl Fn(&str) -> bool {
    |s: &str| {
        if s.is_empty() {
            return true;
        }
        let rest = s.strip_prefix('-').unwrap_or(s);
        let mut parts = rest.split('e');
        let (mantissa, exponent) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
        if parts.next().is_some() || exponent.is_empty() {
            return false;
        }
        let mut m = mantissa.split('.');
        let (head, tail) = (m.next().unwrap_or(""), m.next().unwrap_or(""));
        head.len() == 1
            && head.chars().all(|c| c.is_ascii_digit())
            && tail.len() == 11
            && tail.chars().all(|c| c.is_ascii_digit())
            && exponent
                .strip_prefix('-')
                .unwrap_or(exponent)
                .chars()
                .all(|c| c.is_ascii_digit())
    }
}

fn parse_cell(s: &str) -> f64 {
    s.parse().expect("numeric cell")
}

#[test]
fn config_file_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("direct.json");
    let args = [
        "lock",
        "--model",
        "chain",
        "--n",
        "6",
        "--gamma",
        "3",
        "--gain-site",
        "2",
        "--tmax",
        "12",
        "--seed",
        "7",
    ];
    let out = bin().args(args).arg("--out").arg(&first).output().unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));

    let text = std::fs::read_to_string(&first).unwrap();
    let (header, _) = split_artifact(&text);
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, header_config(&header)).unwrap();

    let second = dir.path().join("replayed.json");
    let out = bin()
        .args(["lock", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&second)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));

    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "replayed artifact differs from the original");
}

#[test]
fn explicit_flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("c.json");
    std::fs::write(
        &config_path,
        r#"{"model": "chain", "n": 6, "gamma": 3.0, "gain_site": 2, "tmax": 12.0, "seed": 3}"#,
    )
    .unwrap();

    let overridden = bin()
        .args(["lock", "--config"])
        .arg(&config_path)
        .args(["--seed", "7"])
        .output()
        .unwrap();
    let direct = run(&[
        "lock",
        "--model",
        "chain",
        "--n",
        "6",
        "--gamma",
        "3",
        "--gain-site",
        "2",
        "--tmax",
        "12",
        "--seed",
        "7",
    ]);
    assert!(overridden.status.success());
    assert_eq!(stdout_of(&overridden), stdout_of(&direct));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("c.json");
    std::fs::write(&config_path, r#"{"model": "dimer", "bogus": 1}"#).unwrap();
    let out = bin()
        .args(["spectrum", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("bogus"));
}

#[test]
fn threshold_reports_honest_ring_value() {
    let out = run(&[
        "threshold",
        "--model",
        "ring",
        "--n",
        "5",
        "--jprime",
        "0.5",
    ]);
    assert!(out.status.success());
    let v = payload_json(&out);
    let gp = v["gamma_pt"].as_f64().unwrap();
    // For an odd ring the threshold deviates from |J - J'| = 0.5; the scan
    // reports the bisected value.
    assert!((gp - 0.5384069088116363).abs() < 1e-3, "gamma_pt {gp}");
    assert_eq!(v["curve"].as_array().unwrap().len(), 200);
    assert!(v["bracket_width"].as_f64().unwrap() < 1e-5);
}

#[test]
fn lock_reports_snapped_pattern() {
    let out = run(&[
        "lock",
        "--model",
        "chain",
        "--n",
        "6",
        "--gamma",
        "3",
        "--gain-site",
        "2",
        "--tmax",
        "12",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let v = payload_json(&out);
    assert_eq!(v["all_saturated"], serde_json::json!(true));
    let snapped: Vec<f64> = v["bonds"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["snapped"].as_f64().unwrap())
        .collect();
    assert_eq!(snapped, vec![1.5, 0.5, 0.5, 0.5, 0.5]);
    assert!(v["convergence_time"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let args = [
        "sweep",
        "--model",
        "chain",
        "--n",
        "6",
        "--gain-site",
        "2",
        "--tmax",
        "12",
        "--seeds",
        "1,2",
        "--gammas",
        "0.5,3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout_of(&a), stdout_of(&b));

    let single_thread = bin()
        .args(args)
        .env("PT_LATTICE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout_of(&a), stdout_of(&single_thread));

    let v = payload_json(&a);
    let elements = v.as_array().unwrap();
    assert_eq!(elements.len(), 4);
    let order: Vec<(f64, u64)> = elements
        .iter()
        .map(|e| (e["gamma"].as_f64().unwrap(), e["seed"].as_u64().unwrap()))
        .collect();
    assert_eq!(order, vec![(0.5, 1), (0.5, 2), (3.0, 1), (3.0, 2)]);
    assert_eq!(elements[0]["all_saturated"], serde_json::json!(false));
    assert_eq!(elements[2]["all_saturated"], serde_json::json!(true));
}

#[test]
fn intertwiners_reports_basis_and_writes_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let basis_path = dir.path().join("basis.json");
    let out = bin()
        .args([
            "intertwiners",
            "--model",
            "chain",
            "--n",
            "6",
            "--gamma",
            "0.5",
            "--gain-site",
            "2",
        ])
        .arg("--basis-out")
        .arg(&basis_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));

    let v = payload_json(&out);
    assert_eq!(v["dimension"], serde_json::json!(6));
    assert!(v["parity_projection_residual"].as_f64().unwrap() < 1e-8);
    for r in v["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-10);
    }

    let text = std::fs::read_to_string(&basis_path).unwrap();
    let (_, payload) = split_artifact(&text);
    let basis: serde_json::Value = serde_json::from_str(payload.trim()).unwrap();
    let matrices = basis["basis"].as_array().unwrap();
    assert_eq!(matrices.len(), 6);
    assert_eq!(matrices[0]["re"].as_array().unwrap().len(), 6);
    assert_eq!(matrices[0]["im"].as_array().unwrap().len(), 6);
}

#[test]
fn warnings_go_to_stderr_not_stdout() {
    let out = run(&[
        "spectrum",
        "--model",
        "aah",
        "--n",
        "7",
        "--gain-site",
        "2",
        "--profile",
        "1,0.8,0.4",
    ]);
    assert!(out.status.success());
    let err = stderr_of(&out);
    assert_eq!(err.matches("warning:").count(), 2, "stderr: {err}");
    let (_, payload) = split_artifact(&stdout_of(&out));
    assert!(!payload.contains("warning"));
}

#[test]
fn dash_out_means_stdout() {
    let piped = run(&[
        "spectrum", "--model", "dimer", "--gamma", "0.6", "--out", "-",
    ]);
    let plain = run(&["spectrum", "--model", "dimer", "--gamma", "0.6"]);
    assert_eq!(stdout_of(&piped), stdout_of(&plain));
}

#[test]
fn defaults_resolve_as_documented() {
    use pt_lattice_cli::args::JobArgs;
    let args = JobArgs {
        model: Some("chain".into()),
        n: Some(6),
        ..Default::default()
    };
    let r = args.resolve().unwrap();
    assert_eq!(r.j, 1.0);
    assert_eq!(r.gamma, 0.0);
    assert_eq!(r.gain_site, 1);
    assert_eq!(r.seed, 7);
    assert_eq!(r.tmax, 40.0);
    assert_eq!(r.dt, 0.05);
    assert_eq!(r.gamma_max, 3.0);
    assert_eq!(r.tol, 1e-6);
    assert_eq!(r.window_fraction, 0.2);
    assert_eq!(r.lock_tol, 0.02);
    assert_eq!(r.seeds, vec![7]);
    assert_eq!(r.gammas, vec![0.0]);

    // Dimer and trimer imply their site count.
    let args = JobArgs {
        model: Some("trimer".into()),
        ..Default::default()
    };
    assert_eq!(args.resolve().unwrap().n, 3);
}
