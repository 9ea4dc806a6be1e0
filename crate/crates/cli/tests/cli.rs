use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suther-lax"))
        .args(args)
        .env("SUTHER_LAX_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn verify_example_passes() {
    let out = run(&[
        "verify",
        "--n",
        "2",
        "--mu",
        "1",
        "--nu",
        "1.2",
        "--kappa",
        "0.7",
        "--samples",
        "100",
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out.stdout);
    assert_eq!(rep["schema"], "suther-lax-report/1");
    assert_eq!(rep["pass"], true);
    let checks = rep["checks"].as_array().unwrap();
    for c in checks {
        assert!(num(&c["max_residual"]) <= num(&c["tolerance"]), "{c}");
    }
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    for name in [
        "hamiltonian_lax",
        "bracket_identity",
        "involution",
        "kappa0_specialization",
    ] {
        assert!(names.contains(&name), "{name}");
    }
}

#[test]
fn verify_single_particle_without_kappa() {
    let out = run(&["verify", "--n", "1", "--kappa", "0", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_couplings_exit_with_config_error() {
    let out = run(&["verify", "--nu", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parameter constraint violated"), "{err}");
    assert_eq!(
        run(&["verify", "--nu", "0.5", "--kappa", "-0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["rmatrix"]).status.code(), Some(2));
    assert_eq!(run(&["launch"]).status.code(), Some(2));
}

#[test]
fn verify_csv_table() {
    let out = run(&["verify", "--samples", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("check,max_residual,tolerance,worst_sample,pass")
    );
    assert!(lines.all(|l| l.ends_with(",true")));
    json(&out.stderr);
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let args = ["verify", "--n", "3", "--samples", "24", "--seed", "9"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_suther-lax"))
        .args(args)
        .env("SUTHER_LAX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        run(&["verify", "--samples", "3", "--seed", "1"]).stdout,
        run(&["verify", "--samples", "3", "--seed", "1"]).stdout
    );
}

#[test]
fn simulate_rows_and_summary() {
    let out = run(&[
        "simulate", "--q", "1.5,0.6", "--p", "0.3,-0.2", "--method", "rk4", "--stride", "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "t",
            "q_1",
            "q_2",
            "p_1",
            "p_2",
            "H",
            "spec_drift",
            "lax_residual"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 41);
    let first: Vec<f64> = rows[0].iter().take(5).map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, [0.0, 1.5, 0.6, 0.3, -0.2]);
    assert_eq!(&rows[0][7], "");
    let sum = json(&out.stderr);
    assert_eq!(sum["status"], "ok");
    assert!(num(&sum["max_spec_drift"]) < 1e-8);
    assert!(num(&sum["max_energy_drift"]) < 1e-9);
}

#[test]
fn simulate_to_file_as_json() {
    let path = std::env::temp_dir().join(format!("suther-lax-sim-{}.json", std::process::id()));
    let out = run(&[
        "simulate",
        "--t-end",
        "0.2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&std::fs::read(&path).unwrap());
    assert_eq!(rep["command"], "simulate");
    assert_eq!(rep["initial_point"]["source"], "seeded");
    std::fs::remove_file(&path).ok();
}

#[test]
fn project_matches_integration() {
    let out = run(&["project", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["t", "q_proj_1", "q_proj_2", "q_ode_1", "q_ode_2", "maxdiff"]
    );
    for r in rdr.records() {
        let d: f64 = r.unwrap()[5].parse().unwrap();
        assert!(d < 1e-6);
    }
    let sum = json(&out.stderr);
    assert_eq!(sum["pass"], true);
    assert_eq!(sum["velocity_check"]["pass"], true);
    assert!(sum.get("threshold_note").is_none());
}

#[test]
fn project_near_a_wall_notes_the_threshold() {
    let out = run(&[
        "project",
        "--q",
        "1.0,0.85,0.7",
        "--p",
        "0.1,-0.1,0.2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out.stdout);
    assert_eq!(num(&rep["threshold"]), 1e-5);
    assert!(rep["threshold_note"].as_str().unwrap().contains("relaxed"));
}

#[test]
fn rmatrix_dump() {
    let out = run(&["rmatrix", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out.stdout);
    assert_eq!(rep["expansion_check"]["pass"], true);
    let basis = rep["basis"].as_array().unwrap();
    assert!(basis.iter().any(|r| r["q_dependent"] == true));
    assert!(basis.iter().any(|r| r["q_dependent"] == false));
    let std = rep["standard"].as_array().unwrap();
    assert!(std.iter().all(|r| r["row"].as_array().unwrap().len() == 2));
}

#[test]
fn config_file_with_flag_override() {
    let path = std::env::temp_dir().join(format!("suther-lax-cfg-int-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"n": 3, "samples": 4, "kappa": -0.3}"#).unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap(), "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out.stdout);
    assert_eq!(rep["n"], 1);
    assert_eq!(rep["samples"], 4);
    assert_eq!(num(&rep["couplings"]["kappa"]), -0.3);
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(
        run(&["verify", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_file(&path).ok();
}
