use std::process::{Command, Output};

use serde_json::Value;

fn pvd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn without_wall_time(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut()
        .unwrap()
        .remove("wall_time_ms")
        .expect("wall_time_ms present");
    v
}

#[test]
fn demo_decrypts_and_deletes() {
    let o = pvd(&["demo"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.contains("dec  -> 1"), "{t}");
    assert!(t.contains("vrfy -> ⊤"), "{t}");
    let again = pvd(&["demo"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn demo_with_state_generator_and_b_zero() {
    let o = pvd(&[
        "demo", "--scheme", "owsg", "--b", "0", "--t", "2", "--seed", "9",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.contains("dec  -> 0"), "{t}");
    assert!(t.contains("2 + 2 copies of 3-qubit states"), "{t}");
    assert!(t.contains("vrfy -> ⊤"), "{t}");
}

#[test]
fn hyb2_for_honest_deleter_has_zero_advantage() {
    let o = pvd(&[
        "experiment",
        "--game",
        "hybrid",
        "--hybrid",
        "2",
        "--adversary",
        "honest",
        "--mode",
        "exact",
        "--trials",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["advantages"]["hyb2"], 0.0);
    assert_eq!(v["abort_probability"], 0.0);
}

#[test]
fn brute_force_wins_the_other_preimage_game() {
    let o = pvd(&[
        "experiment",
        "--game",
        "other-preimage",
        "--owf",
        "toy",
        "--n",
        "8",
        "--adversary",
        "brute",
        "--trials",
        "2000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["advantages"]["success"].as_f64().unwrap() >= 0.99);
}

#[test]
fn chain_report_lists_inequalities() {
    let o = pvd(&[
        "experiment",
        "--owf",
        "toy",
        "--n",
        "6",
        "--adversary",
        "inverter-hadamard",
        "--trials",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ineqs = v["inequalities"].as_array().unwrap();
    assert_eq!(ineqs.len(), 5);
    assert!(ineqs.iter().all(|i| i["satisfied"] == true));
    assert_eq!(v["advantages"]["hyb2"], 0.0);
    assert_eq!(v["abort_probability"], 0.5);
}

#[test]
fn malformed_config_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    for (text, field) in [
        (r#"{"trials": "lots"}"#, "trials"),
        (r#"{"sead": 1}"#, "sead"),
        (r#"{"mode": "fast"}"#, "mode"),
    ] {
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, text).unwrap();
        let o = pvd(&["experiment", "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains(field), "{}", stderr(&o));
    }
}

#[test]
fn config_file_values_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"owf": "toy", "n": 5, "trials": 20, "seed": 3, "game": "evpke"}"#,
    )
    .unwrap();
    let o = pvd(&[
        "experiment",
        "--config",
        path.to_str().unwrap(),
        "--trials",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["experiment"], "evpke");
    assert_eq!(v["trials"], 30);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["config"]["scheme"]["owf"]["n"], 5);
}

#[test]
fn usage_and_infeasible_errors_exit_2() {
    assert_eq!(pvd(&["experiment", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(
        pvd(&["experiment", "--adversary", "circuit", "--mode", "exact"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pvd(&[
            "experiment",
            "--game",
            "other-preimage",
            "--adversary",
            "honest"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(pvd(&["demo", "--b", "2"]).status.code(), Some(2));
    assert_eq!(
        pvd(&["check", "--suite", "gentle", "--instances", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reports_are_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let base = [
        "experiment",
        "--owf",
        "toy",
        "--n",
        "4",
        "--adversary",
        "retainer-guess",
        "--mode",
        "empirical",
        "--trials",
        "3000",
        "--seed",
        "11",
    ];
    let mut a = base.to_vec();
    a.extend(["--threads", "1", "--out", out.to_str().unwrap()]);
    let o = pvd(&a);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let first = std::fs::read_to_string(&out).unwrap();
    let mut b = base.to_vec();
    b.extend(["--threads", "4"]);
    let second = stdout(&pvd(&b));
    assert_eq!(without_wall_time(&first), without_wall_time(&second));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("wall_time_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn check_suites_report_pass_and_fail() {
    let o = pvd(&[
        "check",
        "--suite",
        "dim",
        "--instances",
        "100",
        "--seed",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("100/100"));
    let o = pvd(&["check", "--suite", "gentle", "--instances", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // too few samples to cover the support counts as a failed property
    let o = pvd(&[
        "check",
        "--suite",
        "measurement",
        "--instances",
        "1",
        "--samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
