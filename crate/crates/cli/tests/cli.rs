use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasihecke")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

#[test]
fn expand_prints_expansions() {
    // 1/240 + Σσ₃(n)qⁿ and −1/24 + Σσ₁(n)qⁿ squared
    let o = run(&["expand", "G4", "--prec", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1/240 + q + 9q^2 + 28q^3 + 73q^4");
    assert_eq!(stdout(&run(&["expand", "G2*G2", "--prec", "3"])), "1/576 - 1/12q + 3/4q^2");
    assert_eq!(stdout(&run(&["expand", "DELTA", "--prec", "3"])), "q - 24q^2");
}

#[test]
fn hecke_apply_gives_tau() {
    // τ(2)·Δ = −24q + 576q² − 6048q³
    let o = run(&["hecke", "apply", "--n", "2", "--form", "DELTA", "--prec", "4", "--classical"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-24q + 576q^2 - 6048q^3");
}

#[test]
fn hecke_star_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let t2 = dir.path().join("t2.json");
    let t6 = dir.path().join("t6.json");
    assert!(run(&["hecke", "star", "T1", "T2", "--out", t2.to_str().unwrap()]).status.success());
    assert!(run(&["hecke", "star", t2.to_str().unwrap(), "T3", "--out", t6.to_str().unwrap()]).status.success());
    let direct = run(&["hecke", "star", "T1", "T6"]);
    let via: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t6).unwrap()).unwrap();
    let want: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    assert_eq!(via, want);
}

#[test]
fn verify_is_reproducible_and_reports_status() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&["verify", "hopf-H1", "--samples", "2", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["status"], "pass");
}

#[test]
fn exit_codes() {
    let nc = run(&["verify", "hopf-H1", "--samples", "2", "--negative-control", "drop-delta-term"]);
    assert_eq!(nc.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&nc.stdout).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "lie-L", "--prec", "4"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "G4 +"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_all_wraps_reports() {
    let o = run(&["verify", "all", "--samples", "1", "--prec", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["reports"].as_array().unwrap().len(), 9);
}
