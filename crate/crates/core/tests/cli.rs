use std::process::{Command, Output};

fn zetalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetalab")).args(args).env_remove("ZETALAB_THREADS").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn basel_value() {
    let out = zetalab(&["zeta", "--re", "2", "--im", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["re"].as_str().unwrap().starts_with("1.6449340668"));
    assert!(v["err_bound"].as_str().is_some());
}

#[test]
fn lemma1_at_ten_has_no_violations() {
    let out = zetalab(&["check", "lemma1", "--J", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"], 0);
}

#[test]
fn pole_is_an_evaluation_error() {
    let out = zetalab(&["zeta", "--re", "1", "--im", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "pole");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(zetalab(&["zeta", "--colour", "red"]).status.code(), Some(2));
    assert_eq!(zetalab(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn doubling_precision_keeps_reported_digits() {
    for args in [["zeta", "--re", "0.5", "--im", "21"], ["zeta", "--re", "-2.5", "--im", "3"]] {
        let low = json(&zetalab(&[&args[..], &["--precision", "128"]].concat()));
        let high = json(&zetalab(&[&args[..], &["--precision", "256"]].concat()));
        let err: f64 = low["err_bound"].as_str().unwrap().parse().unwrap();
        for key in ["re", "im"] {
            let a: f64 = low[key].as_str().unwrap().parse().unwrap();
            let b: f64 = high[key].as_str().unwrap().parse().unwrap();
            assert!((a - b).abs() <= err + 1e-16 * b.abs(), "{key}: {a} vs {b}");
        }
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "output_format = text\nprecision_bits = 64\n").unwrap();
    let cfg = config.to_str().unwrap();
    let text = zetalab(&["zeta", "--re", "3", "--config", cfg]);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("re: "));
    let as_json = zetalab(&["zeta", "--re", "3", "--config", cfg, "--format", "json"]);
    assert!(json(&as_json)["re"].as_str().unwrap().starts_with("1.2020569"));
}

#[test]
fn thread_env_sits_below_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_zetalab"))
        .args(["zeta", "--re", "2"])
        .env("ZETALAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_zetalab"))
        .args(["zeta", "--re", "2", "--threads", "2"])
        .env("ZETALAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "a --threads flag wins over the variable");
}

#[test]
fn sieve_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mu.csv");
    let out = zetalab(&["sieve", "--limit", "30", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,mu,d");
    assert_eq!(lines[30], "30,-1,8");
    assert_eq!(lines.len(), 31);
}

#[test]
fn winding_and_roots() {
    let w = json(&zetalab(&["winding", "--fn", "invzeta", "--center", "1", "--radius", "0.3"]));
    assert_eq!(w["count"], 1);
    let r = json(&zetalab(&["root", "zeta", "--lo", "14", "--hi", "14.2"]));
    assert!(r["value"].as_str().unwrap().starts_with("14.1347251417"));
    let sv = json(&zetalab(&["root", "sv", "--v", "1000", "--radius", "0.2"]));
    assert_eq!(sv["status"], "found");
}
