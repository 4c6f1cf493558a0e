use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cahiers"));
    cmd.args(args).env_remove("CAHIERS_SEED");
    if let Some(s) = seed_env {
        cmd.env("CAHIERS_SEED", s);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const WAVE: &str = "0.5*(u_t^2 - u_x^2)";
const GRID: &str = "t:0:2*pi:16:periodic,x:0:2*pi:16:periodic";

#[test]
fn el_derive_text() {
    let o = run(&["el", "derive", "--coords", "t,x", "--fields", "u", "--lagrangian", WAVE], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "EL_u = -u_tt + u_xx");
}

#[test]
fn el_check_exit_codes() {
    let on = run(&["el", "check", "--lagrangian", WAVE, "--section", "u=sin(x-t)", "--grid", GRID], None);
    assert_eq!(on.status.code(), Some(0), "{}", stdout(&on));
    let off = run(&["el", "check", "--lagrangian", WAVE, "--section", "u=x^2", "--grid", GRID], None);
    assert_eq!(off.status.code(), Some(1));
    assert!(stdout(&off).contains("off-shell"));
}

#[test]
fn errors_exit_two() {
    for args in [
        &["el", "derive", "--lagrangian", "u_x^"][..],
        &["frobnicate"],
        &["weil", "eval", "--algebra", "D(1)", "--map", "x=e1", "--expr", "x"],
        &["perturb", "expand", "--fn", "cos(x)", "--at", "x=y", "--order", "2"],
    ] {
        let o = run(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["--json", "el", "derive", "--lagrangian", "u_x^"], None);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["command"], "el derive");
    assert!(err["error"].as_str().unwrap().contains("syntax"));
}

#[test]
fn weil_and_perturb_text() {
    let o = run(&["weil", "eval", "--algebra", "D(1,2)", "--map", "x=1+e1", "--expr", "x^3"], None);
    assert_eq!(stdout(&o).trim(), "1 + 3*e1 + 3*e1^2");
    let o = run(&["perturb", "expand", "--fn", "cos(x)", "--at", "x=0", "--order", "4"], None);
    assert_eq!(stdout(&o).trim(), "1 - 1/2*h^2 + 1/24*h^4");
}

#[test]
fn jet_and_jacobi_text() {
    let o = run(&["jet", "prolong", "--order", "2", "--section", "u=sin(x)"], None);
    assert_eq!(stdout(&o), "u = sin(x)\nu_x = cos(x)\nu_xx = -sin(x)\n");
    let o = run(&["jacobi", "derive", "--lagrangian", "u_x^2"], None);
    assert!(stdout(&o).starts_with("J_u[Z] = -2*Z_xx"));
}

#[test]
fn json_output_is_reproducible() {
    let args = ["--json", "bicomplex", "verify", "--coords", "x", "--fields", "u", "--order", "2", "--trials", "5"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["command"], "bicomplex verify");
    assert_eq!(v["config"]["seed"], 0x00C0_FFEE);
    assert_eq!(v["config"]["threads"], 1);
    assert_eq!(v["result"]["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn seed_precedence() {
    let base = ["bicomplex", "verify", "--coords", "x", "--fields", "u", "--order", "2", "--trials", "2"];
    let with = |extra: &[&str], env: Option<&str>| {
        let mut args = vec!["--json"];
        args.extend_from_slice(extra);
        args.extend_from_slice(&base);
        json(&run(&args, env))["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(with(&[], Some("42")), 42);
    assert_eq!(with(&["--seed", "7"], Some("42")), 7);
    assert_eq!(with(&["--seed", "7"], None), 7);
    let bad = run(&base, Some("not-a-number"));
    assert_eq!(bad.status.code(), Some(2));
}
