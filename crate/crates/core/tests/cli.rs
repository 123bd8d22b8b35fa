use std::path::PathBuf;

use dcc::cli::{run_with, SCHEMA};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("dcc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dcc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn program_and_lattice_files() {
    let prog = scratch("m.dcc", "fun x:T[low](unit+unit). eta[high] (bind y = x in case y of z. inj1 () | z. inj2 ())");
    let lat = scratch("lh.lat", "# two points\nelements low high\nleq low high\n");
    let (code, out, err) = call(&["check", "--system", "dcc", "--lattice", lat.to_str().unwrap(), prog.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), "T[low](unit + unit) -> T[high](unit + unit)");
}

#[test]
fn bad_lattice_file_is_a_config_error() {
    let lat = scratch("bad.lat", "elements a b\nleq a c\n");
    let (code, _, err) = call(&["check", "--system", "dcc", "--lattice", lat.to_str().unwrap(), "-e", "()"]);
    assert_eq!(code, 2);
    assert!(err.contains("bad lattice"), "{err}");
}

#[test]
fn trace_lists_rules() {
    let (code, out, _) = call(&["--json", "check", "--trace", "--system", "dccd", "-e", "fun x:W[H](unit). bind y = x in y"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    let rules: Vec<&str> = v["trace"].as_array().unwrap().iter().map(|s| s["rule"].as_str().unwrap()).collect();
    assert!(rules.contains(&"T^D-bind"), "{rules:?}");
}

#[test]
fn eval_modes() {
    let src = "bind y = weta[H] (inj1 ()) in weta[L] y";
    let (_, plain, _) = call(&["eval", "-e", src]);
    let (_, tainted, _) = call(&["eval", "--taint", "-e", src]);
    assert_eq!(plain.trim(), "weta[L] inj1 ()");
    assert!(tainted.contains('@'), "{tainted}");
    assert_eq!(call(&["eval", "-e", "case () of x. x | y. y"]).0, 1);
}

#[test]
fn safety_verdicts() {
    let leak = "(fun x:W[H](unit+unit). bind y = x in y) (weta[H] inj1 ())";
    assert_eq!(call(&["safe", "--level", "L", "--type", "unit+unit", leak]).0, 1);
    assert_eq!(call(&["safe", "--level", "H", "--type", "unit+unit", leak]).0, 0);
}

#[test]
fn translations_and_leaks() {
    let (code, out, _) = call(&["translate", "--dir", "dcc-to-dccd", "-e", "fun x:T[H](unit). x"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "fun x:W[H](unit). x");
    assert_eq!(call(&["translate", "--dir", "dcc-to-dccd", "-e", "weta[H] ()"]).0, 2);
    let (code, out, _) = call(&["leak", "--level", "H", "--type", "unit+unit"]);
    assert_eq!(code, 0);
    let (code, _, _) = call(&["check", "--system", "dccd", "-e", out.trim()]);
    assert_eq!(code, 0);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check"));
}
