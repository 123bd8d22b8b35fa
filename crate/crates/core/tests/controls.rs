//! Leaky programs the checkers reject must be caught by the oracles too,
//! otherwise the exhaustive suites would pass vacuously.

mod common;

use dcc::corpus::find;
use dcc::lattice::Lattice;
use dcc::oracles::{indistinguishable, safe, OracleConfig};
use dcc::syntax::{parse_term, parse_type, Term};

fn apply(lat: &Lattice, f: &str, arg: &str) -> Term {
    Term::app(parse_term(f, lat).unwrap(), parse_term(arg, lat).unwrap())
}

fn source(name: &str) -> &'static str {
    find(name).unwrap().source
}

#[test]
fn rejected_strong_programs_distinguish() {
    let lat = Lattice::two();
    let cfg = OracleConfig::default();
    let bool_t = parse_type("unit+unit", &lat).unwrap();
    let l = lat.index_named("L").unwrap();
    for name in ["f", "g"] {
        let a = apply(&lat, source(name), "eta[H] inj1 ()");
        let b = apply(&lat, source(name), "eta[H] inj2 ()");
        assert!(!indistinguishable(&lat, &a, &b, &bool_t, l, &cfg).unwrap(), "{name}");
        assert!(!common::brute_indistinguishable(&lat, &a, &b, &bool_t, l, 3), "{name}");
    }
}

#[test]
fn accepted_strong_programs_do_not() {
    let lat = Lattice::two();
    let cfg = OracleConfig::default();
    let t = parse_type("T[H](unit+unit)", &lat).unwrap();
    let l = lat.index_named("L").unwrap();
    for name in ["f'", "g'"] {
        let a = apply(&lat, source(name), "eta[H] inj1 ()");
        let b = apply(&lat, source(name), "eta[H] inj2 ()");
        assert!(indistinguishable(&lat, &a, &b, &t, l, &cfg).unwrap(), "{name}");
    }
}

#[test]
fn implicit_flow_is_safe_but_distinguishing() {
    let lat = Lattice::two();
    let cfg = OracleConfig::default();
    let t = parse_type("unit+unit", &lat).unwrap();
    let l = lat.index_named("L").unwrap();
    let a = apply(&lat, source("g-dccd"), "weta[H] inj1 ()");
    let b = apply(&lat, source("g-dccd"), "weta[H] inj2 ()");
    assert!(safe(&lat, &a, &t, l, &cfg).unwrap());
    assert!(!indistinguishable(&lat, &a, &b, &t, l, &cfg).unwrap());
    let leak = apply(&lat, source("f-dccd"), "weta[H] inj1 ()");
    assert!(!safe(&lat, &leak, &t, l, &cfg).unwrap());
}

#[test]
fn switch_stays_secret_in_the_diamond() {
    let lat = Lattice::diamond();
    let cfg = OracleConfig::default();
    let t = parse_type("unit+unit -> unit + T[L](unit+unit)", &lat).unwrap();
    let bottom = lat.bottom_index();
    let a = apply(&lat, source("switch"), "eta[L] inj1 ()");
    let b = apply(&lat, source("switch"), "eta[L] inj2 ()");
    assert!(indistinguishable(&lat, &a, &b, &t, bottom, &cfg).unwrap());
    assert!(!indistinguishable(&lat, &a, &b, &t, lat.index_named("L").unwrap(), &cfg).unwrap());
}
