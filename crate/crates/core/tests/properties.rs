//! Randomized invariants over lattices, types, terms and the oracles.

mod common;

use std::sync::OnceLock;

use dcc::enumerate::{enum_typed_terms, enum_typed_terms_with, enum_types_by_size, Grammar, TermBounds};
use dcc::eval::eval;
use dcc::lattice::{Index, Lattice};
use dcc::oracles::{enum_values, indistinguishable, safe, OracleConfig};
use dcc::par::Strategy as Exec;
use dcc::protect::{protected_at, weakly_protected_at};
use dcc::syntax::{alpha_eq, erase_taints, is_normal, normalize_type, Term, Type};
use dcc::transform::blame_of;
use dcc::typecheck::System;
use proptest::prelude::*;
use proptest::sample::select;

fn lattices() -> Vec<Lattice> {
    vec![Lattice::two(), Lattice::diamond()]
}

fn arb_type(lat: &Lattice) -> impl proptest::strategy::Strategy<Value = Type> {
    let idx = lat.all_indices();
    Just(Type::Unit).prop_recursive(4, 24, 2, move |inner| {
        let i = idx.clone();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::prod(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::fun(a, b)),
            (select(i.clone()), inner.clone()).prop_map(|(l, s)| Type::strong(l, s)),
            (select(i.clone()), inner.clone()).prop_map(|(l, s)| Type::weak(l, s)),
            (select(i), inner).prop_map(|(l, s)| Type::open(s, l)),
        ]
    })
}

/// First-order types with their values, for the oracle properties.
fn value_pool() -> &'static Vec<(Type, Vec<Term>)> {
    static POOL: OnceLock<Vec<(Type, Vec<Term>)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let lat = Lattice::two();
        enum_types_by_size(&lat, 4, Grammar::Hybrid)
            .into_iter()
            .filter(|t| t.is_first_order())
            .map(|t| {
                let vs = enum_values(&lat, &t, 4).unwrap();
                (t, vs)
            })
            .collect()
    })
}

/// Closed weak-calculus programs of a few small types.
fn term_pool() -> &'static Vec<(Type, Term)> {
    static POOL: OnceLock<Vec<(Type, Term)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let lat = Lattice::two();
        let mut out = Vec::new();
        for src in ["unit+unit", "W[H](unit+unit)", "(unit+unit)*unit", "unit+(unit+unit)"] {
            let t = dcc::syntax::parse_type(src, &lat).unwrap();
            for e in enum_typed_terms(&lat, &t, System::Dccd, 7) {
                out.push((t.clone(), e));
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn index_lattice_laws(k in 0usize..2, a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let lat = &lattices()[k];
        let all = lat.all_indices();
        let (a, b, c) = (all[a % all.len()], all[b % all.len()], all[c % all.len()]);
        prop_assert_eq!(lat.ijoin(a, b), lat.ijoin(b, a));
        prop_assert_eq!(lat.imeet(a, b), lat.imeet(b, a));
        prop_assert_eq!(lat.ijoin(a, lat.ijoin(b, c)), lat.ijoin(lat.ijoin(a, b), c));
        prop_assert_eq!(lat.ijoin(a, a), a);
        prop_assert_eq!(lat.ijoin(a, lat.imeet(a, b)), a);
        prop_assert_eq!(lat.imeet(a, lat.ijoin(a, b)), a);
        prop_assert_eq!(lat.ileq(a, b), lat.ijoin(a, b) == b);
        prop_assert!(lat.ileq(lat.bottom_index(), a) && lat.ileq(a, lat.top_index()));
    }

    #[test]
    fn level_lattice_laws(k in 0usize..2, a in 0usize..8, b in 0usize..8) {
        let lat = &lattices()[k];
        let levels: Vec<_> = lat.levels().collect();
        let (a, b) = (levels[a % levels.len()], levels[b % levels.len()]);
        let j = lat.join(a, b);
        prop_assert!(lat.leq(a, j) && lat.leq(b, j));
        prop_assert_eq!(lat.leq(a, b), lat.meet(a, b) == a);
        prop_assert_eq!(lat.beta_inv(lat.beta(a)), Some(a));
    }

    #[test]
    fn normalize_is_idempotent(t in arb_type(&Lattice::diamond())) {
        let lat = Lattice::diamond();
        let n = normalize_type(&lat, &t);
        prop_assert!(is_normal(&lat, &n));
        prop_assert_eq!(normalize_type(&lat, &n), n);
    }

    #[test]
    fn protection_is_downward_closed(t in arb_type(&Lattice::diamond()), a in 0usize..64, b in 0usize..64) {
        let lat = Lattice::diamond();
        let all = lat.all_indices();
        let (hi, lo) = (all[a % all.len()], all[b % all.len()]);
        prop_assume!(lat.ileq(lo, hi));
        if protected_at(&lat, hi, &t) {
            prop_assert!(protected_at(&lat, lo, &t));
        }
        if weakly_protected_at(&lat, hi, &t) {
            prop_assert!(weakly_protected_at(&lat, lo, &t));
        }
    }

    #[test]
    fn blame_grows_with_the_type(t in arb_type(&Lattice::diamond()), u in arb_type(&Lattice::diamond()), a in 0usize..64) {
        let lat = Lattice::diamond();
        let all = lat.all_indices();
        let l = all[a % all.len()];
        let b = blame_of(&lat, &t);
        for bigger in [Type::strong(l, t.clone()), Type::weak(l, t.clone()), Type::prod(t.clone(), u.clone())] {
            prop_assert!(lat.ileq(b, blame_of(&lat, &bigger)));
        }
        prop_assert_eq!(blame_of(&lat, &Type::sum(t.clone(), u.clone())), lat.ijoin(b, blame_of(&lat, &u)));
    }

    #[test]
    fn indistinguishability_is_a_per(k in any::<prop::sample::Index>(), i in any::<prop::sample::Index>(),
                                     j in any::<prop::sample::Index>(), m in any::<prop::sample::Index>(),
                                     o in 0usize..64) {
        let lat = Lattice::two();
        let cfg = OracleConfig::default();
        let (t, vs) = k.get(value_pool());
        let l = lat.all_indices()[o % lat.all_indices().len()];
        let (a, b, c) = (i.get(vs), j.get(vs), m.get(vs));
        let rel = |x: &Term, y: &Term| indistinguishable(&lat, x, y, t, l, &cfg).unwrap();
        prop_assert_eq!(rel(a, b), rel(b, a));
        if rel(a, b) && rel(b, c) {
            prop_assert!(rel(a, c));
        }
        prop_assert_eq!(rel(a, b), common::brute_indistinguishable(&lat, a, b, t, l, 3));
    }

    #[test]
    fn lower_observers_see_less(k in any::<prop::sample::Index>(), i in any::<prop::sample::Index>(),
                                j in any::<prop::sample::Index>(), a in 0usize..64, b in 0usize..64) {
        let lat = Lattice::two();
        let cfg = OracleConfig::default();
        let (t, vs) = k.get(value_pool());
        let all = lat.all_indices();
        let (hi, lo) = (all[a % all.len()], all[b % all.len()]);
        prop_assume!(lat.ileq(lo, hi));
        let (x, y) = (i.get(vs), j.get(vs));
        if indistinguishable(&lat, x, y, t, hi, &cfg).unwrap() {
            prop_assert!(indistinguishable(&lat, x, y, t, lo, &cfg).unwrap());
        }
        // Safety runs the other way: a higher observer tolerates more taints.
        if safe(&lat, x, t, lo, &cfg).unwrap() {
            prop_assert!(safe(&lat, x, t, hi, &cfg).unwrap());
        }
    }

    #[test]
    fn taints_do_not_change_results(i in any::<prop::sample::Index>()) {
        let lat = Lattice::two();
        let (_, e) = i.get(term_pool());
        let tainted = eval(&lat, e, true, common::FUEL).unwrap();
        let plain = eval(&lat, e, false, common::FUEL).unwrap();
        prop_assert!(alpha_eq(&erase_taints(&tainted), &erase_taints(&plain)));
        prop_assert_eq!(eval(&lat, e, true, common::FUEL).unwrap(), tainted);
    }

    #[test]
    fn strategies_agree(xs in prop::collection::vec(any::<u32>(), 0..200), m in 1u32..7) {
        let f = |x: &u32| x.is_multiple_of(m);
        prop_assert_eq!(Exec::Sequential.filter(xs.clone(), f), Exec::Parallel.filter(xs, f));
    }
}

#[test]
fn enumeration_is_strategy_independent() {
    let lat = Lattice::two();
    let t = dcc::syntax::parse_type("T[H](unit+unit) -> T[H](unit+unit)", &lat).unwrap();
    let mut seq = TermBounds::new(&lat, System::Dcc, 7);
    seq.strategy = Exec::Sequential;
    let mut par = seq.clone();
    par.strategy = Exec::Parallel;
    assert_eq!(
        enum_typed_terms_with(&lat, &t, System::Dcc, &seq),
        enum_typed_terms_with(&lat, &t, System::Dcc, &par)
    );
}

#[test]
fn pure_indices_have_no_blame() {
    for lat in lattices() {
        let pure: Vec<Index> = lat.level_indices();
        assert!(pure.iter().all(|&i| lat.is_pure_level(i)));
    }
}
