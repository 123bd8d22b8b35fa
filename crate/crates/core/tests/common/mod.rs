//! Test-only reference implementations, independent of the library's own
//! oracles.

#![allow(dead_code)]

use dcc::eval::eval_deep;
use dcc::lattice::{Index, Lattice};
use dcc::syntax::{alpha_eq, erase_taints, subst, Side, Term, Type};

pub const FUEL: u64 = 10_000;
const HOLE: &str = "hole";

/// Observation contexts for `t` as seen from `l`, built from case, proj and
/// bind up to `depth` eliminations. Each context mentions the free variable
/// `hole`. Binds only open monads the observer may look into, and an open
/// type only shows its payload when its qualifier is visible.
pub fn contexts(lat: &Lattice, t: &Type, l: Index, depth: usize) -> Vec<Term> {
    let mut out = Vec::new();
    build(lat, t, l, depth, Term::var(HOLE), 0, &mut out);
    out
}

fn build(lat: &Lattice, t: &Type, l: Index, depth: usize, h: Term, fresh: usize, out: &mut Vec<Term>) {
    out.push(Term::Unit);
    if depth == 0 {
        return;
    }
    match t {
        Type::Unit | Type::Fun(..) | Type::Hole(_) => {}
        Type::Prod(a, b) => {
            build(lat, a, l, depth - 1, Term::proj(Side::Left, h.clone()), fresh, out);
            build(lat, b, l, depth - 1, Term::proj(Side::Right, h), fresh, out);
        }
        Type::Sum(a, b) => {
            let x = format!("o{fresh}");
            let mut left = Vec::new();
            let mut right = Vec::new();
            build(lat, a, l, depth - 1, Term::var(&x), fresh + 1, &mut left);
            build(lat, b, l, depth - 1, Term::var(&x), fresh + 1, &mut right);
            for cl in &left {
                for cr in &right {
                    out.push(Term::case(
                        h.clone(),
                        &x,
                        Term::inj(Side::Left, cl.clone()),
                        &x,
                        Term::inj(Side::Right, cr.clone()),
                    ));
                }
            }
        }
        Type::Strong(m, s) | Type::Weak(m, s) => {
            if lat.ileq(*m, l) {
                let x = format!("o{fresh}");
                let mut inner = Vec::new();
                build(lat, s, l, depth - 1, Term::var(&x), fresh + 1, &mut inner);
                out.extend(inner.into_iter().map(|c| Term::bind(&x, h.clone(), c)));
            }
        }
        Type::Open(s, q) => {
            if lat.ileq(*q, l) {
                // No elimination of its own: the payload is used directly.
                build(lat, s, l, depth, h, fresh, out);
            }
        }
    }
}

/// Runs a context on a closed value and returns the observed result.
pub fn observe(lat: &Lattice, ctx: &Term, v: &Term) -> Option<Term> {
    eval_deep(lat, &subst(ctx, HOLE, v), false, FUEL).ok().map(|r| erase_taints(&r))
}

/// Two values are related when no context tells them apart.
pub fn brute_indistinguishable(lat: &Lattice, v1: &Term, v2: &Term, t: &Type, l: Index, depth: usize) -> bool {
    contexts(lat, t, l, depth).iter().all(|c| match (observe(lat, c, v1), observe(lat, c, v2)) {
        (Some(a), Some(b)) => alpha_eq(&a, &b),
        _ => false,
    })
}

/// Big-step call-by-name reference evaluator without taints, following the
/// textbook rules directly.
pub fn big_step(lat: &Lattice, e: &Term, fuel: &mut u64) -> Option<Term> {
    if *fuel == 0 {
        return None;
    }
    *fuel -= 1;
    match e {
        Term::Unit | Term::Abs(..) | Term::Pair(..) | Term::Inj(..) | Term::StrongRet(..) | Term::WeakRet(..) => {
            Some(e.clone())
        }
        Term::Var(_) => None,
        Term::Taint(inner, _) => big_step(lat, inner, fuel),
        Term::App(f, a) => match big_step(lat, f, fuel)? {
            Term::Abs(x, _, body) => big_step(lat, &subst(&body, &x, a), fuel),
            _ => None,
        },
        Term::Proj(side, p) => match big_step(lat, p, fuel)? {
            Term::Pair(a, b) => big_step(lat, if *side == Side::Left { &a } else { &b }, fuel),
            _ => None,
        },
        Term::Case(s, x, l, y, r) => match strip(big_step(lat, s, fuel)?) {
            Term::Inj(Side::Left, v) => big_step(lat, &subst(l, x, &v), fuel),
            Term::Inj(Side::Right, v) => big_step(lat, &subst(r, y, &v), fuel),
            _ => None,
        },
        Term::Bind(x, m, body) => match strip(big_step(lat, m, fuel)?) {
            Term::StrongRet(_, v) | Term::WeakRet(_, v) => big_step(lat, &subst(body, x, &v), fuel),
            _ => None,
        },
        Term::Weaken(m) => match strip(big_step(lat, m, fuel)?) {
            Term::StrongRet(l, v) => Some(Term::strong_ret(lat.beta(l.level), Term::weak_ret(l, *v))),
            _ => None,
        },
    }
}

fn strip(t: Term) -> Term {
    match t {
        Term::Taint(inner, _) => strip(*inner),
        other => other,
    }
}
