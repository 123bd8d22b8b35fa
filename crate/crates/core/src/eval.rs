//! Call-by-name, leftmost-outermost evaluation to weak-head values, with
//! optional taint propagation.

use thiserror::Error;

use crate::lattice::Lattice;
use crate::syntax::{normalize_taint, show_term, subst, Side, Term};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation is stuck at `{term}`")]
    StuckTerm { term: String },
    #[error("fuel exhausted after {fuel} steps")]
    FuelExhausted { fuel: u64 },
}

/// One reduction step; `Ok(None)` when `e` is already a value.
pub fn step(lat: &Lattice, e: &Term, taint: bool) -> Result<Option<Term>, EvalError> {
    if e.is_value() {
        return Ok(None);
    }
    step_redex(lat, e, taint).map(Some)
}

fn stuck(lat: &Lattice, e: &Term) -> EvalError {
    EvalError::StuckTerm { term: show_term(lat, e) }
}

fn mark(lat: &Lattice, v: &Term, l: crate::lattice::Index, taint: bool) -> Term {
    if taint && !lat.is_bottom(l) {
        Term::taint(v.clone(), l)
    } else {
        v.clone()
    }
}

fn step_redex(lat: &Lattice, e: &Term, taint: bool) -> Result<Term, EvalError> {
    match e {
        Term::App(f, a) => {
            if !f.is_value() {
                return Ok(Term::app(step_redex(lat, f, taint)?, (**a).clone()));
            }
            match normalize_taint(lat, f) {
                Term::Abs(x, _, body) => Ok(subst(&body, &x, a)),
                _ => Err(stuck(lat, e)),
            }
        }
        Term::Proj(side, p) => {
            if !p.is_value() {
                return Ok(Term::proj(*side, step_redex(lat, p, taint)?));
            }
            match normalize_taint(lat, p) {
                Term::Pair(l, r) => Ok(match side {
                    Side::Left => *l,
                    Side::Right => *r,
                }),
                _ => Err(stuck(lat, e)),
            }
        }
        Term::Case(s, x, l, y, r) => {
            if !s.is_value() {
                return Ok(Term::Case(
                    Box::new(step_redex(lat, s, taint)?),
                    x.clone(),
                    l.clone(),
                    y.clone(),
                    r.clone(),
                ));
            }
            let (side, payload) = match normalize_taint(lat, s) {
                Term::Inj(side, v) => (side, *v),
                Term::Taint(inner, q) => match *inner {
                    Term::Inj(side, v) => (side, mark(lat, &v, q, true)),
                    _ => return Err(stuck(lat, e)),
                },
                _ => return Err(stuck(lat, e)),
            };
            Ok(match side {
                Side::Left => subst(l, x, &payload),
                Side::Right => subst(r, y, &payload),
            })
        }
        Term::Bind(x, m, body) => {
            if !m.is_value() {
                return Ok(Term::Bind(x.clone(), Box::new(step_redex(lat, m, taint)?), body.clone()));
            }
            match normalize_taint(lat, m) {
                Term::StrongRet(l, v) | Term::WeakRet(l, v) => Ok(subst(body, x, &mark(lat, &v, l, taint))),
                _ => Err(stuck(lat, e)),
            }
        }
        Term::Weaken(m) => {
            if !m.is_value() {
                return Ok(Term::weaken(step_redex(lat, m, taint)?));
            }
            match normalize_taint(lat, m) {
                Term::StrongRet(l, v) if lat.is_pure_level(l) => {
                    Ok(Term::strong_ret(lat.beta(l.level), Term::WeakRet(l, v)))
                }
                _ => Err(stuck(lat, e)),
            }
        }
        Term::Taint(inner, q) => Ok(Term::taint(step_redex(lat, inner, taint)?, *q)),
        _ => Err(stuck(lat, e)),
    }
}

/// Reduces `e` to a taint-normalized weak-head value.
pub fn eval(lat: &Lattice, e: &Term, taint: bool, fuel: u64) -> Result<Term, EvalError> {
    let mut cur = e.clone();
    for _ in 0..fuel {
        match step(lat, &cur, taint)? {
            Some(next) => cur = next,
            None => return Ok(normalize_taint(lat, &cur)),
        }
    }
    if cur.is_value() {
        return Ok(normalize_taint(lat, &cur));
    }
    Err(EvalError::FuelExhausted { fuel })
}

/// Evaluates under pairs, injections, monadic returns and taints, but not
/// under binders. Each component gets its own `fuel`.
pub fn eval_deep(lat: &Lattice, e: &Term, taint: bool, fuel: u64) -> Result<Term, EvalError> {
    let v = eval(lat, e, taint, fuel)?;
    let go = |t: &Term| eval_deep(lat, t, taint, fuel);
    Ok(match v {
        Term::Pair(a, b) => Term::pair(go(&a)?, go(&b)?),
        Term::Inj(s, a) => Term::inj(s, go(&a)?),
        Term::StrongRet(l, a) => Term::strong_ret(l, go(&a)?),
        Term::WeakRet(l, a) => Term::weak_ret(l, go(&a)?),
        Term::Taint(a, q) => normalize_taint(lat, &Term::taint(go(&a)?, q)),
        other => other,
    })
}
