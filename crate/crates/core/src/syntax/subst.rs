//! Capture-avoiding substitution.

use std::collections::BTreeSet;

use super::ast::{Name, Term};

/// First of `base'`, `base''`, ... not in `avoid`.
pub fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// `e[v/x]`. Binders that would capture a free variable of `v` are renamed
/// deterministically.
pub fn subst(e: &Term, x: &str, v: &Term) -> Term {
    let fv = v.free_vars();
    go(e, x, v, &fv)
}

fn go(e: &Term, x: &str, v: &Term, fv: &BTreeSet<Name>) -> Term {
    match e {
        Term::Unit => Term::Unit,
        Term::Var(y) => {
            if y == x {
                v.clone()
            } else {
                e.clone()
            }
        }
        Term::Abs(y, t, body) => {
            let (y2, body2) = under(y, body, x, v, fv);
            Term::Abs(y2, t.clone(), Box::new(body2))
        }
        Term::App(a, b) => Term::app(go(a, x, v, fv), go(b, x, v, fv)),
        Term::Pair(a, b) => Term::pair(go(a, x, v, fv), go(b, x, v, fv)),
        Term::Proj(s, a) => Term::proj(*s, go(a, x, v, fv)),
        Term::Inj(s, a) => Term::inj(*s, go(a, x, v, fv)),
        Term::StrongRet(l, a) => Term::strong_ret(*l, go(a, x, v, fv)),
        Term::WeakRet(l, a) => Term::weak_ret(*l, go(a, x, v, fv)),
        Term::Weaken(a) => Term::weaken(go(a, x, v, fv)),
        Term::Taint(a, l) => Term::taint(go(a, x, v, fv), *l),
        Term::Bind(y, m, body) => {
            let m2 = go(m, x, v, fv);
            let (y2, body2) = under(y, body, x, v, fv);
            Term::Bind(y2, Box::new(m2), Box::new(body2))
        }
        Term::Case(s, y1, l, y2, r) => {
            let s2 = go(s, x, v, fv);
            let (n1, l2) = under(y1, l, x, v, fv);
            let (n2, r2) = under(y2, r, x, v, fv);
            Term::Case(Box::new(s2), n1, Box::new(l2), n2, Box::new(r2))
        }
    }
}

fn under(y: &Name, body: &Term, x: &str, v: &Term, fv: &BTreeSet<Name>) -> (Name, Term) {
    if y == x {
        return (y.clone(), body.clone());
    }
    let body_fv = body.free_vars();
    if fv.contains(y) && body_fv.contains(x) {
        let mut avoid = fv.clone();
        avoid.extend(body_fv);
        avoid.insert(x.to_string());
        let y2 = fresh(y, &avoid);
        let renamed = go(body, y, &Term::Var(y2.clone()), &BTreeSet::from([y2.clone()]));
        (y2, go(&renamed, x, v, fv))
    } else {
        (y.clone(), go(body, x, v, fv))
    }
}
