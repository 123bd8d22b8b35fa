//! Canonical forms for types and tainted values, plus alpha-equivalence.

use super::ast::{Name, Term, Type};
use crate::lattice::{Index, Lattice};

/// Pushes every `s^l` qualifier down to the sums it can affect and drops
/// qualifiers already implied by an enclosing monad.
///
/// After normalization `Open` only wraps a `Sum` (or a `Hole`) and its
/// qualifier is never below the protection of the enclosing context.
pub fn normalize_type(lat: &Lattice, t: &Type) -> Type {
    norm(lat, t, lat.bottom_index())
}

/// Normalizes `t` as if it occurred under ambient protection `amb`.
pub fn normalize_type_at(lat: &Lattice, t: &Type, amb: Index) -> Type {
    norm(lat, t, amb)
}

fn norm(lat: &Lattice, t: &Type, amb: Index) -> Type {
    match t {
        Type::Unit | Type::Hole(_) => t.clone(),
        Type::Fun(a, b) => Type::fun(norm(lat, a, lat.bottom_index()), norm(lat, b, amb)),
        Type::Prod(a, b) => Type::prod(norm(lat, a, amb), norm(lat, b, amb)),
        Type::Sum(a, b) => Type::sum(norm(lat, a, amb), norm(lat, b, amb)),
        Type::Strong(m, s) => Type::strong(*m, norm(lat, s, lat.ijoin(amb, *m))),
        Type::Weak(m, s) => Type::weak(*m, norm(lat, s, lat.ijoin(amb, *m))),
        Type::Open(s, q) => push(lat, norm(lat, s, amb), *q, amb),
    }
}

/// `t^q` for an already normalized `t` under ambient `amb`.
fn push(lat: &Lattice, t: Type, q: Index, amb: Index) -> Type {
    if lat.ileq(q, amb) {
        return t;
    }
    match t {
        Type::Unit => Type::Unit,
        Type::Prod(a, b) => Type::prod(push(lat, *a, q, amb), push(lat, *b, q, amb)),
        Type::Fun(a, b) => Type::fun(*a, push(lat, *b, q, amb)),
        Type::Strong(m, s) => {
            if lat.ileq(q, m) {
                Type::Strong(m, s)
            } else {
                Type::strong(m, push(lat, *s, q, lat.ijoin(amb, m)))
            }
        }
        Type::Weak(m, s) => {
            if lat.ileq(q, m) {
                Type::Weak(m, s)
            } else {
                Type::weak(m, push(lat, *s, q, lat.ijoin(amb, m)))
            }
        }
        Type::Sum(a, b) => open_sum(lat, *a, *b, lat.ijoin(q, amb), amb),
        Type::Open(s, q0) => match *s {
            Type::Sum(a, b) => open_sum(lat, *a, *b, lat.ijoin(lat.ijoin(q0, q), amb), amb),
            other => Type::open(other, lat.ijoin(lat.ijoin(q0, q), amb)),
        },
        Type::Hole(n) => Type::open(Type::Hole(n), lat.ijoin(q, amb)),
    }
}

fn open_sum(lat: &Lattice, a: Type, b: Type, q: Index, amb: Index) -> Type {
    let inner = lat.ijoin(amb, q);
    Type::open(Type::sum(norm(lat, &a, inner), norm(lat, &b, inner)), q)
}

/// Whether `t` is already in normal form.
pub fn is_normal(lat: &Lattice, t: &Type) -> bool {
    normalize_type(lat, t) == *t
}

/// Moves a taint at the head of a value to where it can still be observed.
///
/// Nested taints merge and bottom taints vanish. `()` absorbs any taint,
/// functions carry it into their body and pairs into both components. A
/// monadic value already protected at the taint's level drops it, otherwise
/// the taint moves inside. Only injections keep a taint at the head.
/// Terms that are not values are returned unchanged.
pub fn normalize_taint(lat: &Lattice, e: &Term) -> Term {
    let Term::Taint(inner, q) = e else {
        return e.clone();
    };
    let mut q = *q;
    let mut v: &Term = inner;
    while let Term::Taint(w, q2) = v {
        q = lat.ijoin(q, *q2);
        v = w;
    }
    if !v.is_value() {
        return Term::taint(v.clone(), q);
    }
    if lat.is_bottom(q) {
        return v.clone();
    }
    match v {
        Term::Unit => Term::Unit,
        Term::Abs(x, t, body) => Term::abs(x, t.clone(), Term::taint((**body).clone(), q)),
        Term::Pair(a, b) => Term::pair(Term::taint((**a).clone(), q), Term::taint((**b).clone(), q)),
        Term::StrongRet(m, body) => {
            if lat.ileq(q, *m) {
                v.clone()
            } else {
                Term::strong_ret(*m, Term::taint((**body).clone(), q))
            }
        }
        Term::WeakRet(m, body) => {
            if lat.ileq(q, *m) {
                v.clone()
            } else {
                Term::weak_ret(*m, Term::taint((**body).clone(), q))
            }
        }
        _ => Term::taint(v.clone(), q),
    }
}

/// Removes every taint node.
pub fn erase_taints(e: &Term) -> Term {
    match e {
        Term::Taint(v, _) => erase_taints(v),
        Term::Unit | Term::Var(_) => e.clone(),
        Term::Abs(x, t, b) => Term::abs(x, t.clone(), erase_taints(b)),
        Term::App(a, b) => Term::app(erase_taints(a), erase_taints(b)),
        Term::Pair(a, b) => Term::pair(erase_taints(a), erase_taints(b)),
        Term::Proj(s, a) => Term::proj(*s, erase_taints(a)),
        Term::Inj(s, a) => Term::inj(*s, erase_taints(a)),
        Term::Case(s, x, l, y, r) => Term::case(erase_taints(s), x, erase_taints(l), y, erase_taints(r)),
        Term::StrongRet(l, a) => Term::strong_ret(*l, erase_taints(a)),
        Term::WeakRet(l, a) => Term::weak_ret(*l, erase_taints(a)),
        Term::Bind(x, a, b) => Term::bind(x, erase_taints(a), erase_taints(b)),
        Term::Weaken(a) => Term::weaken(erase_taints(a)),
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    aeq(a, b, &mut Vec::new())
}

/// `alpha_eq` after dropping bottom taints and merging nested ones at
/// every position.
pub fn alpha_eq_in(lat: &Lattice, a: &Term, b: &Term) -> bool {
    alpha_eq(&squash_taints(lat, a), &squash_taints(lat, b))
}

fn squash_taints(lat: &Lattice, e: &Term) -> Term {
    let go = |t: &Term| squash_taints(lat, t);
    match e {
        Term::Taint(..) => {
            let mut q = lat.bottom_index();
            let mut v = e;
            while let Term::Taint(w, q2) = v {
                q = lat.ijoin(q, *q2);
                v = w;
            }
            let v = go(v);
            if lat.is_bottom(q) {
                v
            } else {
                Term::taint(v, q)
            }
        }
        Term::Unit | Term::Var(_) => e.clone(),
        Term::Abs(x, t, b) => Term::abs(x, t.clone(), go(b)),
        Term::App(a, b) => Term::app(go(a), go(b)),
        Term::Pair(a, b) => Term::pair(go(a), go(b)),
        Term::Proj(s, a) => Term::proj(*s, go(a)),
        Term::Inj(s, a) => Term::inj(*s, go(a)),
        Term::Case(s, x, l, y, r) => Term::case(go(s), x, go(l), y, go(r)),
        Term::StrongRet(l, a) => Term::strong_ret(*l, go(a)),
        Term::WeakRet(l, a) => Term::weak_ret(*l, go(a)),
        Term::Bind(x, a, b) => Term::bind(x, go(a), go(b)),
        Term::Weaken(a) => Term::weaken(go(a)),
    }
}

fn aeq(a: &Term, b: &Term, env: &mut Vec<(Name, Name)>) -> bool {
    fn under(env: &mut Vec<(Name, Name)>, x: &Name, y: &Name, a: &Term, b: &Term) -> bool {
        env.push((x.clone(), y.clone()));
        let r = aeq(a, b, env);
        env.pop();
        r
    }
    match (a, b) {
        (Term::Unit, Term::Unit) => true,
        (Term::Var(x), Term::Var(y)) => {
            for (p, q) in env.iter().rev() {
                if p == x || q == y {
                    return p == x && q == y;
                }
            }
            x == y
        }
        (Term::Abs(x, t, e), Term::Abs(y, u, f)) => t == u && under(env, x, y, e, f),
        (Term::App(a1, a2), Term::App(b1, b2)) | (Term::Pair(a1, a2), Term::Pair(b1, b2)) => {
            aeq(a1, b1, env) && aeq(a2, b2, env)
        }
        (Term::Proj(s, e), Term::Proj(t, f)) | (Term::Inj(s, e), Term::Inj(t, f)) => s == t && aeq(e, f, env),
        (Term::StrongRet(l, e), Term::StrongRet(m, f))
        | (Term::WeakRet(l, e), Term::WeakRet(m, f))
        | (Term::Taint(e, l), Term::Taint(f, m)) => l == m && aeq(e, f, env),
        (Term::Weaken(e), Term::Weaken(f)) => aeq(e, f, env),
        (Term::Bind(x, e1, e2), Term::Bind(y, f1, f2)) => aeq(e1, f1, env) && under(env, x, y, e2, f2),
        (Term::Case(s, x1, l1, y1, r1), Term::Case(t, x2, l2, y2, r2)) => {
            aeq(s, t, env) && under(env, x1, x2, l1, l2) && under(env, y1, y2, r1, r2)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::{parse_term, parse_type};

    fn n(lat: &Lattice, src: &str) -> Type {
        normalize_type(lat, &parse_type(src, lat).unwrap())
    }

    #[test]
    fn qualifiers_reach_sums_only() {
        let lat = Lattice::two();
        assert_eq!(n(&lat, "unit^H"), Type::Unit);
        assert_eq!(n(&lat, "(unit * (unit + unit))^H"), n(&lat, "unit * (unit + unit)^H"));
        assert_eq!(n(&lat, "(unit -> unit + unit)^H"), n(&lat, "unit -> (unit + unit)^H"));
        assert_eq!(n(&lat, "(unit + unit)^L"), parse_type("unit + unit", &lat).unwrap());
    }

    #[test]
    fn monads_absorb_lower_qualifiers() {
        let lat = Lattice::two();
        assert_eq!(n(&lat, "(W[H](unit + unit))^H"), n(&lat, "W[H](unit + unit)"));
        assert_eq!(n(&lat, "W[H]((unit + unit)^H)"), n(&lat, "W[H](unit + unit)"));
        assert_eq!(n(&lat, "T[H]((unit + unit)^H)"), n(&lat, "T[H](unit + unit)"));
        assert_eq!(n(&lat, "(W[L](unit + unit))^H"), n(&lat, "W[L]((unit + unit)^H)"));
    }

    #[test]
    fn nested_qualifiers_merge() {
        let lat = Lattice::diamond();
        assert_eq!(n(&lat, "(unit + unit)^L^R"), n(&lat, "(unit + unit)^top"));
        let t = n(&lat, "((unit + unit) + unit)^L");
        let Type::Open(s, q) = &t else { panic!("{t:?}") };
        assert_eq!(lat.show_index(*q), "L");
        let Type::Sum(a, _) = &**s else { panic!() };
        // inner sum is already protected by the outer qualifier
        assert_eq!(**a, Type::bool());
    }

    #[test]
    fn idempotent_on_examples() {
        let lat = Lattice::diamond();
        for src in ["(W[L](unit + unit^R))^R", "T[!L]((unit + unit)^L -> unit * unit^top)", "((unit+unit)^L + unit)^R"] {
            let once = n(&lat, src);
            assert_eq!(normalize_type(&lat, &once), once, "{src}");
        }
    }

    #[test]
    fn taint_normal_forms() {
        let lat = Lattice::two();
        let h = lat.index(lat.level_named("H").unwrap());
        let l = lat.bottom_index();
        let p = |s: &str| parse_term(s, &lat).unwrap();
        assert_eq!(normalize_taint(&lat, &Term::taint(Term::Unit, h)), Term::Unit);
        assert_eq!(normalize_taint(&lat, &Term::taint(p("inj1 ()"), l)), p("inj1 ()"));
        assert_eq!(normalize_taint(&lat, &p("inj1 () @ L @ H")), p("inj1 () @ H"));
        assert_eq!(normalize_taint(&lat, &p("((), inj1 ()) @ H")), p("(() @ H, inj1 () @ H)"));
        assert_eq!(normalize_taint(&lat, &p("(weta[H] inj1 ()) @ H")), p("weta[H] inj1 ()"));
        assert_eq!(normalize_taint(&lat, &p("(weta[L] inj1 ()) @ H")), p("weta[L] (inj1 () @ H)"));
        assert_eq!(normalize_taint(&lat, &p("(f x) @ H")), p("(f x) @ H"));
    }

    #[test]
    fn alpha_equivalence() {
        let lat = Lattice::two();
        let p = |s: &str| parse_term(s, &lat).unwrap();
        assert!(alpha_eq(&p("fun x:unit. x"), &p("fun y:unit. y")));
        assert!(!alpha_eq(&p("fun x:unit. y"), &p("fun y:unit. y")));
        assert!(alpha_eq(&p("case z of a. a | b. z"), &p("case z of c. c | d. z")));
        assert!(!alpha_eq(&p("fun x:unit. fun y:unit. x"), &p("fun x:unit. fun y:unit. y")));
        assert!(alpha_eq(&p("bind x = m in x"), &p("bind q = m in q")));
        assert!(alpha_eq_in(&lat, &p("fun x:unit. x @ L"), &p("fun y:unit. y")));
        assert!(alpha_eq_in(&lat, &p("(inj1 () @ L) @ H"), &p("inj1 () @ H")));
        assert!(!alpha_eq_in(&lat, &p("inj1 () @ H"), &p("inj1 ()")));
    }
}
