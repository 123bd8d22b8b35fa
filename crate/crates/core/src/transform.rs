//! Translations between the calculi and a few static analyses on types.

use thiserror::Error;

use crate::lattice::{Index, Lattice};
use crate::syntax::{normalize_type, normalize_type_at, show_type, Side, Term, Type};

pub use crate::syntax::erase_taints;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("`{construct}` is not a DCC construct")]
    NonDccConstruct { construct: &'static str },
    #[error("`{construct}` is not a DCC^d construct")]
    NonDccdConstruct { construct: &'static str },
    #[error("no leak function for type {ty}")]
    UnsupportedLeakType { ty: String },
}

/// Things both translations apply to.
pub trait Translate: Sized {
    /// Strong protection becomes weak protection.
    fn to_weak(&self) -> Result<Self, TransformError>;
    /// Weak protection becomes strong, taints become binds.
    fn to_strong(&self) -> Result<Self, TransformError>;
}

/// `[[x]]`, from DCC into DCC^d.
pub fn weaken_translate<X: Translate>(x: &X) -> Result<X, TransformError> {
    x.to_weak()
}

/// `{{x}}`, from DCC^d back into DCC.
pub fn volpano_translate<X: Translate>(x: &X) -> Result<X, TransformError> {
    x.to_strong()
}

impl Translate for Type {
    fn to_weak(&self) -> Result<Type, TransformError> {
        Ok(match self {
            Type::Unit | Type::Hole(_) => self.clone(),
            Type::Prod(a, b) => Type::prod(a.to_weak()?, b.to_weak()?),
            Type::Sum(a, b) => Type::sum(a.to_weak()?, b.to_weak()?),
            Type::Fun(a, b) => Type::fun(a.to_weak()?, b.to_weak()?),
            Type::Strong(l, s) => Type::weak(*l, s.to_weak()?),
            Type::Weak(..) => return Err(TransformError::NonDccConstruct { construct: "W" }),
            Type::Open(..) => return Err(TransformError::NonDccConstruct { construct: "open type" }),
        })
    }

    /// Qualifiers of open types are dropped; DCC has no counterpart.
    fn to_strong(&self) -> Result<Type, TransformError> {
        Ok(match self {
            Type::Unit | Type::Hole(_) => self.clone(),
            Type::Prod(a, b) => Type::prod(a.to_strong()?, b.to_strong()?),
            Type::Sum(a, b) => Type::sum(a.to_strong()?, b.to_strong()?),
            Type::Fun(a, b) => Type::fun(a.to_strong()?, b.to_strong()?),
            Type::Weak(l, s) => Type::strong(*l, s.to_strong()?),
            Type::Strong(..) => return Err(TransformError::NonDccdConstruct { construct: "T" }),
            Type::Open(s, _) => s.to_strong()?,
        })
    }
}

impl Translate for Term {
    fn to_weak(&self) -> Result<Term, TransformError> {
        let go = |e: &Term| e.to_weak();
        Ok(match self {
            Term::Unit | Term::Var(_) => self.clone(),
            Term::Abs(x, t, b) => Term::abs(x, t.to_weak()?, go(b)?),
            Term::App(a, b) => Term::app(go(a)?, go(b)?),
            Term::Pair(a, b) => Term::pair(go(a)?, go(b)?),
            Term::Proj(s, a) => Term::proj(*s, go(a)?),
            Term::Inj(s, a) => Term::inj(*s, go(a)?),
            Term::Case(s, x, l, y, r) => Term::case(go(s)?, x, go(l)?, y, go(r)?),
            Term::StrongRet(l, a) => Term::weak_ret(*l, go(a)?),
            Term::Bind(x, a, b) => Term::bind(x, go(a)?, go(b)?),
            Term::WeakRet(..) => return Err(TransformError::NonDccConstruct { construct: "weta" }),
            Term::Weaken(_) => return Err(TransformError::NonDccConstruct { construct: "weaken" }),
            Term::Taint(..) => return Err(TransformError::NonDccConstruct { construct: "taint" }),
        })
    }

    fn to_strong(&self) -> Result<Term, TransformError> {
        let go = |e: &Term| e.to_strong();
        Ok(match self {
            Term::Unit | Term::Var(_) => self.clone(),
            Term::Abs(x, t, b) => Term::abs(x, t.to_strong()?, go(b)?),
            Term::App(a, b) => Term::app(go(a)?, go(b)?),
            Term::Pair(a, b) => Term::pair(go(a)?, go(b)?),
            Term::Proj(s, a) => Term::proj(*s, go(a)?),
            Term::Inj(s, a) => Term::inj(*s, go(a)?),
            Term::Case(s, x, l, y, r) => Term::case(go(s)?, x, go(l)?, y, go(r)?),
            Term::WeakRet(l, a) => Term::strong_ret(*l, go(a)?),
            Term::Bind(x, a, b) => Term::bind(x, go(a)?, go(b)?),
            // the binder scopes over its own occurrence only, so no capture
            Term::Taint(a, l) => Term::bind("w", Term::strong_ret(*l, go(a)?), Term::var("w")),
            Term::StrongRet(..) => return Err(TransformError::NonDccdConstruct { construct: "eta" }),
            Term::Weaken(_) => return Err(TransformError::NonDccdConstruct { construct: "weaken" }),
        })
    }
}

/// Drops every open-type qualifier.
pub fn erase(t: &Type) -> Type {
    match t {
        Type::Unit | Type::Hole(_) => t.clone(),
        Type::Prod(a, b) => Type::prod(erase(a), erase(b)),
        Type::Sum(a, b) => Type::sum(erase(a), erase(b)),
        Type::Fun(a, b) => Type::fun(erase(a), erase(b)),
        Type::Strong(l, s) => Type::strong(*l, erase(s)),
        Type::Weak(l, s) => Type::weak(*l, erase(s)),
        Type::Open(s, _) => erase(s),
    }
}

/// Whether a `T` or `W` node sits left of an odd number of arrows.
pub fn has_negative_protection(t: &Type) -> bool {
    fn go(t: &Type, negative: bool) -> bool {
        match t {
            Type::Unit | Type::Hole(_) => false,
            Type::Fun(a, b) => go(a, !negative) || go(b, negative),
            Type::Prod(a, b) | Type::Sum(a, b) => go(a, negative) || go(b, negative),
            Type::Strong(_, s) | Type::Weak(_, s) => negative || go(s, negative),
            Type::Open(s, _) => go(s, negative),
        }
    }
    go(t, false)
}

/// `B(t)`: the join, in the blame lattice, of every blame occurring in `t`.
pub fn blame_of(lat: &Lattice, t: &Type) -> Index {
    let b = t
        .indices()
        .into_iter()
        .fold(lat.blame_bottom_level(), |acc, i| lat.blame_join(acc, lat.blame_component(i)));
    lat.beta(b)
}

/// A term of type `W[l](t) -> erase(t)` that copies its argument out by
/// deconstructing it completely.
///
/// Accepts types built from unit, products, (qualified) sums, functions
/// with qualifier-free domains and weak monads.
pub fn leak_gen(lat: &Lattice, l: Index, t: &Type) -> Result<Term, TransformError> {
    Leak { lat, depth: 0 }.leak(l, &normalize_type_at(lat, t, l))
}

struct Leak<'a> {
    lat: &'a Lattice,
    depth: usize,
}

impl Leak<'_> {
    fn name(&self, base: &str) -> String {
        if self.depth == 0 {
            base.to_string()
        } else {
            format!("{base}{}", self.depth)
        }
    }

    fn nested(&mut self, l: Index, t: &Type) -> Result<Term, TransformError> {
        self.depth += 1;
        let r = self.leak(l, t);
        self.depth -= 1;
        r
    }

    fn unsupported(&self, t: &Type) -> TransformError {
        TransformError::UnsupportedLeakType { ty: show_type(self.lat, t) }
    }

    /// `t` is normalized at ambient `l`.
    fn leak(&mut self, l: Index, t: &Type) -> Result<Term, TransformError> {
        let x = self.name("x");
        let y = self.name("y");
        let body = match t {
            Type::Unit => Term::Unit,
            Type::Prod(a, b) => {
                let left = Term::app(self.nested(l, a)?, Term::weak_ret(l, Term::proj(Side::Left, Term::var(&y))));
                let right = Term::app(self.nested(l, b)?, Term::weak_ret(l, Term::proj(Side::Right, Term::var(&y))));
                Term::bind(&y, Term::var(&x), Term::pair(left, right))
            }
            Type::Sum(..) | Type::Open(..) => {
                let (a, b, q) = match t {
                    Type::Sum(a, b) => (a, b, self.lat.bottom_index()),
                    Type::Open(s, q) => match &**s {
                        Type::Sum(a, b) => (a, b, *q),
                        _ => return Err(self.unsupported(t)),
                    },
                    _ => unreachable!(),
                };
                let lq = self.lat.ijoin(l, q);
                let z1 = self.name("z1");
                let z2 = self.name("z2");
                let a_n = normalize_type_at(self.lat, a, lq);
                let b_n = normalize_type_at(self.lat, b, lq);
                let left = Term::inj(Side::Left, Term::app(self.nested(lq, &a_n)?, Term::weak_ret(lq, Term::var(&z1))));
                let right = Term::inj(Side::Right, Term::app(self.nested(lq, &b_n)?, Term::weak_ret(lq, Term::var(&z2))));
                Term::bind(&y, Term::var(&x), Term::case(Term::var(&y), &z1, left, &z2, right))
            }
            Type::Fun(a, b) => {
                if a.has_open() || a.has_holes() {
                    return Err(self.unsupported(t));
                }
                let z = self.name("z");
                let f = self.name("f");
                let inner = Term::app(self.nested(l, b)?, Term::weak_ret(l, Term::app(Term::var(&f), Term::var(&z))));
                Term::abs(&z, (**a).clone(), Term::bind(&f, Term::var(&x), inner))
            }
            Type::Weak(m, s) => {
                let s_n = normalize_type_at(self.lat, s, *m);
                Term::bind(&y, Term::var(&x), Term::weak_ret(*m, Term::app(self.nested(*m, &s_n)?, Term::var(&y))))
            }
            Type::Strong(..) | Type::Hole(_) => return Err(self.unsupported(t)),
        };
        Ok(Term::abs(&x, normalize_type(self.lat, &Type::weak(l, t.clone())), body))
    }
}
