//! The protection predicates `l ⪯ t` (protected) and `l ≤ t` (weakly
//! protected). Both expect normalized types.

use crate::lattice::{Index, Lattice};
use crate::syntax::Type;

/// Three-valued answer; `Unknown` only arises on types with holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    fn and(self, other: impl FnOnce() -> Tri) -> Tri {
        match self {
            Tri::False => Tri::False,
            Tri::True => other(),
            Tri::Unknown => match other() {
                Tri::False => Tri::False,
                _ => Tri::Unknown,
            },
        }
    }

    pub fn or(self, other: impl FnOnce() -> Tri) -> Tri {
        match self {
            Tri::True => Tri::True,
            Tri::False => other(),
            Tri::Unknown => match other() {
                Tri::True => Tri::True,
                _ => Tri::Unknown,
            },
        }
    }

    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

/// `l ⪯ t`.
pub fn protected_at(lat: &Lattice, l: Index, t: &Type) -> bool {
    protected_tri(lat, l, t) == Tri::True
}

/// `l ≤ t`.
pub fn weakly_protected_at(lat: &Lattice, l: Index, t: &Type) -> bool {
    weakly_protected_tri(lat, l, t) == Tri::True
}

pub fn protected_tri(lat: &Lattice, l: Index, t: &Type) -> Tri {
    match t {
        Type::Unit => Tri::True,
        Type::Hole(_) => Tri::Unknown,
        Type::Prod(a, b) => protected_tri(lat, l, a).and(|| protected_tri(lat, l, b)),
        Type::Fun(_, b) => protected_tri(lat, l, b),
        Type::Strong(m, s) => Tri::from_bool(lat.ileq(l, *m)).or(|| protected_tri(lat, l, s)),
        Type::Weak(_, s) => protected_tri(lat, l, s),
        Type::Sum(..) => Tri::False,
        Type::Open(s, _) => match **s {
            Type::Hole(_) => Tri::Unknown,
            _ => Tri::False,
        },
    }
}

pub fn weakly_protected_tri(lat: &Lattice, l: Index, t: &Type) -> Tri {
    match t {
        Type::Unit => Tri::True,
        Type::Hole(_) => Tri::Unknown,
        Type::Prod(a, b) | Type::Sum(a, b) => weakly_protected_tri(lat, l, a).and(|| weakly_protected_tri(lat, l, b)),
        Type::Fun(_, b) => weakly_protected_tri(lat, l, b),
        Type::Strong(m, s) | Type::Weak(m, s) => {
            Tri::from_bool(lat.ileq(l, *m)).or(|| weakly_protected_tri(lat, l, s))
        }
        Type::Open(s, _) => match **s {
            Type::Hole(_) => Tri::Unknown,
            _ => Tri::False,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{normalize_type, parse_type};

    fn ty(lat: &Lattice, s: &str) -> Type {
        normalize_type(lat, &parse_type(s, lat).unwrap())
    }

    #[test]
    fn strong_protection() {
        let lat = Lattice::two();
        let h = lat.index_named("H").unwrap();
        assert!(protected_at(&lat, h, &ty(&lat, "T[H](unit+unit)")));
        assert!(!protected_at(&lat, h, &ty(&lat, "unit+unit")));
        assert!(protected_at(&lat, h, &ty(&lat, "unit -> T[H](unit)")));
        assert!(!protected_at(&lat, h, &ty(&lat, "W[H](unit+unit)")));
        assert!(protected_at(&lat, h, &ty(&lat, "W[L](T[H](unit+unit))")));
    }

    #[test]
    fn weak_protection() {
        let lat = Lattice::two();
        let h = lat.index_named("H").unwrap();
        assert!(weakly_protected_at(&lat, h, &ty(&lat, "unit+unit")));
        assert!(!weakly_protected_at(&lat, h, &ty(&lat, "(unit+unit)^H")));
        assert!(weakly_protected_at(&lat, h, &ty(&lat, "T[H](unit+unit)")));
        assert!(weakly_protected_at(&lat, h, &ty(&lat, "W[H]((unit+unit)^H)")));
        assert!(!weakly_protected_at(&lat, h, &ty(&lat, "W[L]((unit+unit)^H)")));
    }

    #[test]
    fn blame_indices_take_part() {
        let lat = Lattice::two();
        let bh = lat.index_named("!H").unwrap();
        let h = lat.index_named("H").unwrap();
        let t = ty(&lat, "T[!H](W[H](unit+unit))");
        assert!(protected_at(&lat, bh, &t));
        assert!(!protected_at(&lat, h, &t));
    }

    #[test]
    fn holes_are_unknown() {
        let lat = Lattice::two();
        let h = lat.index_named("H").unwrap();
        assert_eq!(protected_tri(&lat, h, &Type::prod(Type::Unit, Type::Hole(0))), Tri::Unknown);
        assert_eq!(protected_tri(&lat, h, &Type::prod(Type::bool(), Type::Hole(0))), Tri::False);
        assert_eq!(weakly_protected_tri(&lat, h, &Type::strong(h, Type::Hole(0))), Tri::True);
    }
}
