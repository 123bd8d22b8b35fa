use crate::lattice::Index;

pub type Name = String;

/// Types of the hybrid language. DCC uses `Strong` only, DCC^d `Weak` and
/// `Open`, DCC^dc and DCC^cd the whole grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Unit,
    Prod(Box<Type>, Box<Type>),
    Sum(Box<Type>, Box<Type>),
    Fun(Box<Type>, Box<Type>),
    /// `T_l(s)`
    Strong(Index, Box<Type>),
    /// `W_l(s)`, the weak monad.
    Weak(Index, Box<Type>),
    /// `s^l`
    Open(Box<Type>, Index),
    /// Placeholder for the undetermined summand of an injection during
    /// checking. Never part of a reported type.
    Hole(u32),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Box::new(a), Box::new(b))
    }

    pub fn fun(a: Type, b: Type) -> Type {
        Type::Fun(Box::new(a), Box::new(b))
    }

    pub fn strong(l: Index, s: Type) -> Type {
        Type::Strong(l, Box::new(s))
    }

    pub fn weak(l: Index, s: Type) -> Type {
        Type::Weak(l, Box::new(s))
    }

    pub fn open(s: Type, l: Index) -> Type {
        Type::Open(Box::new(s), l)
    }

    pub fn bool() -> Type {
        Type::sum(Type::Unit, Type::Unit)
    }

    /// Number of constructor nodes; a qualifier does not count as a node.
    pub fn size(&self) -> usize {
        match self {
            Type::Unit | Type::Hole(_) => 1,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => 1 + a.size() + b.size(),
            Type::Strong(_, s) | Type::Weak(_, s) => 1 + s.size(),
            Type::Open(s, _) => s.size(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Type::Unit | Type::Hole(_) => 1,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => 1 + a.height().max(b.height()),
            Type::Strong(_, s) | Type::Weak(_, s) => 1 + s.height(),
            Type::Open(s, _) => s.height(),
        }
    }

    /// No arrows anywhere.
    pub fn is_first_order(&self) -> bool {
        match self {
            Type::Unit | Type::Hole(_) => true,
            Type::Fun(..) => false,
            Type::Prod(a, b) | Type::Sum(a, b) => a.is_first_order() && b.is_first_order(),
            Type::Strong(_, s) | Type::Weak(_, s) | Type::Open(s, _) => s.is_first_order(),
        }
    }

    pub fn has_holes(&self) -> bool {
        match self {
            Type::Hole(_) => true,
            Type::Unit => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => a.has_holes() || b.has_holes(),
            Type::Strong(_, s) | Type::Weak(_, s) | Type::Open(s, _) => s.has_holes(),
        }
    }

    pub fn contains_sum(&self) -> bool {
        match self {
            Type::Sum(..) => true,
            Type::Unit | Type::Hole(_) => false,
            Type::Prod(a, b) | Type::Fun(a, b) => a.contains_sum() || b.contains_sum(),
            Type::Strong(_, s) | Type::Weak(_, s) | Type::Open(s, _) => s.contains_sum(),
        }
    }

    pub fn has_weak(&self) -> bool {
        match self {
            Type::Weak(..) => true,
            Type::Unit | Type::Hole(_) => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => a.has_weak() || b.has_weak(),
            Type::Strong(_, s) | Type::Open(s, _) => s.has_weak(),
        }
    }

    pub fn has_strong(&self) -> bool {
        match self {
            Type::Strong(..) => true,
            Type::Unit | Type::Hole(_) => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => a.has_strong() || b.has_strong(),
            Type::Weak(_, s) | Type::Open(s, _) => s.has_strong(),
        }
    }

    pub fn has_open(&self) -> bool {
        match self {
            Type::Open(..) => true,
            Type::Unit | Type::Hole(_) => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => a.has_open() || b.has_open(),
            Type::Strong(_, s) | Type::Weak(_, s) => s.has_open(),
        }
    }

    /// Every index mentioned by the type, in pre-order.
    pub fn indices(&self) -> Vec<Index> {
        let mut out = Vec::new();
        self.collect_indices(&mut out);
        out
    }

    fn collect_indices(&self, out: &mut Vec<Index>) {
        match self {
            Type::Unit | Type::Hole(_) => {}
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => {
                a.collect_indices(out);
                b.collect_indices(out);
            }
            Type::Strong(l, s) | Type::Weak(l, s) => {
                out.push(*l);
                s.collect_indices(out);
            }
            Type::Open(s, l) => {
                out.push(*l);
                s.collect_indices(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn number(self) -> u8 {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }
}

/// Terms. Lambdas carry their argument type; `Taint` is internal syntax
/// produced by the taint-propagating evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Unit,
    Var(Name),
    Abs(Name, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(Side, Box<Term>),
    Inj(Side, Box<Term>),
    /// `case e of x. e1 | y. e2`
    Case(Box<Term>, Name, Box<Term>, Name, Box<Term>),
    /// `eta_l e`
    StrongRet(Index, Box<Term>),
    /// `weta_l e`
    WeakRet(Index, Box<Term>),
    Bind(Name, Box<Term>, Box<Term>),
    Weaken(Box<Term>),
    /// `e @ l`
    Taint(Box<Term>, Index),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn abs(x: &str, t: Type, body: Term) -> Term {
        Term::Abs(x.to_string(), t, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(side: Side, e: Term) -> Term {
        Term::Proj(side, Box::new(e))
    }

    pub fn inj(side: Side, e: Term) -> Term {
        Term::Inj(side, Box::new(e))
    }

    pub fn case(e: Term, x: &str, l: Term, y: &str, r: Term) -> Term {
        Term::Case(Box::new(e), x.to_string(), Box::new(l), y.to_string(), Box::new(r))
    }

    pub fn strong_ret(l: Index, e: Term) -> Term {
        Term::StrongRet(l, Box::new(e))
    }

    pub fn weak_ret(l: Index, e: Term) -> Term {
        Term::WeakRet(l, Box::new(e))
    }

    pub fn bind(x: &str, e: Term, body: Term) -> Term {
        Term::Bind(x.to_string(), Box::new(e), Box::new(body))
    }

    pub fn weaken(e: Term) -> Term {
        Term::Weaken(Box::new(e))
    }

    pub fn taint(e: Term, l: Index) -> Term {
        Term::Taint(Box::new(e), l)
    }

    /// AST node count (annotations excluded).
    pub fn size(&self) -> usize {
        match self {
            Term::Unit | Term::Var(_) => 1,
            Term::Abs(_, _, e)
            | Term::Proj(_, e)
            | Term::Inj(_, e)
            | Term::StrongRet(_, e)
            | Term::WeakRet(_, e)
            | Term::Weaken(e)
            | Term::Taint(e, _) => 1 + e.size(),
            Term::App(a, b) | Term::Pair(a, b) | Term::Bind(_, a, b) => 1 + a.size() + b.size(),
            Term::Case(e, _, l, _, r) => 1 + e.size() + l.size() + r.size(),
        }
    }

    /// Weak-head values, including tainted values.
    pub fn is_value(&self) -> bool {
        match self {
            Term::Unit
            | Term::Abs(..)
            | Term::Pair(..)
            | Term::Inj(..)
            | Term::StrongRet(..)
            | Term::WeakRet(..) => true,
            Term::Taint(e, _) => e.is_value(),
            _ => false,
        }
    }

    /// Whether any node satisfies `pred`.
    pub fn any(&self, pred: &dyn Fn(&Term) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Term::Unit | Term::Var(_) => false,
            Term::Abs(_, _, e)
            | Term::Proj(_, e)
            | Term::Inj(_, e)
            | Term::StrongRet(_, e)
            | Term::WeakRet(_, e)
            | Term::Weaken(e)
            | Term::Taint(e, _) => e.any(pred),
            Term::App(a, b) | Term::Pair(a, b) | Term::Bind(_, a, b) => a.any(pred) || b.any(pred),
            Term::Case(e, _, l, _, r) => e.any(pred) || l.any(pred) || r.any(pred),
        }
    }

    pub fn has_taint(&self) -> bool {
        self.any(&|t| matches!(t, Term::Taint(..)))
    }

    pub fn has_weaken(&self) -> bool {
        self.any(&|t| matches!(t, Term::Weaken(..)))
    }

    pub fn free_vars(&self) -> std::collections::BTreeSet<Name> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut std::collections::BTreeSet<Name>) {
        match self {
            Term::Unit => {}
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Abs(x, _, e) => {
                bound.push(x.clone());
                e.collect_free(bound, out);
                bound.pop();
            }
            Term::Proj(_, e)
            | Term::Inj(_, e)
            | Term::StrongRet(_, e)
            | Term::WeakRet(_, e)
            | Term::Weaken(e)
            | Term::Taint(e, _) => e.collect_free(bound, out),
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Bind(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::Case(e, x, l, y, r) => {
                e.collect_free(bound, out);
                bound.push(x.clone());
                l.collect_free(bound, out);
                bound.pop();
                bound.push(y.clone());
                r.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}
