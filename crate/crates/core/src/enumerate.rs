//! Exhaustive enumeration of small types and of closed well-typed terms.
//!
//! Term enumeration is generate-and-filter. Candidates are produced by
//! shape from the erased target type, drawing every intermediate type (an
//! application's argument, a scrutinee, a bound monad) from a finite
//! universe. Every candidate then goes through the real checker. Binders
//! are named by their depth, so no two outputs are alpha-equivalent.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::lattice::{Index, Lattice};
use crate::par::Strategy;
use crate::syntax::{normalize_type, Side, Term, Type};
use crate::transform::erase;
use crate::typecheck::{check_against, CheckOptions, System, TypingEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grammar {
    /// unit, ×, +, →, T.
    Dcc,
    /// unit, ×, qualified +, →, W.
    Dccd,
    /// Both monads, T also at blame indices.
    Hybrid,
    /// The leak family's grammar: like `Dccd` with qualifier-free domains.
    Leak,
}

impl Grammar {
    fn strong_indices(self, lat: &Lattice) -> Vec<Index> {
        match self {
            Grammar::Dcc => lat.level_indices(),
            Grammar::Hybrid => lat.all_indices(),
            Grammar::Dccd | Grammar::Leak => Vec::new(),
        }
    }

    fn weak_indices(self, lat: &Lattice) -> Vec<Index> {
        match self {
            Grammar::Dcc => Vec::new(),
            _ => lat.level_indices(),
        }
    }

    fn qualifiers(self, lat: &Lattice) -> Vec<Index> {
        match self {
            Grammar::Dcc => Vec::new(),
            _ => lat.level_indices().into_iter().filter(|q| !lat.is_bottom(*q)).collect(),
        }
    }
}

struct TypeGen<'a> {
    lat: &'a Lattice,
    grammar: Grammar,
    strong: Vec<Index>,
    weak: Vec<Index>,
    quals: Vec<Index>,
}

impl<'a> TypeGen<'a> {
    fn new(lat: &'a Lattice, grammar: Grammar) -> Self {
        TypeGen {
            lat,
            grammar,
            strong: grammar.strong_indices(lat),
            weak: grammar.weak_indices(lat),
            quals: grammar.qualifiers(lat),
        }
    }

    fn unary(&self, s: &Type, out: &mut Vec<Type>) {
        for l in &self.strong {
            out.push(Type::strong(*l, s.clone()));
        }
        for l in &self.weak {
            out.push(Type::weak(*l, s.clone()));
        }
    }

    fn binary(&self, a: &Type, b: &Type, out: &mut Vec<Type>) {
        out.push(Type::prod(a.clone(), b.clone()));
        let sum = Type::sum(a.clone(), b.clone());
        for q in &self.quals {
            out.push(Type::open(sum.clone(), *q));
        }
        out.push(sum);
        if self.grammar != Grammar::Leak || !a.has_open() {
            out.push(Type::fun(a.clone(), b.clone()));
        }
    }

    /// Keeps normal forms, first occurrence wins.
    fn finish(&self, raw: Vec<Type>, seen: &mut std::collections::HashSet<Type>) -> Vec<Type> {
        raw.into_iter()
            .filter(|t| normalize_type(self.lat, t) == *t && seen.insert(t.clone()))
            .collect()
    }
}

/// Every normalized type of height at most `height` in `grammar`.
pub fn enum_types(lat: &Lattice, height: usize, grammar: Grammar) -> Vec<Type> {
    let g = TypeGen::new(lat, grammar);
    let mut seen = std::collections::HashSet::new();
    if height == 0 {
        return Vec::new();
    }
    let mut all = g.finish(vec![Type::Unit], &mut seen);
    for _ in 1..height {
        let prev = all.clone();
        let mut raw = Vec::new();
        for s in &prev {
            g.unary(s, &mut raw);
        }
        for a in &prev {
            for b in &prev {
                g.binary(a, b, &mut raw);
            }
        }
        let fresh = g.finish(raw, &mut seen);
        all.extend(fresh);
    }
    all
}

/// Every normalized type with at most `nodes` constructor nodes in
/// `grammar`, ordered by size.
pub fn enum_types_by_size(lat: &Lattice, nodes: usize, grammar: Grammar) -> Vec<Type> {
    let g = TypeGen::new(lat, grammar);
    let mut seen = std::collections::HashSet::new();
    let mut by_size: Vec<Vec<Type>> = vec![Vec::new()];
    for n in 1..=nodes {
        let mut raw = Vec::new();
        if n == 1 {
            raw.push(Type::Unit);
        } else {
            for s in &by_size[n - 1] {
                g.unary(s, &mut raw);
            }
            for na in 1..n - 1 {
                for a in &by_size[na] {
                    for b in &by_size[n - 1 - na] {
                        g.binary(a, b, &mut raw);
                    }
                }
            }
        }
        by_size.push(g.finish(raw, &mut seen));
    }
    by_size.concat()
}

/// Bounds for [`enum_typed_terms_with`].
#[derive(Debug, Clone)]
pub struct TermBounds {
    /// Largest AST size.
    pub size: usize,
    /// Intermediate types. Subterms of the target are always added.
    pub universe: Vec<Type>,
    pub strategy: Strategy,
}

impl TermBounds {
    pub fn new(lat: &Lattice, system: System, size: usize) -> TermBounds {
        TermBounds { size, universe: default_universe(lat, system), strategy: Strategy::default() }
    }
}

/// Erased types of height at most two in the system's grammar.
pub fn default_universe(lat: &Lattice, system: System) -> Vec<Type> {
    let grammar = match system {
        System::Dcc | System::Dcccd => Grammar::Dcc,
        System::Dccd => Grammar::Dccd,
        System::Dccdc => Grammar::Hybrid,
    };
    let mut out: Vec<Type> = Vec::new();
    for t in enum_types(lat, 2, grammar) {
        let t = erase(&t);
        let blamed = t.indices().iter().any(|i| !lat.is_pure_level(*i));
        if !blamed && !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// All closed terms of size at most `size` that check at `t`.
pub fn enum_typed_terms(lat: &Lattice, t: &Type, system: System, size: usize) -> Vec<Term> {
    enum_typed_terms_with(lat, t, system, &TermBounds::new(lat, system, size))
}

pub fn enum_typed_terms_with(lat: &Lattice, t: &Type, system: System, bounds: &TermBounds) -> Vec<Term> {
    let candidates = enum_candidates(lat, t, system, bounds);
    let env = TypingEnv::closed(lat, system);
    let opts = CheckOptions::default();
    let t = normalize_type(lat, t);
    bounds
        .strategy
        .filter(candidates, |e| check_against(lat, &env, e, &t, &opts).is_ok())
}

/// The unfiltered candidates, ordered by size.
pub fn enum_candidates(lat: &Lattice, t: &Type, system: System, bounds: &TermBounds) -> Vec<Term> {
    enum_candidates_capped(lat, t, system, bounds, usize::MAX).expect("uncapped")
}

/// Like [`enum_candidates`], but gives up with `None` once more than `cap`
/// terms (counting intermediate ones) have been built.
pub fn enum_candidates_capped(
    lat: &Lattice,
    t: &Type,
    system: System,
    bounds: &TermBounds,
    cap: usize,
) -> Option<Vec<Term>> {
    let target = erase(&normalize_type(lat, t));
    let mut universe = bounds.universe.clone();
    add_subterms(&target, &mut universe);
    let mut g = TermGen { lat, system, universe, memo: HashMap::new(), built: 0, cap };
    let mut out = Vec::new();
    for n in 1..=bounds.size {
        out.extend(g.gen(&[], &target, n).iter().cloned());
        if g.built > cap {
            return None;
        }
    }
    Some(out)
}

fn add_subterms(t: &Type, out: &mut Vec<Type>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    match t {
        Type::Unit | Type::Hole(_) => {}
        Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => {
            add_subterms(a, out);
            add_subterms(b, out);
        }
        Type::Strong(_, s) | Type::Weak(_, s) | Type::Open(s, _) => add_subterms(s, out),
    }
}

/// Binder name for context depth `k`.
pub fn binder_name(k: usize) -> String {
    const NAMES: [&str; 8] = ["x", "y", "z", "u", "v", "a", "b", "c"];
    NAMES.get(k).map(|s| s.to_string()).unwrap_or_else(|| format!("x{k}"))
}

type Key = (Vec<Type>, Type, usize);

struct TermGen<'a> {
    lat: &'a Lattice,
    system: System,
    universe: Vec<Type>,
    memo: HashMap<Key, Rc<Vec<Term>>>,
    built: usize,
    cap: usize,
}

impl TermGen<'_> {
    fn gen(&mut self, ctx: &[Type], t: &Type, n: usize) -> Rc<Vec<Term>> {
        let key = (ctx.to_vec(), t.clone(), n);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        if self.built > self.cap {
            return Rc::new(Vec::new());
        }
        let out = Rc::new(self.build(ctx, t, n));
        self.built = self.built.saturating_add(out.len());
        self.memo.insert(key, out.clone());
        out
    }

    fn extended(ctx: &[Type], s: &Type) -> Vec<Type> {
        let mut c = ctx.to_vec();
        c.push(s.clone());
        c
    }

    fn build(&mut self, ctx: &[Type], t: &Type, n: usize) -> Vec<Term> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        // introduction forms
        match t {
            Type::Unit if n == 1 => out.push(Term::Unit),
            Type::Prod(a, b) if n >= 3 => {
                for na in 1..n - 1 {
                    let xs = self.gen(ctx, a, na);
                    if xs.is_empty() {
                        continue;
                    }
                    let ys = self.gen(ctx, b, n - 1 - na);
                    for x in xs.iter() {
                        for y in ys.iter() {
                            out.push(Term::pair(x.clone(), y.clone()));
                        }
                    }
                }
            }
            Type::Sum(a, b) if n >= 2 => {
                for x in self.gen(ctx, a, n - 1).iter() {
                    out.push(Term::inj(Side::Left, x.clone()));
                }
                for x in self.gen(ctx, b, n - 1).iter() {
                    out.push(Term::inj(Side::Right, x.clone()));
                }
            }
            Type::Fun(a, b) if n >= 2 => {
                let x = binder_name(ctx.len());
                let inner = Self::extended(ctx, a);
                for body in self.gen(&inner, b, n - 1).iter() {
                    out.push(Term::abs(&x, (**a).clone(), body.clone()));
                }
            }
            Type::Strong(l, s) if n >= 2 && self.system.has_strong() => {
                for x in self.gen(ctx, s, n - 1).iter() {
                    out.push(Term::strong_ret(*l, x.clone()));
                }
            }
            Type::Weak(l, s) if n >= 2 && self.system.has_weak() => {
                for x in self.gen(ctx, s, n - 1).iter() {
                    out.push(Term::weak_ret(*l, x.clone()));
                }
            }
            _ => {}
        }
        // elimination forms
        if n == 1 {
            for (k, s) in ctx.iter().enumerate() {
                if s == t {
                    out.push(Term::var(&binder_name(k)));
                }
            }
            return out;
        }
        let universe = self.universe.clone();
        if n >= 3 {
            for s in &universe {
                let f_ty = Type::fun(s.clone(), t.clone());
                for nf in 1..n - 1 {
                    let fs = self.gen(ctx, &f_ty, nf);
                    if fs.is_empty() {
                        continue;
                    }
                    let args = self.gen(ctx, s, n - 1 - nf);
                    for f in fs.iter() {
                        for a in args.iter() {
                            out.push(Term::app(f.clone(), a.clone()));
                        }
                    }
                }
            }
        }
        for p in &universe {
            if let Type::Prod(a, b) = p {
                for (side, component) in [(Side::Left, a), (Side::Right, b)] {
                    if **component == *t {
                        for e in self.gen(ctx, p, n - 1).iter() {
                            out.push(Term::proj(side, e.clone()));
                        }
                    }
                }
            }
        }
        if n >= 4 {
            for st in &universe {
                let Type::Sum(a, b) = st else { continue };
                let x = binder_name(ctx.len());
                let (ca, cb) = (Self::extended(ctx, a), Self::extended(ctx, b));
                for ns in 1..n - 2 {
                    let scruts = self.gen(ctx, st, ns);
                    if scruts.is_empty() {
                        continue;
                    }
                    for nl in 1..n - 1 - ns {
                        let ls = self.gen(&ca, t, nl);
                        if ls.is_empty() {
                            continue;
                        }
                        let rs = self.gen(&cb, t, n - 1 - ns - nl);
                        for s in scruts.iter() {
                            for l in ls.iter() {
                                for r in rs.iter() {
                                    out.push(Term::case(s.clone(), &x, l.clone(), &x, r.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        if n >= 3 {
            for m in &universe {
                let s = match m {
                    Type::Strong(_, s) if self.system.has_strong() => s,
                    Type::Weak(_, s) if self.system.has_weak() => s,
                    _ => continue,
                };
                let x = binder_name(ctx.len());
                let inner = Self::extended(ctx, s);
                for nm in 1..n - 1 {
                    let ms = self.gen(ctx, m, nm);
                    if ms.is_empty() {
                        continue;
                    }
                    let bodies = self.gen(&inner, t, n - 1 - nm);
                    for e in ms.iter() {
                        for b in bodies.iter() {
                            out.push(Term::bind(&x, e.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        if self.system == System::Dccdc {
            if let Type::Strong(bl, inner) = t {
                if let Type::Weak(l, s) = &**inner {
                    if self.lat.is_pure_level(*l) && *bl == self.lat.beta(l.level) {
                        let src = Type::strong(*l, (**s).clone());
                        for e in self.gen(ctx, &src, n - 1).iter() {
                            out.push(Term::weaken(e.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}
