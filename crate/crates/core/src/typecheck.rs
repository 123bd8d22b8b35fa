//! Typecheckers for the four calculi. All four share one traversal; the
//! active [`System`] decides which constructs exist and which rules apply.
//!
//! Injections leave the other summand open, so checking runs a small
//! unifier over holes. Holes still open at the end default to `unit`.
//!
//! In the systems with open types (everything except plain DCC) the
//! qualifiers on lambda annotations are inferred: every sum node of an
//! annotation may receive an extra qualifier, and the first assignment
//! under which the term checks wins. The unqualified reading is always
//! tried first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Index, Lattice};
use crate::protect::{protected_tri, weakly_protected_tri, Tri};
use crate::syntax::{normalize_type, normalize_type_at, show_term, show_type, Name, Side, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Dcc,
    Dccd,
    Dccdc,
    Dcccd,
}

impl System {
    pub const ALL: [System; 4] = [System::Dcc, System::Dccd, System::Dccdc, System::Dcccd];

    pub fn name(self) -> &'static str {
        match self {
            System::Dcc => "dcc",
            System::Dccd => "dccd",
            System::Dccdc => "dccdc",
            System::Dcccd => "dcccd",
        }
    }

    /// Prefix of rule names in traces and errors.
    pub fn rule_prefix(self) -> &'static str {
        match self {
            System::Dcc => "T",
            System::Dccd => "T^D",
            System::Dccdc => "T^DC",
            System::Dcccd => "T^CD",
        }
    }

    pub fn has_strong(self) -> bool {
        self != System::Dccd
    }

    pub fn has_weak(self) -> bool {
        matches!(self, System::Dccd | System::Dccdc)
    }

    pub fn has_open(self) -> bool {
        self != System::Dcc
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dcc" => Ok(System::Dcc),
            "dccd" => Ok(System::Dccd),
            "dccdc" => Ok(System::Dccdc),
            "dcccd" => Ok(System::Dcccd),
            other => Err(format!("unknown system `{other}` (expected dcc|dccd|dccdc|dcccd)")),
        }
    }
}

/// `Γ` plus the three context registers. Only the registers used by the
/// active system are consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingEnv {
    pub gamma: Vec<(Name, Type)>,
    pub pi: Index,
    pub pibar: Index,
    pub sigma: Index,
    pub system: System,
}

impl TypingEnv {
    /// Defaults for closed terms: `Π = Π̄ = ⊥`, `Σ = ⊤`.
    pub fn closed(lat: &Lattice, system: System) -> TypingEnv {
        TypingEnv {
            gamma: Vec::new(),
            pi: lat.bottom_index(),
            pibar: lat.bottom_index(),
            sigma: lat.top_index(),
            system,
        }
    }

    pub fn with_var(mut self, x: &str, t: Type) -> TypingEnv {
        self.gamma.push((x.to_string(), t));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeError {
    #[error("{rule}: type mismatch, expected {expected}, found {found}")]
    TypeMismatch { rule: String, expected: String, found: String },
    #[error("unbound variable `{name}`")]
    UnboundVariable { name: String },
    #[error("{rule} side condition failed: {condition}")]
    SideConditionFailed { rule: String, condition: String },
    #[error("{construct} is not part of {system}")]
    ConstructNotInSystem { construct: String, system: String },
    #[error("no bind rule applies ({first}; {second})")]
    BindRulesFailed { first: Box<TypeError>, second: Box<TypeError> },
}

impl TypeError {
    /// Name of the rule that failed, if the error is tied to one.
    pub fn rule(&self) -> Option<&str> {
        match self {
            TypeError::TypeMismatch { rule, .. } | TypeError::SideConditionFailed { rule, .. } => Some(rule),
            _ => None,
        }
    }

    /// Whether some side condition (rather than a shape mismatch) failed.
    pub fn is_side_condition(&self) -> bool {
        match self {
            TypeError::SideConditionFailed { .. } => true,
            TypeError::BindRulesFailed { first, second } => first.is_side_condition() || second.is_side_condition(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    pub rule: String,
    pub judgment: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub result: Result<Type, TypeError>,
    pub trace: Vec<TraceStep>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.result.is_ok()
    }

    pub fn ty(&self) -> Option<&Type> {
        self.result.as_ref().ok()
    }

    pub fn error(&self) -> Option<&TypeError> {
        self.result.as_ref().err()
    }

    /// Rules that fired, in derivation order.
    pub fn rules(&self) -> impl Iterator<Item = &str> {
        self.trace.iter().map(|s| s.rule.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub trace: bool,
    /// Accept internal `e @ l` nodes, typed as `t^l`.
    pub allow_taint: bool,
    pub infer_qualifiers: bool,
    /// Cap on qualifier assignments tried per term.
    pub max_assignments: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { trace: false, allow_taint: false, infer_qualifiers: true, max_assignments: 4096 }
    }
}

pub fn check(lat: &Lattice, env: &TypingEnv, e: &Term) -> CheckReport {
    check_with(lat, env, e, &CheckOptions::default())
}

pub fn check_with(lat: &Lattice, env: &TypingEnv, e: &Term, opts: &CheckOptions) -> CheckReport {
    run(lat, env, e, None, opts)
}

/// Checks `e` and requires its type to be `expected` (up to normalization).
pub fn check_against(lat: &Lattice, env: &TypingEnv, e: &Term, expected: &Type, opts: &CheckOptions) -> CheckReport {
    run(lat, env, e, Some(expected), opts)
}

/// Closed term, default options.
pub fn check_closed(lat: &Lattice, system: System, e: &Term) -> Result<Type, TypeError> {
    check(lat, &TypingEnv::closed(lat, system), e).result
}

fn run(lat: &Lattice, env: &TypingEnv, e: &Term, expected: Option<&Type>, opts: &CheckOptions) -> CheckReport {
    let annots = annotations(e);
    let infer = opts.infer_qualifiers && env.system.has_open() && !annots.is_empty();
    if !infer {
        return attempt(lat, env, e, expected, opts, &annots);
    }
    let candidates: Vec<Vec<Type>> = annots.iter().map(|t| qualifier_candidates(lat, t)).collect();
    let mut choice = vec![0usize; candidates.len()];
    let mut first: Option<CheckReport> = None;
    for _ in 0..opts.max_assignments.max(1) {
        let picked: Vec<Type> = choice.iter().zip(&candidates).map(|(&i, c)| c[i].clone()).collect();
        let report = attempt(lat, env, e, expected, opts, &picked);
        if report.is_ok() {
            return report;
        }
        if first.is_none() {
            first = Some(report);
        }
        if !advance(&mut choice, &candidates) {
            break;
        }
    }
    first.expect("at least one assignment is tried")
}

fn advance(choice: &mut [usize], candidates: &[Vec<Type>]) -> bool {
    for i in (0..choice.len()).rev() {
        if choice[i] + 1 < candidates[i].len() {
            choice[i] += 1;
            return true;
        }
        choice[i] = 0;
    }
    false
}

fn annotations(e: &Term) -> Vec<Type> {
    let mut out = Vec::new();
    collect_annotations(e, &mut out);
    out
}

fn collect_annotations(e: &Term, out: &mut Vec<Type>) {
    match e {
        Term::Unit | Term::Var(_) => {}
        Term::Abs(_, t, b) => {
            out.push(t.clone());
            collect_annotations(b, out);
        }
        Term::Proj(_, a)
        | Term::Inj(_, a)
        | Term::StrongRet(_, a)
        | Term::WeakRet(_, a)
        | Term::Weaken(a)
        | Term::Taint(a, _) => collect_annotations(a, out),
        Term::App(a, b) | Term::Pair(a, b) | Term::Bind(_, a, b) => {
            collect_annotations(a, out);
            collect_annotations(b, out);
        }
        Term::Case(s, _, l, _, r) => {
            collect_annotations(s, out);
            collect_annotations(l, out);
            collect_annotations(r, out);
        }
    }
}

/// Every way of qualifying the sum nodes of `t` with a level, normalized
/// and deduplicated; `t` itself comes first.
pub fn qualifier_candidates(lat: &Lattice, t: &Type) -> Vec<Type> {
    let sums = count_sums(t);
    let levels = lat.level_indices();
    let mut out: Vec<Type> = Vec::new();
    let base = normalize_type(lat, t);
    out.push(base);
    let total = levels.len().checked_pow(sums as u32).unwrap_or(usize::MAX).min(1 << 16);
    for code in 0..total {
        let mut digits = Vec::with_capacity(sums);
        let mut c = code;
        for _ in 0..sums {
            digits.push(levels[c % levels.len()]);
            c /= levels.len();
        }
        let mut it = digits.into_iter();
        let q = qualify_sums(t, &mut it);
        let n = normalize_type(lat, &q);
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

fn count_sums(t: &Type) -> usize {
    match t {
        Type::Unit | Type::Hole(_) => 0,
        Type::Sum(a, b) => 1 + count_sums(a) + count_sums(b),
        Type::Prod(a, b) | Type::Fun(a, b) => count_sums(a) + count_sums(b),
        Type::Strong(_, s) | Type::Weak(_, s) | Type::Open(s, _) => count_sums(s),
    }
}

fn qualify_sums(t: &Type, qs: &mut impl Iterator<Item = Index>) -> Type {
    match t {
        Type::Unit | Type::Hole(_) => t.clone(),
        Type::Sum(a, b) => {
            let q = qs.next().expect("one level per sum");
            let a = qualify_sums(a, qs);
            let b = qualify_sums(b, qs);
            Type::open(Type::sum(a, b), q)
        }
        Type::Prod(a, b) => {
            let a = qualify_sums(a, qs);
            Type::prod(a, qualify_sums(b, qs))
        }
        Type::Fun(a, b) => {
            let a = qualify_sums(a, qs);
            Type::fun(a, qualify_sums(b, qs))
        }
        Type::Strong(l, s) => Type::strong(*l, qualify_sums(s, qs)),
        Type::Weak(l, s) => Type::weak(*l, qualify_sums(s, qs)),
        Type::Open(s, l) => Type::open(qualify_sums(s, qs), *l),
    }
}

fn attempt(
    lat: &Lattice,
    env: &TypingEnv,
    e: &Term,
    expected: Option<&Type>,
    opts: &CheckOptions,
    annots: &[Type],
) -> CheckReport {
    let mut ck = Checker {
        lat,
        system: env.system,
        opts,
        holes: Vec::new(),
        deferred: Vec::new(),
        trace: Vec::new(),
        notes: Vec::new(),
        annots,
        next_annot: 0,
        depth: 0,
    };
    let mut ctx = Ctx {
        gamma: env.gamma.iter().map(|(x, t)| (x.clone(), normalize_type(lat, t))).collect(),
        pi: env.pi,
        pibar: env.pibar,
        sigma: env.sigma,
    };
    let result = ck.infer(&mut ctx, e).and_then(|t| {
        if let Some(want) = expected {
            let want = normalize_type(lat, want);
            ck.unify(&t, &want, lat.bottom_index()).map_err(|_| TypeError::TypeMismatch {
                rule: "expected type".into(),
                expected: show_type(lat, &want),
                found: show_type(lat, &ck.resolve(&t)),
            })?;
        }
        ck.discharge()?;
        Ok(ck.finish(&t))
    });
    let trace = if opts.trace {
        ck.trace
            .iter()
            .map(|(depth, rule, term, t)| TraceStep {
                depth: *depth,
                rule: rule.clone(),
                judgment: format!("{term} : {}", show_type(lat, &ck.finish(t))),
            })
            .collect()
    } else {
        Vec::new()
    };
    CheckReport { result, trace, notes: ck.notes }
}

struct Ctx {
    gamma: Vec<(Name, Type)>,
    pi: Index,
    pibar: Index,
    sigma: Index,
}

#[derive(Clone)]
struct Deferred {
    rule: String,
    l: Index,
    ctx_level: Index,
    t: Type,
    weak: bool,
    shown_ctx: &'static str,
}

struct Checker<'a> {
    lat: &'a Lattice,
    system: System,
    opts: &'a CheckOptions,
    holes: Vec<Option<Type>>,
    deferred: Vec<Deferred>,
    trace: Vec<(usize, String, String, Type)>,
    notes: Vec<String>,
    annots: &'a [Type],
    next_annot: usize,
    depth: usize,
}

struct Snapshot {
    holes: Vec<Option<Type>>,
    deferred: usize,
    trace: usize,
    notes: usize,
    next_annot: usize,
}

type TResult<T> = Result<T, TypeError>;

impl<'a> Checker<'a> {
    fn rule(&self, base: &str) -> String {
        format!("{}-{base}", self.system.rule_prefix())
    }

    fn show(&self, t: &Type) -> String {
        show_type(self.lat, &self.resolve(t))
    }

    fn ix(&self, i: Index) -> String {
        self.lat.show_index(i)
    }

    fn fresh(&mut self) -> Type {
        self.holes.push(None);
        Type::Hole(self.holes.len() as u32 - 1)
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            holes: self.holes.clone(),
            deferred: self.deferred.len(),
            trace: self.trace.len(),
            notes: self.notes.len(),
            next_annot: self.next_annot,
        }
    }

    fn restore(&mut self, s: Snapshot) {
        self.holes = s.holes;
        self.deferred.truncate(s.deferred);
        self.trace.truncate(s.trace);
        self.notes.truncate(s.notes);
        self.next_annot = s.next_annot;
    }

    fn zonk(&self, t: &Type, default: bool) -> Type {
        match t {
            Type::Hole(n) => match &self.holes[*n as usize] {
                Some(b) => self.zonk(b, default),
                None if default => Type::Unit,
                None => t.clone(),
            },
            Type::Unit => Type::Unit,
            Type::Prod(a, b) => Type::prod(self.zonk(a, default), self.zonk(b, default)),
            Type::Sum(a, b) => Type::sum(self.zonk(a, default), self.zonk(b, default)),
            Type::Fun(a, b) => Type::fun(self.zonk(a, default), self.zonk(b, default)),
            Type::Strong(l, s) => Type::strong(*l, self.zonk(s, default)),
            Type::Weak(l, s) => Type::weak(*l, self.zonk(s, default)),
            Type::Open(s, l) => Type::open(self.zonk(s, default), *l),
        }
    }

    /// Zonked and normalized, holes kept.
    fn resolve(&self, t: &Type) -> Type {
        normalize_type(self.lat, &self.zonk(t, false))
    }

    fn resolve_at(&self, t: &Type, amb: Index) -> Type {
        normalize_type_at(self.lat, &self.zonk(t, false), amb)
    }

    /// Zonked with open holes defaulted to `unit`, normalized.
    fn finish(&self, t: &Type) -> Type {
        normalize_type(self.lat, &self.zonk(t, true))
    }

    fn occurs(&self, n: u32, t: &Type) -> bool {
        match t {
            Type::Hole(m) => *m == n,
            Type::Unit => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Fun(a, b) => self.occurs(n, a) || self.occurs(n, b),
            Type::Strong(_, s) | Type::Weak(_, s) | Type::Open(s, _) => self.occurs(n, s),
        }
    }

    fn bind_hole(&mut self, n: u32, t: Type) -> Result<(), ()> {
        if self.occurs(n, &t) {
            return Err(());
        }
        self.holes[n as usize] = Some(t);
        Ok(())
    }

    /// Unifies two types that occur under ambient protection `amb`.
    fn unify(&mut self, a: &Type, b: &Type, amb: Index) -> Result<(), ()> {
        let a = self.resolve_at(a, amb);
        let b = self.resolve_at(b, amb);
        if a == b {
            return Ok(());
        }
        match (&a, &b) {
            (Type::Hole(n), t) | (t, Type::Hole(n)) => self.bind_hole(*n, t.clone()),
            (Type::Open(h, q), Type::Open(t, q2)) if matches!(**h, Type::Hole(_)) && q == q2 => {
                self.unify(h, t, self.lat.ijoin(amb, *q))
            }
            (Type::Open(t, q2), Type::Open(h, q)) if matches!(**h, Type::Hole(_)) && q == q2 => {
                self.unify(t, h, self.lat.ijoin(amb, *q))
            }
            (Type::Open(h, _), t) | (t, Type::Open(h, _)) if matches!(**h, Type::Hole(_)) => {
                let Type::Hole(n) = **h else { unreachable!() };
                let inner = match t {
                    Type::Open(s, _) => (**s).clone(),
                    other => other.clone(),
                };
                self.bind_hole(n, inner)?;
                self.unify(&a, &b, amb)
            }
            (Type::Prod(a1, a2), Type::Prod(b1, b2)) | (Type::Sum(a1, a2), Type::Sum(b1, b2)) => {
                self.unify(a1, b1, amb)?;
                self.unify(a2, b2, amb)
            }
            (Type::Fun(a1, a2), Type::Fun(b1, b2)) => {
                self.unify(a1, b1, self.lat.bottom_index())?;
                self.unify(a2, b2, amb)
            }
            (Type::Strong(l, s), Type::Strong(m, t)) | (Type::Weak(l, s), Type::Weak(m, t)) if l == m => {
                self.unify(s, t, self.lat.ijoin(amb, *l))
            }
            (Type::Open(s, q), Type::Open(t, q2)) if q == q2 => self.unify(s, t, self.lat.ijoin(amb, *q)),
            _ => Err(()),
        }
    }

    fn unify_or(&mut self, a: &Type, b: &Type, rule: &str) -> TResult<()> {
        self.unify(a, b, self.lat.bottom_index()).map_err(|_| TypeError::TypeMismatch {
            rule: rule.to_string(),
            expected: self.show(b),
            found: self.show(a),
        })
    }

    fn not_in_system(&self, construct: &str) -> TypeError {
        TypeError::ConstructNotInSystem { construct: construct.to_string(), system: self.system.name().to_string() }
    }

    fn check_annotation(&self, t: &Type) -> TResult<()> {
        if !self.system.has_open() && t.has_open() {
            return Err(self.not_in_system("open type annotation"));
        }
        if !self.system.has_weak() && t.has_weak() {
            return Err(self.not_in_system("weak monad type W[..]"));
        }
        if !self.system.has_strong() && t.has_strong() {
            return Err(self.not_in_system("strong monad type T[..]"));
        }
        Ok(())
    }

    fn record(&mut self, rule: String, e: &Term, t: &Type) {
        if self.opts.trace {
            self.trace.push((self.depth, rule, show_term(self.lat, e), t.clone()));
        }
    }

    /// Side condition `l ⊑ ctx` or `l ⪯ t` (resp. `l ≤ t`). Deferred when
    /// holes leave the answer open.
    fn side(&mut self, rule: String, l: Index, ctx_level: Index, t: &Type, weak: bool, shown_ctx: &'static str) -> TResult<()> {
        let d = Deferred { rule, l, ctx_level, t: t.clone(), weak, shown_ctx };
        match self.eval_side(&d, false) {
            Tri::True => Ok(()),
            Tri::False => Err(self.side_error(&d)),
            Tri::Unknown => {
                self.deferred.push(d);
                Ok(())
            }
        }
    }

    fn eval_side(&self, d: &Deferred, default: bool) -> Tri {
        let t = normalize_type(self.lat, &self.zonk(&d.t, default));
        let pred = if d.weak { weakly_protected_tri(self.lat, d.l, &t) } else { protected_tri(self.lat, d.l, &t) };
        Tri::from_bool(self.lat.ileq(d.l, d.ctx_level)).or(|| pred)
    }

    fn side_error(&self, d: &Deferred) -> TypeError {
        let rel = if d.weak { "≤" } else { "⪯" };
        let monad = if d.shown_ctx == "Π̄" { "W" } else { "T" };
        TypeError::SideConditionFailed {
            rule: d.rule.clone(),
            condition: format!(
                "{} {rel} {monad}[{}]({}) with {} = {}",
                self.ix(d.l),
                self.ix(d.ctx_level),
                self.show(&d.t),
                d.shown_ctx,
                self.ix(d.ctx_level)
            ),
        }
    }

    fn discharge(&mut self) -> TResult<()> {
        for d in &self.deferred {
            if self.eval_side(d, true) != Tri::True {
                return Err(self.side_error(d));
            }
        }
        Ok(())
    }

    fn infer(&mut self, ctx: &mut Ctx, e: &Term) -> TResult<Type> {
        self.depth += 1;
        let r = self.infer_inner(ctx, e);
        self.depth -= 1;
        r
    }

    fn infer_inner(&mut self, ctx: &mut Ctx, e: &Term) -> TResult<Type> {
        let lat = self.lat;
        match e {
            Term::Unit => {
                self.record(self.rule("unit"), e, &Type::Unit);
                Ok(Type::Unit)
            }
            Term::Var(x) => {
                let t = ctx
                    .gamma
                    .iter()
                    .rev()
                    .find(|(y, _)| y == x)
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| TypeError::UnboundVariable { name: x.clone() })?;
                self.record(self.rule("var"), e, &t);
                Ok(t)
            }
            Term::Abs(x, ann, body) => {
                self.check_annotation(ann)?;
                let ann = match self.annots.get(self.next_annot) {
                    Some(t) => t.clone(),
                    None => normalize_type(lat, ann),
                };
                self.next_annot += 1;
                ctx.gamma.push((x.clone(), ann.clone()));
                let r = self.infer(ctx, body);
                ctx.gamma.pop();
                let t = self.resolve(&Type::fun(ann, r?));
                self.record(self.rule("abs"), e, &t);
                Ok(t)
            }
            Term::App(f, a) => {
                let rule = self.rule("app");
                let tf = self.infer(ctx, f)?;
                let tf = match self.resolve(&tf) {
                    Type::Hole(n) => {
                        let (s, t) = (self.fresh(), self.fresh());
                        let fun = Type::fun(s, t);
                        let _ = self.bind_hole(n, fun.clone());
                        fun
                    }
                    other => other,
                };
                let Type::Fun(dom, cod) = tf else {
                    return Err(TypeError::TypeMismatch { rule, expected: "a function type".into(), found: self.show(&tf) });
                };
                let ta = self.infer(ctx, a)?;
                self.unify_or(&ta, &dom, &rule)?;
                let t = self.resolve(&cod);
                self.record(rule, e, &t);
                Ok(t)
            }
            Term::Pair(a, b) => {
                let ta = self.infer(ctx, a)?;
                let tb = self.infer(ctx, b)?;
                let t = self.resolve(&Type::prod(ta, tb));
                self.record(self.rule("pair"), e, &t);
                Ok(t)
            }
            Term::Proj(side, a) => {
                let rule = self.rule("proj");
                let ta = self.infer(ctx, a)?;
                let ta = match self.resolve(&ta) {
                    Type::Hole(n) => {
                        let p = Type::prod(self.fresh(), self.fresh());
                        let _ = self.bind_hole(n, p.clone());
                        p
                    }
                    other => other,
                };
                let Type::Prod(l, r) = ta else {
                    return Err(TypeError::TypeMismatch { rule, expected: "a product type".into(), found: self.show(&ta) });
                };
                let t = match side {
                    Side::Left => *l,
                    Side::Right => *r,
                };
                self.record(rule, e, &t);
                Ok(t)
            }
            Term::Inj(side, a) => {
                let ta = self.infer(ctx, a)?;
                let other = self.fresh();
                let t = match side {
                    Side::Left => Type::sum(ta, other),
                    Side::Right => Type::sum(other, ta),
                };
                let t = self.resolve(&t);
                self.record(self.rule("inj"), e, &t);
                Ok(t)
            }
            Term::Case(s, x, l, y, r) => self.infer_case(ctx, e, s, x, l, y, r),
            Term::StrongRet(l, a) => {
                if !self.system.has_strong() {
                    return Err(self.not_in_system("eta"));
                }
                let saved = (ctx.pi, ctx.pibar);
                ctx.pi = lat.ijoin(ctx.pi, *l);
                if self.system == System::Dccdc {
                    ctx.pibar = lat.ijoin(ctx.pibar, *l);
                }
                let r = self.infer(ctx, a);
                (ctx.pi, ctx.pibar) = saved;
                let t = self.resolve(&Type::strong(*l, r?));
                let rule = if self.system == System::Dccdc { self.rule("ret-1") } else { self.rule("ret") };
                self.record(rule, e, &t);
                Ok(t)
            }
            Term::WeakRet(l, a) => {
                if !self.system.has_weak() {
                    return Err(self.not_in_system("weta"));
                }
                let saved = ctx.pibar;
                ctx.pibar = lat.ijoin(ctx.pibar, *l);
                let r = self.infer(ctx, a);
                ctx.pibar = saved;
                let t = self.resolve(&Type::weak(*l, r?));
                let rule = if self.system == System::Dccdc { self.rule("ret-2") } else { self.rule("ret") };
                self.record(rule, e, &t);
                Ok(t)
            }
            Term::Bind(x, m, body) => self.infer_bind(ctx, e, x, m, body),
            Term::Weaken(a) => {
                if self.system != System::Dccdc {
                    return Err(self.not_in_system("weaken"));
                }
                let rule = self.rule("weaken");
                let ta = self.infer(ctx, a)?;
                let ta = self.resolve(&ta);
                match ta {
                    Type::Strong(l, s) if lat.is_pure_level(l) => {
                        let t = self.resolve(&Type::strong(lat.beta(l.level), Type::Weak(l, s)));
                        self.record(rule, e, &t);
                        Ok(t)
                    }
                    Type::Strong(l, _) => Err(TypeError::SideConditionFailed {
                        rule,
                        condition: format!("{} must be a level, not a blame", self.ix(l)),
                    }),
                    other => Err(TypeError::TypeMismatch {
                        rule,
                        expected: "a strong monad type T[l](s)".into(),
                        found: self.show(&other),
                    }),
                }
            }
            Term::Taint(a, l) => {
                if !self.opts.allow_taint {
                    return Err(self.not_in_system("taint annotation"));
                }
                let ta = self.infer(ctx, a)?;
                let t = self.resolve(&Type::open(ta, *l));
                self.record("taint".to_string(), e, &t);
                Ok(t)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn infer_case(&mut self, ctx: &mut Ctx, e: &Term, s: &Term, x: &Name, l: &Term, y: &Name, r: &Term) -> TResult<Type> {
        let lat = self.lat;
        let rule = self.rule("case");
        let ts = self.infer(ctx, s)?;
        let ts = match self.resolve(&ts) {
            Type::Hole(n) => {
                let sum = Type::sum(self.fresh(), self.fresh());
                let _ = self.bind_hole(n, sum.clone());
                sum
            }
            Type::Open(h, q) if matches!(*h, Type::Hole(_)) => {
                let Type::Hole(n) = *h else { unreachable!() };
                let sum = Type::sum(self.fresh(), self.fresh());
                let _ = self.bind_hole(n, sum.clone());
                Type::open(sum, q)
            }
            other => other,
        };
        let (s1, s2, q) = match ts {
            Type::Sum(a, b) => (*a, *b, lat.bottom_index()),
            Type::Open(inner, q) => match *inner {
                Type::Sum(a, b) => (*a, *b, q),
                other => {
                    return Err(TypeError::TypeMismatch { rule, expected: "a sum type".into(), found: self.show(&other) })
                }
            },
            other => return Err(TypeError::TypeMismatch { rule, expected: "a sum type".into(), found: self.show(&other) }),
        };
        if self.system == System::Dcccd {
            if !lat.is_bottom(q) {
                if lat.ileq(ctx.sigma, q) {
                    return Err(TypeError::SideConditionFailed {
                        rule,
                        condition: format!("Σ ⋢ {} with Σ = {}", self.ix(q), self.ix(ctx.sigma)),
                    });
                }
            } else if lat.is_bottom(ctx.sigma) {
                self.notes.push(format!(
                    "{rule}: scrutinee qualifier is ⊥, so the guard admits this case although Σ = {} ⊑ ⊥",
                    self.ix(ctx.sigma)
                ));
            }
        }
        let tx = self.resolve(&Type::open(s1, q));
        let ty = self.resolve(&Type::open(s2, q));
        ctx.gamma.push((x.clone(), tx));
        let t1 = self.infer(ctx, l);
        ctx.gamma.pop();
        let t1 = t1?;
        ctx.gamma.push((y.clone(), ty));
        let t2 = self.infer(ctx, r);
        ctx.gamma.pop();
        let t2 = t2?;
        self.unify_or(&t2, &t1, &rule)?;
        let t = self.resolve(&t1);
        self.record(rule, e, &t);
        Ok(t)
    }

    fn infer_bind(&mut self, ctx: &mut Ctx, e: &Term, x: &Name, m: &Term, body: &Term) -> TResult<Type> {
        let tm = self.infer(ctx, m)?;
        let tm = self.resolve(&tm);
        match (self.system, tm) {
            (System::Dcc, Type::Strong(l, s)) => self.bind_strong(ctx, e, x, l, *s, body, self.rule("bind")),
            (System::Dccd, Type::Weak(l, s)) => self.bind_weak(ctx, e, x, l, *s, body, self.rule("bind")),
            (System::Dccdc, Type::Strong(l, s)) => self.bind_strong(ctx, e, x, l, *s, body, self.rule("bind-1")),
            (System::Dccdc, Type::Weak(l, s)) => self.bind_weak(ctx, e, x, l, *s, body, self.rule("bind-2")),
            (System::Dcccd, Type::Strong(l, s)) => {
                let snap = self.snapshot();
                match self.bind_strong(ctx, e, x, l, (*s).clone(), body, self.rule("bind-1")) {
                    Ok(t) => Ok(t),
                    Err(first) => {
                        self.restore(snap);
                        self.bind_open(ctx, e, x, l, *s, body).map_err(|second| TypeError::BindRulesFailed {
                            first: Box::new(first),
                            second: Box::new(second),
                        })
                    }
                }
            }
            (sys, other) => {
                let expected = match sys {
                    System::Dccd => "a weak monad type W[l](s)",
                    System::Dccdc => "a monad type T[l](s) or W[l](s)",
                    _ => "a strong monad type T[l](s)",
                };
                Err(TypeError::TypeMismatch { rule: self.rule("bind"), expected: expected.into(), found: self.show(&other) })
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn bind_strong(&mut self, ctx: &mut Ctx, e: &Term, x: &Name, l: Index, s: Type, body: &Term, rule: String) -> TResult<Type> {
        ctx.gamma.push((x.clone(), s));
        let t = self.infer(ctx, body);
        ctx.gamma.pop();
        let t = self.resolve(&t?);
        self.side(rule.clone(), l, ctx.pi, &t, false, "Π")?;
        self.record(rule, e, &t);
        Ok(t)
    }

    #[allow(clippy::too_many_arguments)]
    fn bind_weak(&mut self, ctx: &mut Ctx, e: &Term, x: &Name, l: Index, s: Type, body: &Term, rule: String) -> TResult<Type> {
        let xs = self.resolve(&Type::open(s, l));
        ctx.gamma.push((x.clone(), xs));
        let t = self.infer(ctx, body);
        ctx.gamma.pop();
        let t = self.resolve(&t?);
        self.side(rule.clone(), l, ctx.pibar, &t, true, "Π̄")?;
        self.record(rule, e, &t);
        Ok(t)
    }

    fn bind_open(&mut self, ctx: &mut Ctx, e: &Term, x: &Name, l: Index, s: Type, body: &Term) -> TResult<Type> {
        let rule = self.rule("bind-2");
        let xs = self.resolve(&Type::open(s, l));
        let saved = ctx.sigma;
        ctx.sigma = self.lat.imeet(ctx.sigma, l);
        ctx.gamma.push((x.clone(), xs));
        let t = self.infer(ctx, body);
        ctx.gamma.pop();
        ctx.sigma = saved;
        let t = self.resolve(&t?);
        self.side(rule.clone(), l, ctx.pi, &t, true, "Π")?;
        self.record(rule, e, &t);
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};

    fn ok(lat: &Lattice, sys: System, src: &str) -> String {
        let e = parse_term(src, lat).unwrap();
        match check_closed(lat, sys, &e) {
            Ok(t) => show_type(lat, &t),
            Err(err) => panic!("{src} rejected in {sys}: {err}"),
        }
    }

    fn err(lat: &Lattice, sys: System, src: &str) -> TypeError {
        let e = parse_term(src, lat).unwrap();
        match check_closed(lat, sys, &e) {
            Ok(t) => panic!("{src} accepted in {sys} at {}", show_type(lat, &t)),
            Err(err) => err,
        }
    }

    #[test]
    fn simple_terms() {
        let lat = Lattice::two();
        assert_eq!(ok(&lat, System::Dcc, "()"), "unit");
        assert_eq!(ok(&lat, System::Dcc, "fun x:unit. x"), "unit -> unit");
        assert_eq!(ok(&lat, System::Dcc, "inj1 ()"), "unit + unit");
        assert_eq!(ok(&lat, System::Dcc, "case inj1 () of a. inj2 a | b. inj1 b"), "unit + unit");
        assert_eq!(ok(&lat, System::Dcc, "(fun p:unit * (unit + unit). proj2 p) ((), inj2 ())"), "unit + unit");
        assert!(matches!(err(&lat, System::Dcc, "x"), TypeError::UnboundVariable { .. }));
        assert!(matches!(err(&lat, System::Dcc, "proj1 ()"), TypeError::TypeMismatch { .. }));
    }

    #[test]
    fn f_and_g() {
        let lat = Lattice::two();
        let f = "fun x:W[H](unit+unit). bind y = x in y";
        let e = err(&lat, System::Dccd, f);
        assert_eq!(e.rule(), Some("T^D-bind"));
        assert!(e.to_string().contains("side condition failed"));
        let g = "fun x:W[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()";
        assert_eq!(ok(&lat, System::Dccd, g), "W[H](unit + unit) -> unit + unit");
        let g_strong = "fun x:T[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()";
        assert_eq!(err(&lat, System::Dcc, g_strong).rule(), Some("T-bind"));
        let f_strong = "fun x:T[H](unit+unit). bind y = x in y";
        assert_eq!(err(&lat, System::Dcc, f_strong).rule(), Some("T-bind"));
    }

    #[test]
    fn primed_functions_in_dcc() {
        let lat = Lattice::two();
        let g1 = "fun x:T[H](unit+unit). eta[H] ((fun x:T[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()) x)";
        // under eta[H] the context already protects at H
        assert_eq!(ok(&lat, System::Dcc, g1), "T[H](unit + unit) -> T[H](unit + unit)");
        let g2 = "fun x:T[H](unit+unit). bind y = x in eta[H] (case y of z. inj1 () | z. inj2 ())";
        assert_eq!(ok(&lat, System::Dcc, g2), "T[H](unit + unit) -> T[H](unit + unit)");
    }

    #[test]
    fn open_context_bind() {
        let lat = Lattice::two();
        let src = "fun x:T[H](unit+unit). bind y = x in inj1 ()";
        assert_eq!(ok(&lat, System::Dcccd, src), "T[H](unit + unit) -> unit + unit");
        let e = parse_term(src, &lat).unwrap();
        let opts = CheckOptions { trace: true, ..CheckOptions::default() };
        let r = check_with(&lat, &TypingEnv::closed(&lat, System::Dcccd), &e, &opts);
        assert!(r.rules().any(|x| x == "T^CD-bind-2"));
        let leak = "fun x:T[H](unit+unit). bind y = x in case y of a. inj1 () | b. inj2 ()";
        assert!(matches!(err(&lat, System::Dcccd, leak), TypeError::BindRulesFailed { .. }));
    }

    #[test]
    fn hybrid_rules() {
        let lat = Lattice::two();
        assert_eq!(
            ok(&lat, System::Dccdc, "fun x:W[H](unit). bind y = x in eta[H] y"),
            "W[H](unit) -> T[H](unit)"
        );
        assert_eq!(
            ok(&lat, System::Dccdc, "bind x = weaken (eta[H] inj1 ()) in eta[!H] x"),
            "T[!H](W[H](unit + unit))"
        );
        assert!(matches!(err(&lat, System::Dccd, "weaken (eta[H] ())"), TypeError::ConstructNotInSystem { .. }));
        assert!(matches!(err(&lat, System::Dcc, "weta[H] ()"), TypeError::ConstructNotInSystem { .. }));
    }

    #[test]
    fn qualifier_inference_for_annotations() {
        let lat = Lattice::two();
        // the argument of the inner function is only typable as (unit+unit)^H
        let src = "fun x:W[H](unit+unit). bind y = x in weta[H] ((fun z:unit+unit. z) y)";
        assert_eq!(ok(&lat, System::Dccd, src), "W[H](unit + unit) -> W[H](unit + unit)");
        let opts = CheckOptions { infer_qualifiers: false, ..CheckOptions::default() };
        let e = parse_term(src, &lat).unwrap();
        assert!(!check_with(&lat, &TypingEnv::closed(&lat, System::Dccd), &e, &opts).is_ok());
    }

    #[test]
    fn check_against_fixes_holes() {
        let lat = Lattice::two();
        let e = parse_term("inj1 ()", &lat).unwrap();
        let want = parse_type("unit + (unit + unit)", &lat).unwrap();
        let r = check_against(&lat, &TypingEnv::closed(&lat, System::Dcc), &e, &want, &CheckOptions::default());
        assert_eq!(r.ty(), Some(&normalize_type(&lat, &want)));
        let bad = parse_type("unit * unit", &lat).unwrap();
        let r = check_against(&lat, &TypingEnv::closed(&lat, System::Dcc), &e, &bad, &CheckOptions::default());
        assert!(!r.is_ok());
    }

    #[test]
    fn taint_needs_option() {
        let lat = Lattice::two();
        let e = parse_term("inj1 () @ H", &lat).unwrap();
        let env = TypingEnv::closed(&lat, System::Dccd);
        assert!(!check(&lat, &env, &e).is_ok());
        let opts = CheckOptions { allow_taint: true, ..CheckOptions::default() };
        let t = check_with(&lat, &env, &e, &opts).result.unwrap();
        assert_eq!(show_type(&lat, &t), "(unit + unit)^H");
    }
}
