//! Exhaustive, bounded checks of the soundness and translation theorems.
//!
//! Each theorem's quantifiers range over enumerated types, closed terms and
//! values; the semantic relations come from [`crate::oracles`]. Reports
//! list every failing instance (up to [`MAX_WITNESSES`]) with its term and
//! levels.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::corpus;
use crate::enumerate::{enum_candidates_capped, enum_types, Grammar, TermBounds};
use crate::eval::eval_deep;
use crate::lattice::{BlameMode, Index, Lattice};
use crate::oracles::{enum_values_with, indistinguishable, safe, OracleConfig};
use crate::par::Strategy;
use crate::syntax::{normalize_type, normalize_type_at, parse_term, show_term, show_type, Side, Term, Type};
use crate::transform::{blame_of, has_negative_protection, volpano_translate, weaken_translate};
use crate::typecheck::{check_against, check_with, CheckOptions, System, TypingEnv};

pub const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
}

impl Theorem {
    pub const ALL: [Theorem; 8] =
        [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4, Theorem::T5, Theorem::T6, Theorem::T7, Theorem::T8];

    pub fn title(self) -> &'static str {
        match self {
            Theorem::T1 => "DCC noninterference",
            Theorem::T2 => "DCC^d safety",
            Theorem::T3 => "DCC terms translate into DCC^d",
            Theorem::T4 => "DCC^d results translate back into DCC",
            Theorem::T5 => "DCC^dc without weaken behaves like DCC and DCC^d",
            Theorem::T6 => "DCC^dc noninterference above the blame",
            Theorem::T7 => "weakening below the blame is underivable",
            Theorem::T8 => "DCC^cd noninterference and completeness",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem `{s}` (expected T1..T8)"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteBounds {
    /// Largest AST size of enumerated terms.
    pub term_size: usize,
    /// Largest height of the types that instantiate `s` and `t`.
    pub type_height: usize,
    /// Largest AST size of the e′ terms in T7.
    pub context_size: usize,
    /// Cap on projected work (candidate terms plus oracle calls).
    pub budget: u64,
    pub strategy: Strategy,
    pub oracle: OracleConfig,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            term_size: 7,
            type_height: 2,
            context_size: 7,
            budget: 50_000_000,
            strategy: Strategy::default(),
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub term: String,
    pub levels: Vec<String>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub theorem: Theorem,
    pub lattice: String,
    pub blame_mode: BlameMode,
    /// Number of instances checked.
    pub checked: u64,
    pub failures: u64,
    /// The first failing instances, in enumeration order.
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("projected work {projected} exceeds the budget of {budget}")]
    BoundsTooLarge { projected: u128, budget: u64 },
    #[error("internal example failed to parse: {0}")]
    Setup(String),
}

pub fn run_theorem_suite(theorem: Theorem, bounds: &SuiteBounds) -> Result<SuiteReport, HarnessError> {
    let (lattice, mode) = match theorem {
        Theorem::T6 => ("diamond", BlameMode::Preserve),
        Theorem::T7 => ("diamond", BlameMode::Flip),
        _ => ("two", BlameMode::Preserve),
    };
    let mut s = Suite::new(theorem, lattice, mode, bounds);
    match theorem {
        Theorem::T1 => s.noninterference(System::Dcc)?,
        Theorem::T2 => s.safety(System::Dccd)?,
        Theorem::T3 => s.embedding()?,
        Theorem::T4 => s.volpano()?,
        Theorem::T5 => {
            s.weaken_free = true;
            s.noninterference(System::Dccdc)?;
            s.safety(System::Dccdc)?;
        }
        Theorem::T6 => s.blame_noninterference()?,
        Theorem::T7 => s.weakening_underivable()?,
        Theorem::T8 => {
            s.completeness()?;
            s.noninterference(System::Dcccd)?;
        }
    }
    Ok(s.report)
}

struct Suite<'a> {
    lat: Lattice,
    bounds: &'a SuiteBounds,
    weaken_free: bool,
    work: u128,
    report: SuiteReport,
}

type Instance = Result<(), Counterexample>;

impl<'a> Suite<'a> {
    fn new(theorem: Theorem, lattice: &str, mode: BlameMode, bounds: &'a SuiteBounds) -> Self {
        let lat = Lattice::builtin(lattice).expect("builtin lattice").with_blame_mode(mode);
        Suite {
            lat,
            bounds,
            weaken_free: false,
            work: 0,
            report: SuiteReport {
                theorem,
                lattice: lattice.to_string(),
                blame_mode: mode,
                checked: 0,
                failures: 0,
                counterexamples: Vec::new(),
                notes: Vec::new(),
            },
        }
    }

    fn charge(&mut self, amount: u128) -> Result<(), HarnessError> {
        self.work += amount;
        if self.work > self.bounds.budget as u128 {
            return Err(HarnessError::BoundsTooLarge { projected: self.work, budget: self.bounds.budget });
        }
        Ok(())
    }

    fn record(&mut self, results: Vec<Vec<Instance>>) {
        for r in results.into_iter().flatten() {
            self.report.checked += 1;
            if let Err(c) = r {
                self.report.failures += 1;
                if self.report.counterexamples.len() < MAX_WITNESSES {
                    self.report.counterexamples.push(c);
                }
            }
        }
    }

    fn show(&self, e: &Term) -> String {
        show_term(&self.lat, e)
    }

    fn name(&self, l: Index) -> String {
        self.lat.show_index(l)
    }

    /// Closed terms of type `t` in `system`.
    fn terms(&mut self, t: &Type, system: System, size: usize) -> Result<Vec<Term>, HarnessError> {
        let mut tb = TermBounds::new(&self.lat, system, size);
        tb.strategy = self.bounds.strategy;
        let remaining = (self.bounds.budget as u128).saturating_sub(self.work);
        let cap = usize::try_from(remaining).unwrap_or(usize::MAX);
        let Some(cands) = enum_candidates_capped(&self.lat, t, system, &tb, cap) else {
            return Err(HarnessError::BoundsTooLarge { projected: self.work + remaining + 1, budget: self.bounds.budget });
        };
        self.charge(cands.len() as u128)?;
        let env = TypingEnv::closed(&self.lat, system);
        let opts = CheckOptions::default();
        let t = normalize_type(&self.lat, t);
        let lat = &self.lat;
        let weaken_free = self.weaken_free;
        Ok(tb.strategy.filter(cands, |e| {
            (!weaken_free || !e.has_weaken()) && check_against(lat, &env, e, &t, &opts).is_ok()
        }))
    }

    /// Source values of `s`, which must be qualifier-free.
    fn values(&self, s: &Type) -> Vec<Term> {
        let cfg = OracleConfig { depth: s.size() + 1, ..self.bounds.oracle.clone() };
        enum_values_with(&self.lat, s, &cfg).unwrap_or_default()
    }

    fn first_order(&self, grammar: Grammar) -> Vec<Type> {
        enum_types(&self.lat, self.bounds.type_height, grammar)
            .into_iter()
            .filter(|t| t.is_first_order())
            .collect()
    }

    /// `(l, l')` with `l` non-bottom and `l ⋢ l'`.
    fn level_pairs(&self, observers: &[Index]) -> Vec<(Index, Vec<Index>)> {
        self.lat
            .level_indices()
            .into_iter()
            .filter(|l| !self.lat.is_bottom(*l))
            .map(|l| (l, observers.iter().copied().filter(|o| !self.lat.ileq(l, *o)).collect()))
            .collect()
    }

    /// `e (eta_l v1) ~_l' e (eta_l v2) : t` for every typed `e`.
    fn ni_instances(&mut self, system: System, l: Index, observers: &[Index], s: &Type, t: &Type) -> Result<(), HarnessError> {
        let fun = Type::fun(Type::strong(l, s.clone()), t.clone());
        let terms = self.terms(&fun, system, self.bounds.term_size)?;
        let vals = self.values(s);
        let per = (vals.len() * (vals.len() + 1) / 2 * observers.len()) as u128;
        self.charge(terms.len() as u128 * per)?;
        let lat = &self.lat;
        let cfg = &self.bounds.oracle;
        let results = self.bounds.strategy.map(&terms, |e| {
            let mut out = Vec::new();
            for &o in observers {
                for (i, v1) in vals.iter().enumerate() {
                    for v2 in &vals[i..] {
                        let a = Term::app(e.clone(), Term::strong_ret(l, v1.clone()));
                        let b = Term::app(e.clone(), Term::strong_ret(l, v2.clone()));
                        let verdict = match indistinguishable(lat, &a, &b, t, o, cfg) {
                            Ok(true) => None,
                            Ok(false) => Some(format!(
                                "distinguishable on {} and {}",
                                show_term(lat, v1),
                                show_term(lat, v2)
                            )),
                            Err(err) => Some(format!("oracle error: {err}")),
                        };
                        out.push(match verdict {
                            None => Ok(()),
                            Some(v) => Err(Counterexample {
                                term: show_term(lat, e),
                                levels: vec![lat.show_index(l), lat.show_index(o)],
                                verdict: v,
                            }),
                        });
                    }
                }
            }
            out
        });
        self.record(results);
        Ok(())
    }

    fn noninterference(&mut self, system: System) -> Result<(), HarnessError> {
        let types = self.first_order(Grammar::Dcc);
        let observers = self.lat.level_indices();
        for (l, obs) in self.level_pairs(&observers) {
            for s in &types {
                for t in &types {
                    self.ni_instances(system, l, &obs, s, t)?;
                }
            }
        }
        self.report
            .notes
            .push(format!("{system}: {} first-order types for s and t", types.len()));
        Ok(())
    }

    fn safety(&mut self, system: System) -> Result<(), HarnessError> {
        let ss: Vec<Type> = self.first_order(Grammar::Dccd).into_iter().filter(|s| !s.has_open()).collect();
        let ts = self.first_order(Grammar::Dccd);
        let observers = self.lat.level_indices();
        for (l, obs) in self.level_pairs(&observers) {
            for s in &ss {
                let vals = self.values(s);
                for t in &ts {
                    let fun = normalize_type(&self.lat, &Type::fun(Type::weak(l, s.clone()), t.clone()));
                    let terms = self.terms(&fun, system, self.bounds.term_size)?;
                    self.charge((terms.len() * vals.len() * obs.len()) as u128)?;
                    let lat = &self.lat;
                    let cfg = &self.bounds.oracle;
                    let results = self.bounds.strategy.map(&terms, |e| {
                        let mut out = Vec::new();
                        for &o in &obs {
                            for v in &vals {
                                let app = Term::app(e.clone(), Term::weak_ret(l, v.clone()));
                                let verdict = match safe(lat, &app, t, o, cfg) {
                                    Ok(true) => None,
                                    Ok(false) => Some(format!("unsafe on {}", show_term(lat, v))),
                                    Err(err) => Some(format!("oracle error: {err}")),
                                };
                                out.push(match verdict {
                                    None => Ok(()),
                                    Some(v) => Err(Counterexample {
                                        term: show_term(lat, e),
                                        levels: vec![lat.show_index(l), lat.show_index(o)],
                                        verdict: v,
                                    }),
                                });
                            }
                        }
                        out
                    });
                    self.record(results);
                }
            }
        }
        self.report.notes.push(format!("{system}: safety over {} argument and {} result types", ss.len(), ts.len()));
        Ok(())
    }

    fn embedding(&mut self) -> Result<(), HarnessError> {
        let types = enum_types(&self.lat, self.bounds.type_height, Grammar::Dcc);
        let mut programs: Vec<(Term, Type)> = Vec::new();
        for s in &types {
            for e in self.terms(s, System::Dcc, self.bounds.term_size)? {
                programs.push((e, s.clone()));
            }
        }
        for ex in corpus::corpus() {
            if let (System::Dcc, corpus::Verdict::Accept(ty)) = (ex.system, ex.expected) {
                if ex.lattice == "two" {
                    let e = parse_term(ex.source, &self.lat).map_err(|e| HarnessError::Setup(e.to_string()))?;
                    let t = parse_type_setup(&self.lat, ty)?;
                    programs.push((e, t));
                }
            }
        }
        self.charge(programs.len() as u128)?;
        let lat = &self.lat;
        let env = TypingEnv::closed(lat, System::Dccd);
        let opts = CheckOptions::default();
        let results = self.bounds.strategy.map(&programs, |(e, s)| {
            let fail = |verdict: String| Counterexample { term: show_term(lat, e), levels: Vec::new(), verdict };
            let (te, ts) = match (weaken_translate(e), weaken_translate(s)) {
                (Ok(a), Ok(b)) => (a, normalize_type(lat, &b)),
                (Err(err), _) | (_, Err(err)) => return vec![Err(fail(err.to_string()))],
            };
            vec![match check_with(lat, &env, &te, &opts).result {
                Ok(t) if t == ts => Ok(()),
                Ok(t) => Err(fail(format!("translated type {} differs from {}", show_type(lat, &t), show_type(lat, &ts)))),
                Err(err) => Err(fail(format!("translation rejected: {err}"))),
            }]
        });
        self.record(results);
        self.report.notes.push(format!("{} DCC programs over {} types", programs.len(), types.len()));
        Ok(())
    }

    fn volpano(&mut self) -> Result<(), HarnessError> {
        let h = self.lat.top_index();
        let ss: Vec<Type> = self.first_order(Grammar::Dccd).into_iter().filter(|s| !s.has_open()).collect();
        let dcc = TypingEnv::closed(&self.lat, System::Dcc);
        let opts = CheckOptions::default();
        let mut leaked = 0usize;
        let mut with_sum = 0usize;
        for s in &ss {
            let src = format!(
                "fun x:W[{0}](unit+({1})). bind y = x in case y of z. inj1 () | z. inj2 (weta[{0}] z)",
                self.name(h),
                show_type(&self.lat, s)
            );
            let k = parse_term(&src, &self.lat).map_err(|e| HarnessError::Setup(e.to_string()))?;
            let t = normalize_type(&self.lat, &Type::sum(Type::Unit, Type::weak(h, s.clone())));
            let dropped = parse_term(&src.replace(&format!("weta[{}] z", self.name(h)), "z"), &self.lat)
                .map_err(|e| HarnessError::Setup(e.to_string()))?;
            let arg_ty = Type::sum(Type::Unit, s.clone());
            let k_ty = normalize_type(&self.lat, &Type::fun(Type::weak(h, arg_ty.clone()), t.clone()));
            let env = TypingEnv::closed(&self.lat, System::Dccd);
            if let Err(err) = check_against(&self.lat, &env, &k, &k_ty, &opts).result {
                self.record(vec![vec![Err(Counterexample {
                    term: self.show(&k),
                    levels: vec![self.name(h)],
                    verdict: format!("k is ill-typed: {err}"),
                })]]);
                continue;
            }
            debug_assert!(!has_negative_protection(&t));
            let target = volpano_translate(&t).expect("DCC^d type");
            let mut rows = Vec::new();
            let mut dropped_fails = false;
            for v in self.values(&arg_ty) {
                let arg = Term::weak_ret(h, v.clone());
                let row = self.translate_back(&k, &arg, &target, &dcc, &opts);
                rows.push(row);
                if let Ok(r) = eval_deep(&self.lat, &Term::app(dropped.clone(), arg), true, self.bounds.oracle.fuel) {
                    let back = volpano_translate(&r).expect("DCC^d value");
                    if check_with(&self.lat, &dcc, &back, &opts).result.is_err() {
                        dropped_fails = true;
                    }
                }
            }
            self.record(vec![rows]);
            if s.contains_sum() {
                with_sum += 1;
                if dropped_fails {
                    leaked += 1;
                } else {
                    self.record(vec![vec![Err(Counterexample {
                        term: self.show(&dropped),
                        levels: vec![self.name(h)],
                        verdict: "protection-dropped variant stayed DCC-typable after translation".into(),
                    })]]);
                }
            }
        }
        // every enumerated program with a first-order result
        let ts: Vec<Type> = self.first_order(Grammar::Dccd).into_iter().filter(|t| !has_negative_protection(t)).collect();
        let mut programs = 0usize;
        for s in &ss {
            let vals = self.values(s);
            for t in &ts {
                let fun = normalize_type(&self.lat, &Type::fun(Type::weak(h, s.clone()), t.clone()));
                let terms = self.terms(&fun, System::Dccd, self.bounds.term_size)?;
                self.charge((terms.len() * vals.len()) as u128)?;
                programs += terms.len();
                let target = volpano_translate(&normalize_type(&self.lat, t)).expect("DCC^d type");
                let this = &*self;
                let results = self.bounds.strategy.map(&terms, |e| {
                    vals.iter()
                        .map(|v| this.translate_back(e, &Term::weak_ret(h, v.clone()), &target, &dcc, &opts))
                        .collect()
                });
                self.record(results);
            }
        }
        self.report.notes.push(format!("{programs} enumerated DCC^d programs translated back"));
        self.report.notes.push(format!(
            "k checked for {} payload types; protection-dropped variant rejected after translation for {leaked} of {with_sum} payloads with sums",
            ss.len()
        ));
        Ok(())
    }

    fn translate_back(&self, e: &Term, arg: &Term, target: &Type, dcc: &TypingEnv, opts: &CheckOptions) -> Instance {
        let lat = &self.lat;
        let fail = |verdict: String| Counterexample {
            term: format!("{} ({})", show_term(lat, e), show_term(lat, arg)),
            levels: Vec::new(),
            verdict,
        };
        let v = eval_deep(lat, &Term::app(e.clone(), arg.clone()), true, self.bounds.oracle.fuel)
            .map_err(|err| fail(err.to_string()))?;
        let back = volpano_translate(&v).map_err(|err| fail(err.to_string()))?;
        match check_against(lat, dcc, &back, target, opts).result {
            Ok(_) => Ok(()),
            Err(err) => Err(fail(format!("{} is not DCC-typable: {err}", show_term(lat, &back)))),
        }
    }

    fn blame_types(&self) -> Vec<Type> {
        let b = Type::bool();
        let mut ts = vec![b.clone(), Type::Unit];
        for l in self.lat.level_indices() {
            if self.lat.is_bottom(l) {
                continue;
            }
            ts.push(Type::strong(l, b.clone()));
            ts.push(Type::weak(l, b.clone()));
            ts.push(Type::strong(self.lat.beta(l.level), Type::weak(l, b.clone())));
        }
        ts.into_iter().map(|t| normalize_type(&self.lat, &t)).collect()
    }

    fn blame_noninterference(&mut self) -> Result<(), HarnessError> {
        // the blame program itself
        for l in self.lat.level_indices() {
            if self.lat.is_bottom(l) {
                continue;
            }
            for i in [Side::Left, Side::Right] {
                let lat = &self.lat;
                let blame = lat.beta(l.level);
                let p = Term::bind(
                    "x",
                    Term::weaken(Term::strong_ret(l, Term::inj(i, Term::Unit))),
                    Term::strong_ret(blame, Term::var("x")),
                );
                let env = TypingEnv::closed(lat, System::Dccdc);
                let verdict = match check_with(lat, &env, &p, &CheckOptions::default()).result {
                    Ok(t) if blame_of(lat, &t) == blame => Ok(()),
                    Ok(t) => Err(format!("B({}) = {}", show_type(lat, &t), lat.show_index(blame_of(lat, &t)))),
                    Err(e) => Err(e.to_string()),
                };
                let r = verdict.map_err(|v| Counterexample { term: show_term(lat, &p), levels: Vec::new(), verdict: v });
                self.record(vec![vec![r]]);
            }
        }
        let s = Type::bool();
        let observers = self.lat.all_indices();
        let ts = self.blame_types();
        let mut instances = 0;
        for (l, obs) in self.level_pairs(&observers) {
            for t in &ts {
                let b = self.lat.beta_inv(blame_of(&self.lat, t)).expect("blame index");
                if self.lat.leq(l.level, b) {
                    continue;
                }
                instances += 1;
                self.ni_instances(System::Dccdc, l, &obs, &s, t)?;
            }
        }
        self.report.notes.push(format!("{instances} (level, result type) pairs above the blame"));
        Ok(())
    }

    fn weakening_underivable(&mut self) -> Result<(), HarnessError> {
        let s = Type::bool();
        let ts = self.blame_types();
        let opts = CheckOptions::default();
        let mut pairs = 0;
        for l in self.lat.level_indices() {
            for t in &ts {
                let b = self.lat.beta_inv(blame_of(&self.lat, t)).expect("blame index");
                if self.lat.leq(b, l.level) {
                    continue;
                }
                pairs += 1;
                let ctx_ty = normalize_type(&self.lat, &Type::fun(Type::weak(l, s.clone()), t.clone()));
                let contexts = self.terms(&ctx_ty, System::Dccdc, self.bounds.context_size)?;
                let vals = self.values(&normalize_type_at(&self.lat, &s, l));
                self.charge((contexts.len() * vals.len()) as u128)?;
                let lat = &self.lat;
                let env = TypingEnv::closed(lat, System::Dccdc);
                let results = self.bounds.strategy.map(&contexts, |c| {
                    vals.iter()
                        .map(|v| {
                            let arg = Term::bind("x", Term::weaken(Term::strong_ret(l, v.clone())), Term::var("x"));
                            let whole = Term::app(c.clone(), arg);
                            match check_against(lat, &env, &whole, t, &opts).result {
                                Err(_) => Ok(()),
                                Ok(_) => Err(Counterexample {
                                    term: show_term(lat, &whole),
                                    levels: vec![lat.show_index(l), lat.show_index(blame_of(lat, t))],
                                    verdict: format!("derivable at {}", show_type(lat, t)),
                                }),
                            }
                        })
                        .collect()
                });
                self.record(results);
            }
        }
        self.report.notes.push(format!("{pairs} (level, result type) pairs with the blame not below the level"));
        Ok(())
    }

    fn completeness(&mut self) -> Result<(), HarnessError> {
        let types = enum_types(&self.lat, self.bounds.type_height, Grammar::Dcc);
        let mut programs = Vec::new();
        for s in &types {
            for e in self.terms(s, System::Dcc, self.bounds.term_size)? {
                programs.push((e, s.clone()));
            }
        }
        self.charge(programs.len() as u128)?;
        let lat = &self.lat;
        let env = TypingEnv::closed(lat, System::Dcccd);
        let opts = CheckOptions::default();
        let results = self.bounds.strategy.map(&programs, |(e, s)| {
            vec![match check_against(lat, &env, e, s, &opts).result {
                Ok(_) => Ok(()),
                Err(err) => Err(Counterexample {
                    term: show_term(lat, e),
                    levels: Vec::new(),
                    verdict: format!("rejected by DCC^cd at {}: {err}", show_type(lat, s)),
                }),
            }]
        });
        self.record(results);
        // the examples DCC rejects
        let mut accepted = 0;
        for name in ["cd-inj1", "cd-inj2", "switch"] {
            let ex = corpus::find(name).expect("corpus example");
            let o = corpus::run_example(&ex);
            let dcc = corpus::find(&format!("{name}-dcc")).map(|e| corpus::run_example(&e));
            let ok = o.passed && dcc.is_none_or(|d| d.passed);
            if ok {
                accepted += 1;
            }
            self.record(vec![vec![if ok {
                Ok(())
            } else {
                Err(Counterexample { term: ex.source.to_string(), levels: Vec::new(), verdict: format!("{o:?}") })
            }]]);
        }
        self.report
            .notes
            .push(format!("{} DCC programs re-checked in DCC^cd; {accepted} DCC-rejected examples accepted", programs.len()));
        Ok(())
    }
}

fn parse_type_setup(lat: &Lattice, s: &str) -> Result<Type, HarnessError> {
    crate::syntax::parse_type(s, lat)
        .map(|t| normalize_type(lat, &t))
        .map_err(|e| HarnessError::Setup(e.to_string()))
}
