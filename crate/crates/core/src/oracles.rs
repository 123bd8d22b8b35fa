//! Executable indistinguishability (`e ~_l e' : t`) and safety
//! (`e ▷_l : t`) judgments.
//!
//! The quantifier over arguments in the function cases ranges over
//! [`enum_values`] of the argument type, which is complete for first-order
//! argument types.

use std::collections::HashMap;

use thiserror::Error;

use crate::eval::{eval, EvalError, DEFAULT_FUEL};
use crate::lattice::{Index, Lattice};
use crate::syntax::{normalize_taint, normalize_type, show_term, show_type, Side, Term, Type};

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Maximum constructor height of enumerated values.
    pub depth: usize,
    pub fuel: u64,
    /// Largest number of tabulated functions produced for one type.
    pub max_functions: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { depth: 4, fuel: DEFAULT_FUEL, max_functions: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no value of type {ty} has height at most {depth}")]
    DepthTooSmall { ty: String, depth: usize },
    #[error("cannot enumerate arguments of type {ty}")]
    UnsupportedType { ty: String },
    #[error("too many functions of type {ty} ({count})")]
    TooManyValues { ty: String, count: u128 },
    #[error("value `{term}` does not have type {ty}")]
    IllTyped { term: String, ty: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Closed canonical values of `t` with constructor height at most `depth`.
///
/// Values at open types carry their qualifier as a taint. Functions are
/// tabulated: one lambda per map from argument values to result values,
/// each a tree of `case`, `proj` and `bind` over the argument.
pub fn enum_values(lat: &Lattice, t: &Type, depth: usize) -> Result<Vec<Term>, OracleError> {
    enum_values_with(lat, t, &OracleConfig { depth, ..OracleConfig::default() })
}

pub fn enum_values_with(lat: &Lattice, t: &Type, cfg: &OracleConfig) -> Result<Vec<Term>, OracleError> {
    let t = normalize_type(lat, t);
    let mut en = Enumerator { lat, max_functions: cfg.max_functions, memo: HashMap::new() };
    let vs = en.values(&t, cfg.depth)?;
    if vs.is_empty() {
        return Err(OracleError::DepthTooSmall { ty: show_type(lat, &t), depth: cfg.depth });
    }
    Ok(vs)
}

struct Enumerator<'a> {
    lat: &'a Lattice,
    max_functions: usize,
    memo: HashMap<(Type, usize), Vec<Term>>,
}

impl Enumerator<'_> {
    fn values(&mut self, t: &Type, depth: usize) -> Result<Vec<Term>, OracleError> {
        if depth == 0 {
            return Ok(Vec::new());
        }
        if let Some(v) = self.memo.get(&(t.clone(), depth)) {
            return Ok(v.clone());
        }
        let d = depth - 1;
        let out = match t {
            Type::Unit => vec![Term::Unit],
            Type::Prod(a, b) => {
                let va = self.values(a, d)?;
                let vb = self.values(b, d)?;
                let mut out = Vec::with_capacity(va.len() * vb.len());
                for x in &va {
                    for y in &vb {
                        out.push(Term::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
            Type::Sum(a, b) => {
                let mut out: Vec<Term> = self.values(a, d)?.into_iter().map(|v| Term::inj(Side::Left, v)).collect();
                out.extend(self.values(b, d)?.into_iter().map(|v| Term::inj(Side::Right, v)));
                out
            }
            Type::Strong(l, s) => self.values(s, d)?.into_iter().map(|v| Term::strong_ret(*l, v)).collect(),
            Type::Weak(l, s) => self.values(s, d)?.into_iter().map(|v| Term::weak_ret(*l, v)).collect(),
            Type::Open(s, q) => {
                let mut out = Vec::new();
                for v in self.values(s, depth)? {
                    let w = normalize_taint(self.lat, &Term::taint(v, *q));
                    if !out.contains(&w) {
                        out.push(w);
                    }
                }
                out
            }
            Type::Fun(a, b) => self.functions(t, a, b, d)?,
            Type::Hole(_) => return Err(OracleError::UnsupportedType { ty: show_type(self.lat, t) }),
        };
        self.memo.insert((t.clone(), depth), out.clone());
        Ok(out)
    }

    fn functions(&mut self, t: &Type, a: &Type, b: &Type, d: usize) -> Result<Vec<Term>, OracleError> {
        if !a.is_first_order() {
            return Err(OracleError::UnsupportedType { ty: show_type(self.lat, t) });
        }
        // every value of a first-order type has height at most its size
        let args = self.values(a, a.size() + 1)?;
        let results = self.values(b, d)?;
        if results.is_empty() {
            return Ok(Vec::new());
        }
        let count = (results.len() as u128).checked_pow(args.len() as u32).unwrap_or(u128::MAX);
        if count > self.max_functions as u128 {
            return Err(OracleError::TooManyValues { ty: show_type(self.lat, t), count });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut choice = vec![0usize; args.len()];
        loop {
            let table = |v: &Term| -> Term {
                let i = args.iter().position(|w| w == v).expect("every argument value is enumerated");
                results[choice[i]].clone()
            };
            let body = tabulate(self.lat, &Term::var("a"), a, 0, &|v, _| table(&v));
            out.push(Term::abs("a", a.clone(), body));
            let mut i = args.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < results.len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
}

/// Decision tree over `scrut : t`; `k` receives the reconstructed value and
/// the next free binder index.
fn tabulate(lat: &Lattice, scrut: &Term, t: &Type, level: usize, k: &dyn Fn(Term, usize) -> Term) -> Term {
    match t {
        Type::Unit | Type::Fun(..) | Type::Hole(_) => k(Term::Unit, level),
        Type::Prod(a, b) => {
            let left = Term::proj(Side::Left, scrut.clone());
            let right = Term::proj(Side::Right, scrut.clone());
            tabulate(lat, &left, a, level, &|va, l| {
                tabulate(lat, &right, b, l, &|vb, l2| k(Term::pair(va.clone(), vb), l2))
            })
        }
        Type::Sum(a, b) => {
            let z = format!("z{level}");
            let zv = Term::var(&z);
            let l = tabulate(lat, &zv, a, level + 1, &|v, n| k(Term::inj(Side::Left, v), n));
            let r = tabulate(lat, &zv, b, level + 1, &|v, n| k(Term::inj(Side::Right, v), n));
            Term::case(scrut.clone(), &z, l, &z, r)
        }
        Type::Strong(m, s) | Type::Weak(m, s) => {
            let strong = matches!(t, Type::Strong(..));
            let z = format!("z{level}");
            let body = tabulate(lat, &Term::var(&z), s, level + 1, &|v, n| {
                k(if strong { Term::strong_ret(*m, v) } else { Term::weak_ret(*m, v) }, n)
            });
            Term::bind(&z, scrut.clone(), body)
        }
        Type::Open(s, q) => tabulate(lat, scrut, s, level, &|v, n| k(normalize_taint(lat, &Term::taint(v, *q)), n)),
    }
}

fn ill_typed(lat: &Lattice, e: &Term, t: &Type) -> OracleError {
    OracleError::IllTyped { term: show_term(lat, e), ty: show_type(lat, t) }
}

/// Drops head taints (used where taints carry no meaning).
fn untaint(e: Term) -> Term {
    match e {
        Term::Taint(v, _) => untaint(*v),
        other => other,
    }
}

/// `e1 ~_l e2 : t`, evaluating without taints.
pub fn indistinguishable(
    lat: &Lattice,
    e1: &Term,
    e2: &Term,
    t: &Type,
    l: Index,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    let t = normalize_type(lat, t);
    Indist { lat, l, cfg, args: HashMap::new() }.rel(e1, e2, &t)
}

struct Indist<'a> {
    lat: &'a Lattice,
    l: Index,
    cfg: &'a OracleConfig,
    args: HashMap<Type, Vec<Term>>,
}

impl Indist<'_> {
    fn arguments(&mut self, s: &Type) -> Result<Vec<Term>, OracleError> {
        if let Some(v) = self.args.get(s) {
            return Ok(v.clone());
        }
        let vs = enum_values_with(self.lat, s, self.cfg)?;
        self.args.insert(s.clone(), vs.clone());
        Ok(vs)
    }

    fn rel(&mut self, e1: &Term, e2: &Term, t: &Type) -> Result<bool, OracleError> {
        if let Type::Unit = t {
            return Ok(true);
        }
        let v1 = untaint(eval(self.lat, e1, false, self.cfg.fuel)?);
        let v2 = untaint(eval(self.lat, e2, false, self.cfg.fuel)?);
        let lat = self.lat;
        match t {
            Type::Unit => Ok(true),
            Type::Prod(a, b) => match (&v1, &v2) {
                (Term::Pair(x1, y1), Term::Pair(x2, y2)) => Ok(self.rel(x1, x2, a)? && self.rel(y1, y2, b)?),
                _ => Err(ill_typed(lat, &v1, t)),
            },
            Type::Sum(a, b) => match (&v1, &v2) {
                (Term::Inj(s1, p1), Term::Inj(s2, p2)) => {
                    if s1 != s2 {
                        return Ok(false);
                    }
                    let component = if *s1 == Side::Left { a } else { b };
                    self.rel(p1, p2, component)
                }
                _ => Err(ill_typed(lat, &v1, t)),
            },
            Type::Strong(m, s) | Type::Weak(m, s) => {
                let (b1, b2) = match (&v1, &v2) {
                    (Term::StrongRet(m1, b1), Term::StrongRet(m2, b2))
                    | (Term::WeakRet(m1, b1), Term::WeakRet(m2, b2))
                        if m1 == m && m2 == m =>
                    {
                        (b1, b2)
                    }
                    _ => return Err(ill_typed(lat, &v1, t)),
                };
                if !lat.ileq(*m, self.l) {
                    return Ok(true);
                }
                self.rel(b1, b2, s)
            }
            Type::Open(s, q) => {
                if !lat.ileq(*q, self.l) {
                    return Ok(true);
                }
                self.rel(&v1, &v2, s)
            }
            Type::Fun(a, b) => {
                if !a.is_first_order() {
                    return Err(OracleError::UnsupportedType { ty: show_type(lat, t) });
                }
                let args = self.arguments(a)?;
                for x in &args {
                    for y in &args {
                        if self.rel(x, y, a)? && !self.rel(&Term::app(v1.clone(), x.clone()), &Term::app(v2.clone(), y.clone()), b)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Type::Hole(_) => Err(OracleError::UnsupportedType { ty: show_type(lat, t) }),
        }
    }
}

/// `e ▷_l : t`, evaluating with taint propagation.
///
/// A tainted value `v @ q` is safe only if `q ⊑ l` and `v` is safe.
pub fn safe(lat: &Lattice, e: &Term, t: &Type, l: Index, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let t = normalize_type(lat, t);
    Safety { lat, l, cfg, args: HashMap::new() }.safe(e, &t)
}

struct Safety<'a> {
    lat: &'a Lattice,
    l: Index,
    cfg: &'a OracleConfig,
    args: HashMap<Type, Vec<Term>>,
}

impl Safety<'_> {
    fn safe(&mut self, e: &Term, t: &Type) -> Result<bool, OracleError> {
        let v = eval(self.lat, e, true, self.cfg.fuel)?;
        self.safe_value(&v, t)
    }

    fn safe_value(&mut self, v: &Term, t: &Type) -> Result<bool, OracleError> {
        let lat = self.lat;
        if let Term::Taint(inner, q) = v {
            if !lat.ileq(*q, self.l) {
                return Ok(false);
            }
            return self.safe_value(inner, t);
        }
        match t {
            Type::Unit => Ok(true),
            Type::Open(s, _) => self.safe_value(v, s),
            Type::Prod(a, b) => match v {
                Term::Pair(x, y) => Ok(self.safe(x, a)? && self.safe(y, b)?),
                _ => Err(ill_typed(lat, v, t)),
            },
            Type::Sum(a, b) => match v {
                Term::Inj(Side::Left, p) => self.safe(p, a),
                Term::Inj(Side::Right, p) => self.safe(p, b),
                _ => Err(ill_typed(lat, v, t)),
            },
            Type::Strong(m, s) | Type::Weak(m, s) => match v {
                Term::StrongRet(m1, body) | Term::WeakRet(m1, body) if m1 == m => {
                    Ok(!lat.ileq(*m, self.l) || self.safe(body, s)?)
                }
                _ => Err(ill_typed(lat, v, t)),
            },
            Type::Fun(a, b) => {
                if !a.is_first_order() {
                    return Err(OracleError::UnsupportedType { ty: show_type(lat, t) });
                }
                let args = match self.args.get(&**a) {
                    Some(v) => v.clone(),
                    None => {
                        let vs = enum_values_with(lat, a, self.cfg)?;
                        self.args.insert((**a).clone(), vs.clone());
                        vs
                    }
                };
                for x in &args {
                    if self.safe(x, a)? && !self.safe(&Term::app(v.clone(), x.clone()), b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Type::Hole(_) => Err(OracleError::UnsupportedType { ty: show_type(lat, t) }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};

    fn setup() -> (Lattice, Index, Index) {
        let lat = Lattice::two();
        let l = lat.index_named("L").unwrap();
        let h = lat.index_named("H").unwrap();
        (lat, l, h)
    }

    #[test]
    fn value_counts() {
        let (lat, _, _) = setup();
        let ty = |s: &str| parse_type(s, &lat).unwrap();
        let p = |s: &str| parse_term(s, &lat).unwrap();
        assert_eq!(enum_values(&lat, &ty("unit+unit"), 2).unwrap(), vec![p("inj1 ()"), p("inj2 ()")]);
        assert_eq!(enum_values(&lat, &ty("T[H](unit)"), 2).unwrap(), vec![p("eta[H] ()")]);
        assert_eq!(enum_values(&lat, &ty("(unit+unit)*(unit+unit)"), 3).unwrap().len(), 4);
        assert_eq!(enum_values(&lat, &ty("unit+unit -> unit+unit"), 3).unwrap().len(), 4);
        assert!(matches!(enum_values(&lat, &ty("unit+unit"), 1), Err(OracleError::DepthTooSmall { .. })));
        assert_eq!(enum_values(&lat, &ty("(unit+unit)^H"), 2).unwrap(), vec![p("inj1 () @ H"), p("inj2 () @ H")]);
    }

    #[test]
    fn tabulated_functions_are_extensional() {
        let (lat, _, _) = setup();
        let t = parse_type("(unit+unit)*T[H](unit+unit) -> unit+unit", &lat).unwrap();
        let fs = enum_values(&lat, &t, 3).unwrap();
        assert_eq!(fs.len(), 16);
        let args = enum_values(&lat, &parse_type("(unit+unit)*T[H](unit+unit)", &lat).unwrap(), 4).unwrap();
        let mut graphs = std::collections::HashSet::new();
        for f in &fs {
            let graph: Vec<Term> = args
                .iter()
                .map(|a| eval(&lat, &Term::app(f.clone(), a.clone()), false, DEFAULT_FUEL).unwrap())
                .collect();
            graphs.insert(graph);
        }
        assert_eq!(graphs.len(), 16);
    }

    #[test]
    fn monad_hides_contents() {
        let (lat, l, h) = setup();
        let cfg = OracleConfig::default();
        let t = parse_type("T[H](unit+unit)", &lat).unwrap();
        let e1 = parse_term("eta[H] inj1 ()", &lat).unwrap();
        let e2 = parse_term("eta[H] inj2 ()", &lat).unwrap();
        assert!(indistinguishable(&lat, &e1, &e2, &t, l, &cfg).unwrap());
        assert!(!indistinguishable(&lat, &e1, &e2, &t, h, &cfg).unwrap());
        let b = parse_type("unit+unit", &lat).unwrap();
        let i1 = parse_term("inj1 ()", &lat).unwrap();
        let i2 = parse_term("inj2 ()", &lat).unwrap();
        assert!(!indistinguishable(&lat, &i1, &i2, &b, l, &cfg).unwrap());
        assert!(indistinguishable(&lat, &e1, &i2, &Type::Unit, l, &cfg).unwrap());
    }

    #[test]
    fn f_is_not_related_to_itself() {
        let (lat, l, _) = setup();
        let cfg = OracleConfig::default();
        let f = parse_term("fun x:T[H](unit+unit). bind y = x in y", &lat).unwrap();
        let t = parse_type("T[H](unit+unit) -> unit+unit", &lat).unwrap();
        assert!(!indistinguishable(&lat, &f, &f, &t, l, &cfg).unwrap());
        let f1 = parse_term("fun x:T[H](unit+unit). eta[H] ((fun x:T[H](unit+unit). bind y = x in y) x)", &lat).unwrap();
        let t1 = parse_type("T[H](unit+unit) -> T[H](unit+unit)", &lat).unwrap();
        assert!(indistinguishable(&lat, &f1, &f1, &t1, l, &cfg).unwrap());
    }

    #[test]
    fn safety_examples() {
        let (lat, l, _) = setup();
        let cfg = OracleConfig::default();
        let ty = |s: &str| parse_type(s, &lat).unwrap();
        let p = |s: &str| parse_term(s, &lat).unwrap();
        assert!(safe(&lat, &p("weta[H] (inj1 ())"), &ty("W[H](unit+unit)"), l, &cfg).unwrap());
        let f = p("fun x:W[H](unit+unit). bind y = x in y");
        assert!(!safe(&lat, &f, &ty("W[H](unit+unit) -> unit+unit"), l, &cfg).unwrap());
        let g = p("fun x:W[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()");
        assert!(safe(&lat, &g, &ty("W[H](unit+unit) -> unit+unit"), l, &cfg).unwrap());
        let f1 = p("fun x:W[H](unit+unit). weta[H] ((fun x:W[H](unit+unit). bind y = x in y) x)");
        assert!(safe(&lat, &f1, &ty("W[H](unit+unit) -> W[H](unit+unit)"), l, &cfg).unwrap());
    }

    #[test]
    fn higher_order_arguments_are_reported() {
        let (lat, l, _) = setup();
        let t = parse_type("(unit -> unit) -> unit+unit", &lat).unwrap();
        let e = parse_term("fun f:unit -> unit. inj1 ()", &lat).unwrap();
        let r = indistinguishable(&lat, &e, &e, &t, l, &OracleConfig::default());
        assert!(matches!(r, Err(OracleError::UnsupportedType { .. })));
    }
}
