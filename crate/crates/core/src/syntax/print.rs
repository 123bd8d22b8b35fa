//! Pretty printing back to the concrete syntax. Output re-parses to the
//! same tree.

use std::fmt::{self, Write};

use super::ast::{Side, Term, Type};
use crate::lattice::{Index, Lattice};

fn index_atom(lat: &Lattice, i: Index) -> String {
    let s = lat.show_index(i);
    if s.contains('|') {
        format!("({s})")
    } else {
        s
    }
}

pub fn show_type(lat: &Lattice, t: &Type) -> String {
    let mut out = String::new();
    write_type(lat, t, 0, &mut out);
    out
}

// 0 arrow, 1 sum, 2 product, 3 qualified, 4 atom
fn write_type(lat: &Lattice, t: &Type, prec: u8, out: &mut String) {
    let own = match t {
        Type::Fun(..) => 0,
        Type::Sum(..) => 1,
        Type::Prod(..) => 2,
        Type::Open(..) => 3,
        _ => 4,
    };
    let paren = own < prec;
    if paren {
        out.push('(');
    }
    match t {
        Type::Unit => out.push_str("unit"),
        Type::Hole(n) => {
            let _ = write!(out, "?{n}");
        }
        Type::Fun(a, b) => {
            write_type(lat, a, 1, out);
            out.push_str(" -> ");
            write_type(lat, b, 0, out);
        }
        Type::Sum(a, b) => {
            write_type(lat, a, 1, out);
            out.push_str(" + ");
            write_type(lat, b, 2, out);
        }
        Type::Prod(a, b) => {
            write_type(lat, a, 2, out);
            out.push_str(" * ");
            write_type(lat, b, 3, out);
        }
        Type::Open(s, l) => {
            write_type(lat, s, 3, out);
            out.push('^');
            out.push_str(&index_atom(lat, *l));
        }
        Type::Strong(l, s) | Type::Weak(l, s) => {
            out.push_str(if matches!(t, Type::Strong(..)) { "T[" } else { "W[" });
            out.push_str(&lat.show_index(*l));
            out.push_str("](");
            write_type(lat, s, 0, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn show_term(lat: &Lattice, e: &Term) -> String {
    let mut out = String::new();
    write_term(lat, e, 0, &mut out);
    out
}

fn is_binder(e: &Term) -> bool {
    matches!(e, Term::Abs(..) | Term::Bind(..) | Term::Case(..))
}

// 0 binder, 1 taint, 2 application, 3 prefix, 4 atom
fn write_term(lat: &Lattice, e: &Term, prec: u8, out: &mut String) {
    let own = match e {
        Term::Abs(..) | Term::Bind(..) | Term::Case(..) => 0,
        Term::Taint(..) => 1,
        Term::App(..) => 2,
        Term::Proj(..) | Term::Inj(..) | Term::StrongRet(..) | Term::WeakRet(..) | Term::Weaken(..) => 3,
        Term::Unit | Term::Var(_) | Term::Pair(..) => 4,
    };
    let paren = own < prec;
    if paren {
        out.push('(');
    }
    match e {
        Term::Unit => out.push_str("()"),
        Term::Var(x) => out.push_str(x),
        Term::Abs(x, t, body) => {
            let _ = write!(out, "fun {x}:{}. ", show_type(lat, t));
            write_term(lat, body, 0, out);
        }
        Term::Bind(x, m, body) => {
            let _ = write!(out, "bind {x} = ");
            write_term(lat, m, 0, out);
            out.push_str(" in ");
            write_term(lat, body, 0, out);
        }
        Term::Case(s, x, l, y, r) => {
            out.push_str("case ");
            write_term(lat, s, 0, out);
            let _ = write!(out, " of {x}. ");
            write_term(lat, l, if is_binder(l) { 1 } else { 0 }, out);
            let _ = write!(out, " | {y}. ");
            write_term(lat, r, 0, out);
        }
        Term::Taint(v, l) => {
            write_term(lat, v, 1, out);
            out.push_str(" @ ");
            out.push_str(&index_atom(lat, *l));
        }
        Term::App(f, a) => {
            write_term(lat, f, 2, out);
            out.push(' ');
            write_term(lat, a, 3, out);
        }
        Term::Proj(side, v) | Term::Inj(side, v) => {
            let kw = if matches!(e, Term::Proj(..)) { "proj" } else { "inj" };
            let _ = write!(out, "{kw}{} ", side_digit(*side));
            write_term(lat, v, 3, out);
        }
        Term::StrongRet(l, v) | Term::WeakRet(l, v) => {
            let kw = if matches!(e, Term::StrongRet(..)) { "eta" } else { "weta" };
            let _ = write!(out, "{kw}[{}] ", lat.show_index(*l));
            write_term(lat, v, 3, out);
        }
        Term::Weaken(v) => {
            out.push_str("weaken ");
            write_term(lat, v, 3, out);
        }
        Term::Pair(a, b) => {
            out.push('(');
            write_term(lat, a, 0, out);
            out.push_str(", ");
            write_term(lat, b, 0, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

fn side_digit(s: Side) -> u8 {
    s.number()
}

/// `Display` adapter pairing a type with its lattice.
pub struct ShowType<'a>(pub &'a Lattice, pub &'a Type);

impl fmt::Display for ShowType<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_type(self.0, self.1))
    }
}

pub struct ShowTerm<'a>(pub &'a Lattice, pub &'a Term);

impl fmt::Display for ShowTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_term(self.0, self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::{parse_term, parse_type};

    #[test]
    fn type_round_trip() {
        let lat = Lattice::diamond();
        for src in [
            "unit",
            "unit * unit + unit",
            "(unit -> unit) -> unit",
            "unit -> unit -> unit",
            "T[!L](W[L](unit + unit))",
            "(unit + unit)^L * unit",
            "(unit + unit)^(L|!R)",
            "unit * (unit * unit)",
            "(unit + unit) + unit",
        ] {
            let t = parse_type(src, &lat).unwrap();
            let printed = show_type(&lat, &t);
            assert_eq!(parse_type(&printed, &lat).unwrap(), t, "{src} -> {printed}");
        }
        assert_eq!(show_type(&lat, &parse_type("unit*unit+unit", &lat).unwrap()), "unit * unit + unit");
    }

    #[test]
    fn term_round_trip() {
        let lat = Lattice::two();
        for src in [
            "fun x:W[H](unit + unit). bind y = x in y",
            "(fun x:unit. x) ()",
            "f (g x) y",
            "proj1 (proj2 p)",
            "case x of a. (case a of b. b | c. c) | d. d",
            "case x of a. (fun z:unit. z) | d. d",
            "(inj1 ()) @ H @ H",
            "f (x @ H)",
            "eta[!H] weta[H] inj2 ()",
            "((), (fun x:unit. x, ()))",
            "weaken (eta[H] ())",
        ] {
            let e = parse_term(src, &lat).unwrap();
            let printed = show_term(&lat, &e);
            assert_eq!(parse_term(&printed, &lat).unwrap(), e, "{src} -> {printed}");
        }
    }
}
