//! Recursive-descent parser for the concrete syntax.
//!
//! ```text
//! type  ::= sum ('->' type)?
//! sum   ::= prod ('+' prod)*
//! prod  ::= qual ('*' qual)*
//! qual  ::= tatom ('^' ix)*
//! tatom ::= 'unit' | 'T' '[' index ']' '(' type ')' | 'W' '[' index ']' '(' type ')' | '(' type ')'
//!
//! term  ::= 'fun' x ':' type '.' term | 'bind' x '=' term 'in' term
//!         | 'case' term 'of' x '.' term '|' x '.' term | taint
//! taint ::= app ('@' ix)*
//! app   ::= prefix prefix*
//! prefix::= ('proj1'|'proj2'|'inj1'|'inj2'|'eta' '[' index ']'|'weta' '[' index ']'|'weaken') prefix | atom
//! atom  ::= '()' | x | '(' term ')' | '(' term ',' term ')'
//! index ::= ix ('|' ix)*      ix ::= name | '!' name | '(' index ')'
//! ```

use std::fmt;

use thiserror::Error;

use super::ast::{Side, Term, Type};
use crate::lattice::{Index, Lattice};

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {msg}")]
    Syntax { span: SourceSpan, msg: String },
    #[error("unknown level `{name}` at {span}")]
    UnknownLevelName { span: SourceSpan, name: String },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::UnknownLevelName { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    Eq,
    Bar,
    Bang,
    At,
    Caret,
    Star,
    Plus,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::At => f.write_str("`@`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "fun", "bind", "in", "case", "of", "proj1", "proj2", "inj1", "inj2", "eta", "weta", "weaken", "unit",
];

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if src[i..].starts_with("--") {
            while i < src.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if src[i..].starts_with("->") {
            out.push((Tok::Arrow, SourceSpan { start, end: i + 2 }));
            i += 2;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            '|' => Some(Tok::Bar),
            '!' => Some(Tok::Bang),
            '@' => Some(Tok::At),
            '^' => Some(Tok::Caret),
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            _ => None,
        };
        if let Some(t) = single {
            i += 1;
            out.push((t, SourceSpan { start, end: i }));
            continue;
        }
        if c.is_alphanumeric() || c == '_' || c == '\'' {
            while i < src.len() {
                let d = src[i..].chars().next().unwrap();
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    i += d.len_utf8();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(src[start..i].to_string()), SourceSpan { start, end: i }));
            continue;
        }
        return Err(ParseError::Syntax {
            span: SourceSpan { start, end: i + c.len_utf8() },
            msg: format!("unexpected character `{c}`"),
        });
    }
    out.push((Tok::Eof, SourceSpan { start: src.len(), end: src.len() }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    lat: &'a Lattice,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &str, lat: &'a Lattice) -> PResult<Parser<'a>> {
        Ok(Parser { toks: lex(src)?, pos: 0, lat })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { span: self.span(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {t}, found {}", self.peek()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{kw}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected an identifier, found {other}")),
        }
    }

    fn end(&self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => self.err(format!("unexpected {other} after end of expression")),
        }
    }

    // ---- indices ---------------------------------------------------------

    fn index(&mut self) -> PResult<Index> {
        let mut i = self.index_atom()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let j = self.index_atom()?;
            i = self.lat.ijoin(i, j);
        }
        Ok(i)
    }

    fn index_atom(&mut self) -> PResult<Index> {
        let span = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let i = self.index()?;
                self.expect(Tok::RParen)?;
                Ok(i)
            }
            Tok::Bang => {
                self.bump();
                let span = self.span();
                match self.bump() {
                    Tok::Ident(name) => {
                        let l = self
                            .lat
                            .level_named(&name)
                            .map_err(|_| ParseError::UnknownLevelName { span, name })?;
                        Ok(self.lat.beta(l))
                    }
                    other => Err(ParseError::Syntax { span, msg: format!("expected a level name, found {other}") }),
                }
            }
            Tok::Ident(name) => {
                self.bump();
                let l = self
                    .lat
                    .level_named(&name)
                    .map_err(|_| ParseError::UnknownLevelName { span, name })?;
                Ok(self.lat.index(l))
            }
            other => self.err(format!("expected a level, found {other}")),
        }
    }

    fn bracket_index(&mut self) -> PResult<Index> {
        self.expect(Tok::LBrack)?;
        let i = self.index()?;
        self.expect(Tok::RBrack)?;
        Ok(i)
    }

    // ---- types -----------------------------------------------------------

    fn ty(&mut self) -> PResult<Type> {
        let lhs = self.ty_sum()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            return Ok(Type::fun(lhs, rhs));
        }
        Ok(lhs)
    }

    fn ty_sum(&mut self) -> PResult<Type> {
        let mut t = self.ty_prod()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.ty_prod()?;
            t = Type::sum(t, r);
        }
        Ok(t)
    }

    fn ty_prod(&mut self) -> PResult<Type> {
        let mut t = self.ty_qual()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.ty_qual()?;
            t = Type::prod(t, r);
        }
        Ok(t)
    }

    fn ty_qual(&mut self) -> PResult<Type> {
        let mut t = self.ty_atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let l = self.index_atom()?;
            t = Type::open(t, l);
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "unit" => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::Ident(s) if s == "T" || s == "W" => {
                self.bump();
                let l = self.bracket_index()?;
                self.expect(Tok::LParen)?;
                let inner = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(if s == "T" { Type::strong(l, inner) } else { Type::weak(l, inner) })
            }
            other => self.err(format!("expected a type, found {other}")),
        }
    }

    // ---- terms -----------------------------------------------------------

    fn term(&mut self) -> PResult<Term> {
        if self.is_kw("fun") {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let t = self.ty()?;
            self.expect(Tok::Dot)?;
            let body = self.term()?;
            return Ok(Term::Abs(x, t, Box::new(body)));
        }
        if self.is_kw("bind") {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Eq)?;
            let e = self.term()?;
            self.expect_kw("in")?;
            let body = self.term()?;
            return Ok(Term::Bind(x, Box::new(e), Box::new(body)));
        }
        if self.is_kw("case") {
            self.bump();
            let e = self.term()?;
            self.expect_kw("of")?;
            let x = self.ident()?;
            self.expect(Tok::Dot)?;
            let l = self.term()?;
            self.expect(Tok::Bar)?;
            let y = self.ident()?;
            self.expect(Tok::Dot)?;
            let r = self.term()?;
            return Ok(Term::Case(Box::new(e), x, Box::new(l), y, Box::new(r)));
        }
        self.taint()
    }

    fn taint(&mut self) -> PResult<Term> {
        let mut e = self.app()?;
        while *self.peek() == Tok::At {
            self.bump();
            let l = self.index_atom()?;
            e = Term::Taint(Box::new(e), l);
        }
        Ok(e)
    }

    fn starts_prefix(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => {
                !KEYWORDS.contains(&s.as_str())
                    || matches!(s.as_str(), "proj1" | "proj2" | "inj1" | "inj2" | "eta" | "weta" | "weaken")
            }
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut e = self.prefix()?;
        while self.starts_prefix() {
            let a = self.prefix()?;
            e = Term::App(Box::new(e), Box::new(a));
        }
        Ok(e)
    }

    fn prefix(&mut self) -> PResult<Term> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.atom(),
        };
        match kw.as_str() {
            "proj1" | "proj2" | "inj1" | "inj2" => {
                self.bump();
                let side = if kw.ends_with('1') { Side::Left } else { Side::Right };
                let e = self.prefix()?;
                Ok(if kw.starts_with("proj") { Term::Proj(side, Box::new(e)) } else { Term::Inj(side, Box::new(e)) })
            }
            "eta" | "weta" => {
                self.bump();
                let l = self.bracket_index()?;
                let e = self.prefix()?;
                Ok(if kw == "eta" { Term::StrongRet(l, Box::new(e)) } else { Term::WeakRet(l, Box::new(e)) })
            }
            "weaken" => {
                self.bump();
                let e = self.prefix()?;
                Ok(Term::Weaken(Box::new(e)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(Term::Unit);
                }
                let e = self.term()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let f = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Term::Pair(Box::new(e), Box::new(f)));
                }
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(_) => Ok(Term::Var(self.ident()?)),
            other => self.err(format!("expected a term, found {other}")),
        }
    }
}

pub fn parse_type(src: &str, lat: &Lattice) -> Result<Type, ParseError> {
    let mut p = Parser::new(src, lat)?;
    let t = p.ty()?;
    p.end()?;
    Ok(t)
}

pub fn parse_term(src: &str, lat: &Lattice) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, lat)?;
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

/// Parses a lattice index such as `H`, `!H` or `H|!L`.
pub fn parse_index(src: &str, lat: &Lattice) -> Result<Index, ParseError> {
    let mut p = Parser::new(src, lat)?;
    let i = p.index()?;
    p.end()?;
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::two()
    }

    #[test]
    fn parses_unit() {
        assert_eq!(parse_term("()", &lat()).unwrap(), Term::Unit);
    }

    #[test]
    fn parses_blame_indexed_type() {
        let lat = lat();
        let h = lat.level_named("H").unwrap();
        let t = parse_type("T[!H](W[H](unit))", &lat).unwrap();
        assert_eq!(t, Type::strong(lat.beta(h), Type::weak(lat.index(h), Type::Unit)));
    }

    #[test]
    fn parses_f() {
        let lat = lat();
        let h = lat.index(lat.level_named("H").unwrap());
        let f = parse_term("fun x:W[H](unit+unit). bind y = x in y", &lat).unwrap();
        let expected = Term::abs(
            "x",
            Type::weak(h, Type::bool()),
            Term::bind("y", Term::var("x"), Term::var("y")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn type_precedence() {
        let lat = lat();
        let h = lat.index(lat.level_named("H").unwrap());
        let t = parse_type("unit * unit + unit ^ H -> unit -> unit", &lat).unwrap();
        let lhs = Type::sum(Type::prod(Type::Unit, Type::Unit), Type::open(Type::Unit, h));
        assert_eq!(t, Type::fun(lhs, Type::fun(Type::Unit, Type::Unit)));
    }

    #[test]
    fn prefix_and_application() {
        let lat = lat();
        let h = lat.index(lat.level_named("H").unwrap());
        let e = parse_term("eta[H] inj1 ()", &lat).unwrap();
        assert_eq!(e, Term::strong_ret(h, Term::inj(Side::Left, Term::Unit)));
        let e = parse_term("f x y", &lat).unwrap();
        assert_eq!(e, Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y")));
    }

    #[test]
    fn case_and_taint() {
        let lat = lat();
        let h = lat.index(lat.level_named("H").unwrap());
        let e = parse_term("case y of z. inj1 () @ H | w. z -- trailing comment", &lat).unwrap();
        assert_eq!(
            e,
            Term::case(
                Term::var("y"),
                "z",
                Term::taint(Term::inj(Side::Left, Term::Unit), h),
                "w",
                Term::var("z")
            )
        );
    }

    #[test]
    fn errors_carry_spans() {
        let lat = lat();
        let err = parse_term("fun x:unit. (x", &lat).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
        assert_eq!(err.span().start, 14);
        let err = parse_type("T[Q](unit)", &lat).unwrap_err();
        assert_eq!(err, ParseError::UnknownLevelName { span: SourceSpan { start: 2, end: 3 }, name: "Q".into() });
    }
}
