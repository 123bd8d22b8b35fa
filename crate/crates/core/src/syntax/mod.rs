//! Abstract syntax, parser, printer and the syntactic utilities shared by
//! the checker and evaluator.

pub mod ast;
pub mod normalize;
pub mod parse;
pub mod print;
pub mod subst;

pub use ast::{Name, Side, Term, Type};
pub use normalize::{
    alpha_eq, alpha_eq_in, erase_taints, is_normal, normalize_taint, normalize_type, normalize_type_at,
};
pub use parse::{parse_index, parse_term, parse_type, ParseError, SourceSpan};
pub use print::{show_term, show_type, ShowTerm, ShowType};
pub use subst::{fresh, subst};
