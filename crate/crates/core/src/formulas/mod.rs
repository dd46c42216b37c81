//! The bounded language over the constants `D` (domain) and `d`
//! (structure): syntax, parsing, evaluation and Lévy classification.
//!
//! Concrete syntax, loosest binding first: `<->`, `->` (right associative),
//! `or`, `and`, `not`; quantifier bodies extend as far right as possible.
//!
//! ```text
//! forall x in T. φ      exists x in T. φ      exists x. φ      exists x rank 3. φ
//! t = s   t != s   t in s   t notin s   t subset s   qle(t, s)   qlt(t, s)
//! isfun(F, A, B)   let x = t in φ   true   false
//! D  d  Empty  pow(t)  bigcup(t)  prod(t, s)  pair(t, s)  3  rat(-1, 2)  qadd(t, s)
//! {x in T | φ}   {t | x in T}   (the x in T. φ)   {t, s, ...}   {}
//! cap(t, s)  cup(t, s)  diff(t, s)  fst(p)  snd(p)  funcapp(F, x)  let x = t in s
//! ```
//!
//! Everything on the last line, plus `subset`, `!=`, `notin`, `isfun`,
//! formula-level `let` and set literals, is expanded while parsing. Variables
//! the expansion introduces start with `_`.

mod ast;
mod classify;
mod eval;
mod parser;

pub use ast::{Formula, Name, Term};
pub use classify::{classify, classify_term, LevyClass};
pub use eval::{eval_formula, eval_term, holds, EvalConfig, EvalError, Truth};
pub use parser::{
    parse_definitions, parse_formula, parse_formula_with, parse_term, parse_term_with, DefinitionFile, InterpDef,
    ParseError, ParseErrorKind, TheoryDef,
};
