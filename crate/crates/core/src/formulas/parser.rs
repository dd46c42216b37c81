use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use super::ast::{Formula, Name, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Scope,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Scope => "scope error",
        };
        write!(f, "{what} at {}:{}: {}", self.line, self.col, self.msg)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Bar,
    Eq,
    Neq,
    Arrow,
    DArrow,
    Semi,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Bar => f.write_str("'|'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Neq => f.write_str("'!='"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::DArrow => f.write_str("'<->'"),
            Tok::Semi => f.write_str("';'"),
            Tok::Colon => f.write_str("':'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "D", "d", "Empty", "forall", "exists", "the", "in", "not", "and", "or", "true", "false", "rank", "let",
    "subset", "notin", "pow", "bigcup", "prod", "pair", "cap", "cup", "diff", "fst", "snd", "funcapp", "isfun",
    "qadd", "qle", "qlt", "rat",
];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let two = |s: &str| src[i..].starts_with(s);
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        } else if c.is_ascii_digit() || (c == b'-' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: i64 = src[start..i].parse().map_err(|_| (start, "integer literal out of range".to_string()))?;
            out.push((Tok::Int(n), start));
            continue;
        } else if two("<->") {
            i += 3;
            Tok::DArrow
        } else if two("->") {
            i += 2;
            Tok::Arrow
        } else if two("!=") {
            i += 2;
            Tok::Neq
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'|' => Tok::Bar,
                b'=' => Tok::Eq,
                b';' => Tok::Semi,
                b':' => Tok::Colon,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    return Err((start, format!("unexpected character {ch:?}")));
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<Name>,
    taken: HashSet<String>,
    fresh: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str, free: &[&str]) -> PResult<Self> {
        let toks = lex(src).map_err(|(pos, msg)| error_at(src, pos, ParseErrorKind::Syntax, msg))?;
        let taken = toks
            .iter()
            .filter_map(|(t, _)| match t {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        Ok(Parser { src, toks, pos: 0, scope: free.iter().map(|s| Name::from(*s)).collect(), taken, fresh: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(error_at(self.src, self.offset(), ParseErrorKind::Syntax, msg.into()))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.err(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&t.to_string())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.unexpected(&format!("'{kw}'"))
        }
    }

    /// A name usable as a bound variable.
    fn binder(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Name::from(s.as_str()))
            }
            _ => self.unexpected("a variable name"),
        }
    }

    fn plain_ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn fresh(&mut self, hint: &str) -> Name {
        loop {
            let name = format!("_{hint}{}", self.fresh);
            self.fresh += 1;
            if !self.taken.contains(&name) {
                return Name::from(name.as_str());
            }
        }
    }

    fn with_bound<T>(&mut self, x: &Name, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.scope.push(x.clone());
        let r = f(self);
        self.scope.pop();
        r
    }

    // formula := iff
    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat_kw("or") {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.eat_kw("and") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat_kw("not") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantifier();
        }
        if self.eat_kw("let") {
            // let x = t in φ  ≡  exists x in {t}. φ
            let x = self.binder()?;
            self.expect(Tok::Eq)?;
            let t = self.term()?;
            self.expect_kw("in")?;
            let body = self.with_bound(&x, |p| p.formula())?;
            return Ok(Formula::Exists(x, singleton(t), Box::new(body)));
        }
        self.atom()
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let universal = self.is_kw("forall");
        self.bump();
        let x = self.binder()?;
        if self.eat_kw("in") {
            let bound = self.term()?;
            self.expect(Tok::Dot)?;
            let body = self.with_bound(&x, |p| p.formula())?;
            return Ok(if universal {
                Formula::Forall(x, bound, Box::new(body))
            } else {
                Formula::Exists(x, bound, Box::new(body))
            });
        }
        if universal {
            return self.unexpected("'in' (universal quantifiers must be bounded)");
        }
        let cap = if self.eat_kw("rank") {
            match self.bump() {
                Tok::Int(n) if (0..=u32::MAX as i64).contains(&n) => Some(n as u32),
                _ => return self.err("expected a rank cap after 'rank'"),
            }
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let body = self.with_bound(&x, |p| p.formula())?;
        Ok(Formula::ExistsUnbounded(x, cap, Box::new(body)))
    }

    fn atom(&mut self) -> PResult<Formula> {
        if self.eat_kw("true") {
            return Ok(Formula::True);
        }
        if self.eat_kw("false") {
            return Ok(Formula::False);
        }
        if *self.peek() == Tok::LParen && !matches!(self.peek_at(1), Tok::Ident(s) if s == "the") {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        for (kw, le) in [("qle", true), ("qlt", false)] {
            if self.is_kw(kw) && *self.peek_at(1) == Tok::LParen {
                self.bump();
                let (a, b) = self.two_args()?;
                return Ok(if le { Formula::QLe(a, b) } else { Formula::QLt(a, b) });
            }
        }
        if self.is_kw("isfun") && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.expect(Tok::LParen)?;
            let f = self.term()?;
            self.expect(Tok::Comma)?;
            let a = self.term()?;
            self.expect(Tok::Comma)?;
            let b = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(self.isfun(f, a, b));
        }
        let lhs = self.term()?;
        let op = self.peek().clone();
        match op {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Neq => {
                self.bump();
                Ok(Formula::not(Formula::Eq(lhs, self.term()?)))
            }
            Tok::Ident(s) if s == "in" => {
                self.bump();
                Ok(Formula::Mem(lhs, self.term()?))
            }
            Tok::Ident(s) if s == "notin" => {
                self.bump();
                Ok(Formula::not(Formula::Mem(lhs, self.term()?)))
            }
            Tok::Ident(s) if s == "subset" => {
                self.bump();
                let rhs = self.term()?;
                Ok(self.subset(lhs, rhs))
            }
            _ => self.unexpected("'=', '!=', 'in', 'notin' or 'subset'"),
        }
    }

    fn two_args(&mut self) -> PResult<(Term, Term)> {
        self.expect(Tok::LParen)?;
        let a = self.term()?;
        self.expect(Tok::Comma)?;
        let b = self.term()?;
        self.expect(Tok::RParen)?;
        Ok((a, b))
    }

    fn one_arg(&mut self) -> PResult<Term> {
        self.expect(Tok::LParen)?;
        let a = self.term()?;
        self.expect(Tok::RParen)?;
        Ok(a)
    }

    fn term(&mut self) -> PResult<Term> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if n < 0 {
                    return self.err("natural number literals cannot be negative; use rat(p, q)");
                }
                Ok(Term::Nat(n as u64))
            }
            Tok::LBrace => self.brace_term(),
            Tok::LParen => {
                self.bump();
                self.expect_kw("the")?;
                let x = self.binder()?;
                self.expect_kw("in")?;
                let bound = self.term()?;
                self.expect(Tok::Dot)?;
                let body = self.with_bound(&x, |p| p.formula())?;
                self.expect(Tok::RParen)?;
                Ok(Term::The(x, Box::new(bound), Box::new(body)))
            }
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "D" => Ok(Term::Domain),
                    "d" => Ok(Term::Structure),
                    "Empty" => Ok(Term::Empty),
                    "pow" => Ok(Term::pow(self.one_arg()?)),
                    "bigcup" => Ok(Term::bigcup(self.one_arg()?)),
                    "prod" => {
                        let (a, b) = self.two_args()?;
                        Ok(Term::prod(a, b))
                    }
                    "pair" => {
                        let (a, b) = self.two_args()?;
                        Ok(Term::pair(a, b))
                    }
                    "qadd" => {
                        let (a, b) = self.two_args()?;
                        Ok(Term::QAdd(Box::new(a), Box::new(b)))
                    }
                    "rat" => {
                        self.expect(Tok::LParen)?;
                        let p = self.int()?;
                        self.expect(Tok::Comma)?;
                        let q = self.int()?;
                        self.expect(Tok::RParen)?;
                        if q <= 0 {
                            return self.err("rational denominator must be positive");
                        }
                        Ok(Term::Rat(Ratio::new(p, q)))
                    }
                    "cup" => {
                        let (a, b) = self.two_args()?;
                        Ok(cup(a, b))
                    }
                    "cap" => {
                        let (a, b) = self.two_args()?;
                        let z = self.fresh("z");
                        Ok(Term::Sep(z.clone(), Box::new(a), Box::new(Formula::Mem(Term::Var(z), b))))
                    }
                    "diff" => {
                        let (a, b) = self.two_args()?;
                        let z = self.fresh("z");
                        let body = Formula::not(Formula::Mem(Term::Var(z.clone()), b));
                        Ok(Term::Sep(z, Box::new(a), Box::new(body)))
                    }
                    "fst" | "snd" => {
                        let p = self.one_arg()?;
                        let x = self.fresh("x");
                        let y = self.fresh("y");
                        let spread = Term::bigcup(p.clone());
                        let eq = Formula::Eq(p, Term::pair(Term::Var(x.clone()), Term::Var(y.clone())));
                        let (outer, inner) = if s == "fst" { (x, y) } else { (y, x) };
                        let body = Formula::Exists(inner, spread.clone(), Box::new(eq));
                        Ok(Term::The(outer, Box::new(spread), Box::new(body)))
                    }
                    "funcapp" => {
                        let (f, x) = self.two_args()?;
                        let y = self.fresh("y");
                        let body = Formula::Mem(Term::pair(x, Term::Var(y.clone())), f.clone());
                        Ok(Term::The(y, Box::new(Term::bigcup(Term::bigcup(f))), Box::new(body)))
                    }
                    "let" => {
                        // let x = t in s  ≡  the y in {s | x in {t}}. true
                        let x = self.binder()?;
                        self.expect(Tok::Eq)?;
                        let t = self.term()?;
                        self.expect_kw("in")?;
                        let body = self.with_bound(&x, |p| p.term())?;
                        let y = self.fresh("y");
                        let img = Term::Image(x, Box::new(singleton(t)), Box::new(body));
                        Ok(Term::The(y, Box::new(img), Box::new(Formula::True)))
                    }
                    _ if KEYWORDS.contains(&s.as_str()) => {
                        Err(error_at(self.src, at, ParseErrorKind::Syntax, format!("unexpected keyword '{s}'")))
                    }
                    _ => {
                        let name = Name::from(s.as_str());
                        if self.scope.contains(&name) {
                            Ok(Term::Var(name))
                        } else {
                            Err(error_at(self.src, at, ParseErrorKind::Scope, format!("unbound variable '{s}'")))
                        }
                    }
                }
            }
            _ => self.unexpected("a term"),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            _ => {
                self.pos -= 1;
                self.unexpected("an integer")
            }
        }
    }

    fn brace_term(&mut self) -> PResult<Term> {
        self.expect(Tok::LBrace)?;
        if *self.peek() == Tok::RBrace {
            self.bump();
            return Ok(Term::Empty);
        }
        let is_sep = matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
            && matches!(self.peek_at(1), Tok::Ident(s) if s == "in");
        if is_sep {
            let x = self.binder()?;
            self.expect_kw("in")?;
            let bound = self.term()?;
            self.expect(Tok::Bar)?;
            let body = self.with_bound(&x, |p| p.formula())?;
            self.expect(Tok::RBrace)?;
            return Ok(Term::Sep(x, Box::new(bound), Box::new(body)));
        }
        // The head of an image term may mention its binder before it is
        // declared, so parse it in a scope that speculatively admits the
        // binder and re-check once the binder is known.
        let save = self.pos;
        let first = match self.term() {
            Ok(t) => t,
            Err(e) if e.kind == ParseErrorKind::Scope => {
                let binder = self.image_binder_ahead(save);
                match binder {
                    Some(x) => {
                        self.pos = save;
                        let name = Name::from(x.as_str());
                        let head = self.with_bound(&name, |p| p.term())?;
                        return self.finish_image(head, Some(name));
                    }
                    None => return Err(e),
                }
            }
            Err(e) => return Err(e),
        };
        match self.peek() {
            Tok::Bar => self.finish_image(first, None),
            Tok::Comma | Tok::RBrace => {
                let mut items = vec![first];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    items.push(self.term()?);
                }
                self.expect(Tok::RBrace)?;
                Ok(set_literal(items))
            }
            _ => self.unexpected("',', '|' or '}'"),
        }
    }

    /// Looks past the current brace group's head for `| x in` and returns `x`.
    fn image_binder_ahead(&self, from: usize) -> Option<String> {
        let mut depth = 0i32;
        let mut k = from;
        while k < self.toks.len() {
            match &self.toks[k].0 {
                Tok::LBrace | Tok::LParen => depth += 1,
                Tok::RParen => depth -= 1,
                Tok::RBrace => {
                    if depth == 0 {
                        return None;
                    }
                    depth -= 1;
                }
                Tok::Bar if depth == 0 => {
                    return match (&self.toks.get(k + 1)?.0, &self.toks.get(k + 2)?.0) {
                        (Tok::Ident(x), Tok::Ident(kw)) if kw == "in" => Some(x.clone()),
                        _ => None,
                    };
                }
                Tok::Eof => return None,
                _ => {}
            }
            k += 1;
        }
        None
    }

    fn finish_image(&mut self, head: Term, expected: Option<Name>) -> PResult<Term> {
        self.expect(Tok::Bar)?;
        let x = self.binder()?;
        if let Some(e) = &expected {
            debug_assert_eq!(e, &x);
        }
        self.expect_kw("in")?;
        let bound = self.term()?;
        self.expect(Tok::RBrace)?;
        Ok(Term::Image(x, Box::new(bound), Box::new(head)))
    }

    fn subset(&mut self, a: Term, b: Term) -> Formula {
        let z = self.fresh("z");
        Formula::Forall(z.clone(), a, Box::new(Formula::Mem(Term::Var(z), b)))
    }

    /// `f` is the graph of a total function from `a` to `b`. Images are
    /// searched among the components of `f` itself, which is equivalent once
    /// `f ⊆ a × b` holds and far cheaper than scanning `b`.
    fn isfun(&mut self, f: Term, a: Term, b: Term) -> Formula {
        let p = self.fresh("p");
        let x = self.fresh("x");
        let y = self.fresh("y");
        let y2 = self.fresh("y");
        let parts = Term::bigcup(Term::bigcup(f.clone()));
        let graph = Formula::Forall(p.clone(), f.clone(), Box::new(Formula::Mem(Term::Var(p), Term::prod(a.clone(), b))));
        let pxy = |yy: &Name| Formula::Mem(Term::pair(Term::Var(x.clone()), Term::Var(yy.clone())), f.clone());
        let unique = Formula::Forall(
            y2.clone(),
            parts.clone(),
            Box::new(Formula::implies(pxy(&y2), Formula::Eq(Term::Var(y2.clone()), Term::Var(y.clone())))),
        );
        let total = Formula::Forall(
            x.clone(),
            a,
            Box::new(Formula::Exists(y.clone(), parts, Box::new(Formula::and(pxy(&y), unique)))),
        );
        Formula::and(graph, total)
    }

    fn finish(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }
}

fn singleton(t: Term) -> Term {
    Term::bigcup(Term::pair(t.clone(), t))
}

fn cup(a: Term, b: Term) -> Term {
    Term::bigcup(Term::bigcup(Term::pair(a, b)))
}

fn set_literal(mut items: Vec<Term>) -> Term {
    match items.len() {
        1 => singleton(items.pop().unwrap()),
        2 => {
            let b = items.pop().unwrap();
            let a = items.pop().unwrap();
            Term::bigcup(Term::pair(a, b))
        }
        _ => {
            let rest = items.split_off(2);
            cup(set_literal(items), set_literal(rest))
        }
    }
}

fn error_at(src: &str, pos: usize, kind: ParseErrorKind, msg: String) -> ParseError {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
    ParseError { kind, line, col, msg }
}

/// Parses a closed formula.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    parse_formula_with(src, &[])
}

/// Parses a formula whose free variables are among `free`.
pub fn parse_formula_with(src: &str, free: &[&str]) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src, free)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a closed term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_with(src, &[])
}

pub fn parse_term_with(src: &str, free: &[&str]) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, free)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryDef {
    pub name: String,
    pub shape: Option<String>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpDef {
    pub name: String,
    pub source: String,
    pub target: String,
    pub tau_d: Term,
    pub tau_s: Term,
    pub eta: Option<Term>,
    pub tau_d_pi: Option<Term>,
    pub tau_s_pi: Option<Term>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DefinitionFile {
    pub theories: Vec<TheoryDef>,
    pub interps: Vec<InterpDef>,
}

/// Parses a definition file made of `theory` and `interp` blocks.
pub fn parse_definitions(src: &str) -> Result<DefinitionFile, ParseError> {
    let mut p = Parser::new(src, &[])?;
    let mut out = DefinitionFile::default();
    loop {
        match p.peek().clone() {
            Tok::Eof => return Ok(out),
            Tok::Ident(s) if s == "theory" => {
                p.bump();
                let name = p.plain_ident()?;
                let shape = if *p.peek() == Tok::Colon {
                    p.bump();
                    Some(p.plain_ident()?)
                } else {
                    None
                };
                p.expect(Tok::LBrace)?;
                let formula = p.formula()?;
                p.expect(Tok::RBrace)?;
                out.theories.push(TheoryDef { name, shape, formula });
            }
            Tok::Ident(s) if s == "interp" => {
                p.bump();
                let name = p.plain_ident()?;
                p.expect(Tok::Colon)?;
                let source = p.plain_ident()?;
                p.expect(Tok::Arrow)?;
                let target = p.plain_ident()?;
                p.expect(Tok::LBrace)?;
                let mut fields: Vec<(String, Term)> = Vec::new();
                while *p.peek() != Tok::RBrace {
                    let at = p.offset();
                    let key = p.plain_ident()?;
                    if !["tau_d", "tau_s", "eta", "tau_d_pi", "tau_s_pi"].contains(&key.as_str()) {
                        return Err(error_at(src, at, ParseErrorKind::Syntax, format!("unknown field '{key}'")));
                    }
                    if fields.iter().any(|(k, _)| *k == key) {
                        return Err(error_at(src, at, ParseErrorKind::Syntax, format!("duplicate field '{key}'")));
                    }
                    p.expect(Tok::Eq)?;
                    let t = p.term()?;
                    p.expect(Tok::Semi)?;
                    fields.push((key, t));
                }
                p.expect(Tok::RBrace)?;
                let mut take = |k: &str| fields.iter().position(|(n, _)| n == k).map(|i| fields.remove(i).1);
                let (Some(tau_d), Some(tau_s)) = (take("tau_d"), take("tau_s")) else {
                    return p.err(format!("interp '{name}' needs both tau_d and tau_s"));
                };
                out.interps.push(InterpDef {
                    name,
                    source,
                    target,
                    tau_d,
                    tau_s,
                    eta: take("eta"),
                    tau_d_pi: take("tau_d_pi"),
                    tau_s_pi: take("tau_s_pi"),
                });
            }
            _ => return p.unexpected("'theory' or 'interp'"),
        }
    }
}
