use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

pub type Name = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// The domain constant `D`.
    Domain,
    /// The structure constant `d`.
    Structure,
    Empty,
    Var(Name),
    Pow(Box<Term>),
    BigUnion(Box<Term>),
    Prod(Box<Term>, Box<Term>),
    /// Kuratowski pair.
    Pair(Box<Term>, Box<Term>),
    Nat(u64),
    Rat(Ratio<i64>),
    /// `{x in T | φ}`
    Sep(Name, Box<Term>, Box<Formula>),
    /// `the x in T. φ`, the unique member of `T` satisfying `φ`.
    The(Name, Box<Term>, Box<Formula>),
    /// `{t | x in T}`, the image of `T` under `x ↦ t`.
    Image(Name, Box<Term>, Box<Term>),
    /// Sum of two kernel rationals.
    QAdd(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Mem(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Name, Term, Box<Formula>),
    Exists(Name, Term, Box<Formula>),
    /// Existential over the whole universe above the domain, searched up to
    /// a rank cap (the evaluator's default when `None`).
    ExistsUnbounded(Name, Option<u32>, Box<Formula>),
    /// `≤` on kernel rationals; false when either side is not one.
    QLe(Term, Term),
    /// `<` on kernel rationals; false when either side is not one.
    QLt(Term, Term),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn pow(t: Term) -> Term {
        Term::Pow(Box::new(t))
    }

    pub fn bigcup(t: Term) -> Term {
        Term::BigUnion(Box::new(t))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }

    pub fn sep(x: &str, bound: Term, body: Formula) -> Term {
        Term::Sep(x.into(), Box::new(bound), Box::new(body))
    }

    pub fn the(x: &str, bound: Term, body: Formula) -> Term {
        Term::The(x.into(), Box::new(bound), Box::new(body))
    }

    pub fn image(x: &str, bound: Term, body: Term) -> Term {
        Term::Image(x.into(), Box::new(bound), Box::new(body))
    }

    /// Number of nodes, counting embedded formulas.
    pub fn size(&self) -> usize {
        match self {
            Term::Domain | Term::Structure | Term::Empty | Term::Var(_) | Term::Nat(_) | Term::Rat(_) => 1,
            Term::Pow(t) | Term::BigUnion(t) => 1 + t.size(),
            Term::Prod(a, b) | Term::Pair(a, b) | Term::QAdd(a, b) => 1 + a.size() + b.size(),
            Term::Sep(_, t, f) | Term::The(_, t, f) => 1 + t.size() + f.size(),
            Term::Image(_, t, s) => 1 + t.size() + s.size(),
        }
    }

    /// Free variables, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Domain | Term::Structure | Term::Empty | Term::Nat(_) | Term::Rat(_) => {}
            Term::Pow(t) | Term::BigUnion(t) => t.collect_free(bound, out),
            Term::Prod(a, b) | Term::Pair(a, b) | Term::QAdd(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Sep(x, t, f) | Term::The(x, t, f) => {
                t.collect_free(bound, out);
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Term::Image(x, t, s) => {
                t.collect_free(bound, out);
                bound.push(x.clone());
                s.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, bound: Term, body: Formula) -> Formula {
        Formula::Forall(x.into(), bound, Box::new(body))
    }

    pub fn exists(x: &str, bound: Term, body: Formula) -> Formula {
        Formula::Exists(x.into(), bound, Box::new(body))
    }

    /// Conjunction of a nonempty list, right-nested.
    pub fn all(mut fs: Vec<Formula>) -> Formula {
        let last = fs.pop().unwrap_or(Formula::True);
        fs.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::QLe(a, b) | Formula::QLt(a, b) => 1 + a.size() + b.size(),
            Formula::Not(f) | Formula::ExistsUnbounded(_, _, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, t, f) | Formula::Exists(_, t, f) => 1 + t.size() + f.size(),
        }
    }

    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::QLe(a, b) | Formula::QLt(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, t, f) | Formula::Exists(x, t, f) => {
                t.collect_free(bound, out);
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Formula::ExistsUnbounded(x, _, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

// The printers below emit only core syntax, fully parenthesized at the
// formula level, so that printing and re-parsing is the identity.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Domain => f.write_str("D"),
            Term::Structure => f.write_str("d"),
            Term::Empty => f.write_str("Empty"),
            Term::Var(x) => f.write_str(x),
            Term::Pow(t) => write!(f, "pow({t})"),
            Term::BigUnion(t) => write!(f, "bigcup({t})"),
            Term::Prod(a, b) => write!(f, "prod({a}, {b})"),
            Term::Pair(a, b) => write!(f, "pair({a}, {b})"),
            Term::Nat(n) => write!(f, "{n}"),
            Term::Rat(r) => write!(f, "rat({}, {})", r.numer(), r.denom()),
            Term::Sep(x, t, body) => write!(f, "{{{x} in {t} | {body}}}"),
            Term::The(x, t, body) => write!(f, "(the {x} in {t}. {body})"),
            Term::Image(x, t, s) => write!(f, "{{{s} | {x} in {t}}}"),
            Term::QAdd(a, b) => write!(f, "qadd({a}, {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Mem(a, b) => write!(f, "{a} in {b}"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Forall(x, t, g) => write!(f, "(forall {x} in {t}. {g})"),
            Formula::Exists(x, t, g) => write!(f, "(exists {x} in {t}. {g})"),
            Formula::ExistsUnbounded(x, None, g) => write!(f, "(exists {x}. {g})"),
            Formula::ExistsUnbounded(x, Some(k), g) => write!(f, "(exists {x} rank {k}. {g})"),
            Formula::QLe(a, b) => write!(f, "qle({a}, {b})"),
            Formula::QLt(a, b) => write!(f, "qlt({a}, {b})"),
        }
    }
}
