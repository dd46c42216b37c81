use serde::Serialize;

use super::ast::{Formula, Term};

/// Syntactic Lévy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LevyClass {
    Delta0,
    Sigma1,
    Pi1,
    Other,
}

impl LevyClass {
    /// Least class containing both; `Delta0` is below the other two.
    pub fn join(self, other: LevyClass) -> LevyClass {
        use LevyClass::*;
        match (self, other) {
            (Delta0, x) | (x, Delta0) => x,
            (a, b) if a == b => a,
            _ => Other,
        }
    }

    pub fn dual(self) -> LevyClass {
        match self {
            LevyClass::Sigma1 => LevyClass::Pi1,
            LevyClass::Pi1 => LevyClass::Sigma1,
            x => x,
        }
    }

    pub fn is_sigma1(self) -> bool {
        matches!(self, LevyClass::Delta0 | LevyClass::Sigma1)
    }

    pub fn is_pi1(self) -> bool {
        matches!(self, LevyClass::Delta0 | LevyClass::Pi1)
    }

    pub fn label(self) -> &'static str {
        match self {
            LevyClass::Delta0 => "Delta0",
            LevyClass::Sigma1 => "Sigma1",
            LevyClass::Pi1 => "Pi1",
            LevyClass::Other => "Other",
        }
    }
}

pub fn classify(f: &Formula) -> LevyClass {
    use LevyClass::*;
    match f {
        Formula::True | Formula::False => Delta0,
        Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::QLe(a, b) | Formula::QLt(a, b) => {
            classify_term(a).join(classify_term(b))
        }
        Formula::Not(g) => classify(g).dual(),
        Formula::And(a, b) | Formula::Or(a, b) => classify(a).join(classify(b)),
        Formula::Implies(a, b) => classify(a).dual().join(classify(b)),
        Formula::Iff(a, b) => match (classify(a), classify(b)) {
            (Delta0, Delta0) => Delta0,
            _ => Other,
        },
        Formula::Exists(_, t, g) => match classify_term(t).join(classify(g)) {
            Pi1 => Other,
            c => c,
        },
        Formula::Forall(_, t, g) => match classify_term(t).join(classify(g)) {
            Sigma1 => Other,
            c => c,
        },
        Formula::ExistsUnbounded(_, _, g) => {
            if classify(g).is_sigma1() {
                Sigma1
            } else {
                Other
            }
        }
    }
}

/// The join of the classes of every formula embedded in the term.
pub fn classify_term(t: &Term) -> LevyClass {
    use LevyClass::*;
    match t {
        Term::Domain | Term::Structure | Term::Empty | Term::Var(_) | Term::Nat(_) | Term::Rat(_) => Delta0,
        Term::Pow(a) | Term::BigUnion(a) => classify_term(a),
        Term::Prod(a, b) | Term::Pair(a, b) | Term::QAdd(a, b) => classify_term(a).join(classify_term(b)),
        Term::Sep(_, a, f) | Term::The(_, a, f) => classify_term(a).join(classify(f)),
        Term::Image(_, a, b) => classify_term(a).join(classify_term(b)),
    }
}
