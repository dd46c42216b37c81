use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use serde::Serialize;
use thiserror::Error;

use super::ast::{Formula, Name, Term};
use crate::hf::{FunctionView, Hf};
use crate::structured::QuasiStructuredSet;

/// Outcome of evaluating a formula. `Unknown` only arises from an unbounded
/// existential whose search ran out of rank or budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    /// Highest stage searched by an unbounded existential without its own cap.
    pub rank_cap: u32,
    /// Most candidates an unbounded existential will try.
    pub search_budget: usize,
    /// Largest set whose power set may be taken.
    pub max_pow_size: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { rank_cap: 4, search_budget: 20_000, max_pow_size: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no member of {bound} satisfies the description of '{var}'")]
    NoWitness { var: String, bound: String },
    #[error("{count} members satisfy the description of '{var}'")]
    MultipleWitnesses { var: String, count: usize },
    #[error("unbounded search exhausted its rank cap before deciding")]
    RankCapExceeded,
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("not a kernel rational: {0}")]
    NotRational(String),
    #[error("power set of a {0}-element set is too large")]
    TooLarge(usize),
}

struct Evaluator<'q> {
    domain: &'q Hf,
    structure: &'q Hf,
    config: EvalConfig,
    env: Vec<(Name, Hf)>,
    // Keyed by node address; the evaluator never outlives the borrowed AST.
    free: HashMap<*const Term, Vec<Name>>,
    cache: HashMap<(*const Term, Vec<Hf>), Hf>,
    stages: Vec<Vec<Hf>>,
    stages_done: bool,
    applications: HashMap<*const Term, bool>,
    views: HashMap<Hf, Option<FunctionView>>,
    pair_index: HashMap<Hf, HashSet<(Hf, Hf)>>,
}

impl<'q> Evaluator<'q> {
    fn new(q: &'q QuasiStructuredSet, assignment: &[(Name, Hf)], config: EvalConfig) -> Self {
        Evaluator {
            domain: &q.domain,
            structure: &q.structure,
            config,
            env: assignment.to_vec(),
            free: HashMap::default(),
            cache: HashMap::default(),
            stages: Vec::new(),
            stages_done: false,
            applications: HashMap::default(),
            views: HashMap::default(),
            pair_index: HashMap::default(),
        }
    }

    fn lookup(&self, x: &Name) -> Result<Hf, EvalError> {
        self.env
            .iter()
            .rev()
            .find(|(n, _)| std::sync::Arc::ptr_eq(n, x) || n == x)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| EvalError::Unbound(x.to_string()))
    }

    fn formula(&mut self, f: &Formula) -> Result<Truth, EvalError> {
        Ok(match f {
            Formula::True => Truth::True,
            Formula::False => Truth::False,
            Formula::Eq(a, b) => Truth::from_bool(self.term(a)? == self.term(b)?),
            // Kuratowski pairs decode uniquely, so membership of a pair can
            // be answered from the decoded members without building it.
            Formula::Mem(Term::Pair(x, y), b) => {
                let (x, y) = (self.term(x)?, self.term(y)?);
                let set = self.term(b)?;
                let index = self.pair_index.entry(set.clone()).or_insert_with(|| {
                    set.members().iter().filter_map(|m| m.kpair_decode().ok()).collect()
                });
                Truth::from_bool(index.contains(&(x, y)))
            }
            Formula::Mem(a, b) => {
                let x = self.term(a)?;
                Truth::from_bool(self.term(b)?.contains(&x))
            }
            Formula::Not(g) => self.formula(g)?.not(),
            Formula::And(a, b) => match self.formula(a)? {
                Truth::False => Truth::False,
                Truth::True => self.formula(b)?,
                Truth::Unknown => match self.formula(b)? {
                    Truth::False => Truth::False,
                    _ => Truth::Unknown,
                },
            },
            Formula::Or(a, b) => match self.formula(a)? {
                Truth::True => Truth::True,
                Truth::False => self.formula(b)?,
                Truth::Unknown => match self.formula(b)? {
                    Truth::True => Truth::True,
                    _ => Truth::Unknown,
                },
            },
            Formula::Implies(a, b) => match self.formula(a)? {
                Truth::False => Truth::True,
                Truth::True => self.formula(b)?,
                Truth::Unknown => match self.formula(b)? {
                    Truth::True => Truth::True,
                    _ => Truth::Unknown,
                },
            },
            Formula::Iff(a, b) => match (self.formula(a)?, self.formula(b)?) {
                (Truth::Unknown, _) | (_, Truth::Unknown) => Truth::Unknown,
                (x, y) => Truth::from_bool(x == y),
            },
            Formula::Forall(x, t, body) => {
                let bound = self.term(t)?;
                self.quantify(x, bound.members(), body, Truth::False)?.not()
            }
            Formula::Exists(x, t, body) => {
                let bound = self.term(t)?;
                self.quantify(x, bound.members(), body, Truth::True)?
            }
            Formula::ExistsUnbounded(x, cap, body) => {
                let cap = cap.unwrap_or(self.config.rank_cap) as usize;
                for stage in 0..=cap {
                    let Some(candidates) = self.stage(stage) else { break };
                    if self.quantify(x, &candidates, body, Truth::True)? == Truth::True {
                        return Ok(Truth::True);
                    }
                }
                // Nothing found below the cap says nothing about higher ranks.
                Truth::Unknown
            }
            Formula::QLe(a, b) | Formula::QLt(a, b) => {
                let (x, y) = (self.term(a)?, self.term(b)?);
                match (x.rational_decode(), y.rational_decode()) {
                    (Ok(p), Ok(q)) => Truth::from_bool(if matches!(f, Formula::QLe(..)) { p <= q } else { p < q }),
                    _ => Truth::False,
                }
            }
        })
    }

    /// Existential scan: returns `True` if some member makes `body` evaluate
    /// to `target` (after negation for universals, handled by the caller).
    fn quantify(&mut self, x: &Name, members: &[Hf], body: &Formula, target: Truth) -> Result<Truth, EvalError> {
        let mut unknown = false;
        for m in members {
            self.env.push((x.clone(), m.clone()));
            let r = self.formula(body);
            self.env.pop();
            let r = r?;
            if r == target {
                return Ok(Truth::True);
            }
            if r == Truth::Unknown {
                unknown = true;
            }
        }
        Ok(if unknown { Truth::Unknown } else { Truth::False })
    }

    /// New candidates of stage `k` for an unbounded existential: stage 0 is
    /// the domain, stage `k+1` the subsets of everything so far that are new,
    /// by increasing size. Generation stops for good once the search budget
    /// is spent, so a larger cap only ever extends the candidate sequence.
    fn stage(&mut self, k: usize) -> Option<Vec<Hf>> {
        while self.stages.len() <= k && !self.stages_done {
            let budget = self.config.search_budget;
            let mut total: usize = self.stages.iter().map(Vec::len).sum();
            if self.stages.is_empty() {
                let first: Vec<Hf> = self.domain.members().iter().take(budget).cloned().collect();
                self.stages_done = first.len() < self.domain.len();
                self.stages.push(first);
                continue;
            }
            let base: Vec<Hf> = self.stages.iter().flatten().cloned().collect();
            let seen: HashSet<&Hf> = base.iter().collect();
            let mut fresh = Vec::new();
            'sizes: for size in 0..=base.len() {
                let mut idx: Vec<usize> = (0..size).collect();
                loop {
                    if total >= budget {
                        self.stages_done = true;
                        break 'sizes;
                    }
                    let s = Hf::set_of(idx.iter().map(|&i| base[i].clone()));
                    if !seen.contains(&s) {
                        fresh.push(s);
                        total += 1;
                    }
                    if !next_combination(&mut idx, base.len()) {
                        break;
                    }
                }
            }
            self.stages.push(fresh);
        }
        self.stages.get(k).cloned()
    }

    /// Shortcut for `(the y in bigcup(bigcup(F)). pair(x, y) in F)`, the
    /// expansion of `funcapp(F, x)`: when `F` is a function graph defined at
    /// `x` the answer is a lookup. Anything else takes the general path, so
    /// errors are unchanged.
    fn application(&mut self, node: &Term, y: &Name, bound: &Term, body: &Formula) -> Result<Option<Hf>, EvalError> {
        let key = node as *const Term;
        let matches = match self.applications.get(&key) {
            Some(&m) => m,
            None => {
                let m = match (bound, body) {
                    (Term::BigUnion(inner), Formula::Mem(Term::Pair(xt, yt), f2)) => match &**inner {
                        Term::BigUnion(f) => {
                            **yt == Term::Var(y.clone())
                                && **f == *f2
                                && !xt.free_vars().contains(y)
                                && !f.free_vars().contains(y)
                        }
                        _ => false,
                    },
                    _ => false,
                };
                self.applications.insert(key, m);
                m
            }
        };
        if !matches {
            return Ok(None);
        }
        let Formula::Mem(Term::Pair(xt, _), f) = body else { return Ok(None) };
        let graph = self.term(f)?;
        let arg = self.term(xt)?;
        let view = self.views.entry(graph.clone()).or_insert_with(|| graph.function_view().ok());
        Ok(view.as_ref().and_then(|v| v.lookup(&arg).cloned()))
    }

    fn free_of(&mut self, t: &Term) -> Vec<Name> {
        self.free.entry(t as *const Term).or_insert_with(|| t.free_vars()).clone()
    }

    fn term(&mut self, t: &Term) -> Result<Hf, EvalError> {
        // Evaluation is pure, so compound terms are memoized on the values of
        // their free variables.
        if !matches!(
            t,
            Term::Pow(_) | Term::BigUnion(_) | Term::Prod(..) | Term::Sep(..) | Term::The(..) | Term::Image(..)
        ) {
            return self.term_uncached(t);
        }
        let free = self.free_of(t);
        let values = free.iter().map(|x| self.lookup(x)).collect::<Result<Vec<_>, _>>()?;
        let key = (t as *const Term, values);
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let v = self.term_uncached(t)?;
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    fn term_uncached(&mut self, t: &Term) -> Result<Hf, EvalError> {
        Ok(match t {
            Term::Domain => self.domain.clone(),
            Term::Structure => self.structure.clone(),
            Term::Empty => Hf::empty(),
            Term::Var(x) => self.lookup(x)?,
            Term::Pow(a) => {
                let v = self.term(a)?;
                if v.len() > self.config.max_pow_size {
                    return Err(EvalError::TooLarge(v.len()));
                }
                v.powerset()
            }
            Term::BigUnion(a) => self.term(a)?.big_union(),
            Term::Prod(a, b) => {
                let x = self.term(a)?;
                x.product(&self.term(b)?)
            }
            Term::Pair(a, b) => {
                let x = self.term(a)?;
                Hf::kpair(x, self.term(b)?)
            }
            Term::Nat(n) => Hf::nat(*n),
            Term::Rat(r) => Hf::rational(*r),
            Term::Sep(x, bound, body) => {
                let b = self.term(bound)?;
                let mut keep = Vec::new();
                for m in b.members() {
                    self.env.push((x.clone(), m.clone()));
                    let r = self.formula(body);
                    self.env.pop();
                    match r? {
                        Truth::True => keep.push(m.clone()),
                        Truth::False => {}
                        Truth::Unknown => return Err(EvalError::RankCapExceeded),
                    }
                }
                Hf::from_sorted(keep)
            }
            Term::The(x, bound, body) => {
                if let Some(v) = self.application(t, x, bound, body)? {
                    return Ok(v);
                }
                let b = self.term(bound)?;
                let mut found: Option<Hf> = None;
                let mut count = 0;
                for m in b.members() {
                    self.env.push((x.clone(), m.clone()));
                    let r = self.formula(body);
                    self.env.pop();
                    match r? {
                        Truth::True => {
                            count += 1;
                            found.get_or_insert_with(|| m.clone());
                        }
                        Truth::False => {}
                        Truth::Unknown => return Err(EvalError::RankCapExceeded),
                    }
                }
                match count {
                    0 => return Err(EvalError::NoWitness { var: x.to_string(), bound: b.to_string() }),
                    1 => found.expect("one witness"),
                    n => return Err(EvalError::MultipleWitnesses { var: x.to_string(), count: n }),
                }
            }
            Term::Image(x, bound, body) => {
                let b = self.term(bound)?;
                let mut out = Vec::with_capacity(b.len());
                for m in b.members() {
                    self.env.push((x.clone(), m.clone()));
                    let r = self.term(body);
                    self.env.pop();
                    out.push(r?);
                }
                Hf::set_of(out)
            }
            Term::QAdd(a, b) => {
                let x = self.term(a)?;
                let y = self.term(b)?;
                let p = x.rational_decode().map_err(|_| EvalError::NotRational(x.to_string()))?;
                let q = y.rational_decode().map_err(|_| EvalError::NotRational(y.to_string()))?;
                Hf::rational(p + q)
            }
        })
    }
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic
/// order; returns false after the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Evaluates `f` with `D` and `d` bound to the domain and structure of `q`.
pub fn eval_formula(
    f: &Formula,
    q: &QuasiStructuredSet,
    assignment: &[(Name, Hf)],
    config: EvalConfig,
) -> Result<Truth, EvalError> {
    Evaluator::new(q, assignment, config).formula(f)
}

pub fn eval_term(
    t: &Term,
    q: &QuasiStructuredSet,
    assignment: &[(Name, Hf)],
    config: EvalConfig,
) -> Result<Hf, EvalError> {
    Evaluator::new(q, assignment, config).term(t)
}

/// Two-valued satisfaction of a closed formula; an undecided search is an
/// error.
pub fn holds(f: &Formula, q: &QuasiStructuredSet, config: EvalConfig) -> Result<bool, EvalError> {
    eval_formula(f, q, &[], config)?.as_bool().ok_or(EvalError::RankCapExceeded)
}
