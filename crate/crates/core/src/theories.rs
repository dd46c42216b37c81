//! Theories as closed bounded formulas, the built-in catalog, finite model
//! enumeration and native satisfaction checkers used as cross-checks.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exec;
use crate::formulas::{classify, holds, parse_definitions, EvalConfig, EvalError, Formula, LevyClass, ParseError};
use crate::hf::{tuple, tuple_decode, Hf};
use crate::structured::{check_quasi, QuasiStructuredSet};

pub mod native;

pub const BUILTIN_THEORIES: &str = include_str!("../catalog/theories.vstar");
pub const BUILTIN_INTERPS: &str = include_str!("../catalog/interps.vstar");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("{size} atoms exceeds the enumeration cap of {cap} for theory '{theory}'")]
    BoundExceeded { theory: String, size: usize, cap: usize },
    #[error("theory '{0}' has no finite models to enumerate")]
    UnsupportedTheory(String),
    #[error("unknown theory '{0}'")]
    UnknownTheory(String),
    #[error("unknown shape '{0}'")]
    UnknownShape(String),
    #[error("theory '{name}' is {class}, not Delta0")]
    NotBounded { name: String, class: &'static str },
    #[error("not a quasi-structured set: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Candidate space the model enumerator draws structures from. Each space
/// contains every model of the theories declared with it, so filtering the
/// candidates by the theory's formula is exhaustive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Structure `∅` only.
    Empty,
    /// A single domain element.
    Pointed,
    /// Any subset of the domain.
    Subsets,
    /// Any family of subsets of the domain.
    Families,
    /// Functions sending each point to a family of sets containing it.
    Neighborhoods,
    /// Lattice orders on the domain with their meet, join, top and bottom,
    /// paired with every unary operation.
    Lattice,
    /// Distance functions with zero diagonal and off-diagonal values from a
    /// finite pool.
    Metric,
    /// A family of subsets paired with a metric candidate.
    TopMet,
    /// No finite models; enumeration is refused.
    Infinite,
}

impl Shape {
    pub fn parse(s: &str) -> Option<Shape> {
        Some(match s {
            "empty" => Shape::Empty,
            "pointed" => Shape::Pointed,
            "subsets" => Shape::Subsets,
            "families" => Shape::Families,
            "neighborhoods" => Shape::Neighborhoods,
            "lattice" => Shape::Lattice,
            "metric" => Shape::Metric,
            "topmet" => Shape::TopMet,
            "infinite" => Shape::Infinite,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Empty => "empty",
            Shape::Pointed => "pointed",
            Shape::Subsets => "subsets",
            Shape::Families => "families",
            Shape::Neighborhoods => "neighborhoods",
            Shape::Lattice => "lattice",
            Shape::Metric => "metric",
            Shape::TopMet => "topmet",
            Shape::Infinite => "infinite",
        }
    }

    /// Largest number of atoms exhaustive enumeration accepts.
    pub fn atom_cap(self) -> usize {
        match self {
            Shape::Empty | Shape::Pointed | Shape::Subsets => 6,
            Shape::Families | Shape::Neighborhoods | Shape::Metric => 3,
            Shape::Lattice => 4,
            Shape::TopMet => 2,
            Shape::Infinite => 0,
        }
    }
}

pub type NativeCheck = fn(&QuasiStructuredSet) -> bool;

#[derive(Debug, Clone)]
pub struct Theory {
    pub name: String,
    pub shape: Shape,
    pub formula: Formula,
    /// Independent satisfaction check, for the built-in theories that have
    /// one.
    pub native: Option<NativeCheck>,
}

impl Theory {
    pub fn new(name: &str, shape: Shape, formula: Formula) -> Result<Theory, TheoryError> {
        let class = classify(&formula);
        if class != LevyClass::Delta0 {
            return Err(TheoryError::NotBounded { name: name.to_string(), class: class.label() });
        }
        Ok(Theory { name: name.to_string(), shape, formula, native: native::for_theory(name) })
    }

    /// Whether `q` is a quasi-structured set satisfying the theory.
    pub fn satisfies(&self, q: &QuasiStructuredSet, config: EvalConfig) -> Result<bool, TheoryError> {
        let verdict = check_quasi(&q.domain, &q.structure);
        if let Some(v) = verdict.first() {
            return Err(TheoryError::InvalidInput(format!("clause {} fails: {}", v.clause.label(), v.message)));
        }
        Ok(holds(&self.formula, q, config)?)
    }
}

/// `@1, ..., @n`.
pub fn standard_atoms(n: usize) -> Vec<Hf> {
    (1..=n as u32).map(Hf::at).collect()
}

/// Models of a theory over a fixed set of atoms.
#[derive(Debug, Clone)]
pub struct ModelSet {
    pub theory: String,
    pub atoms: usize,
    pub candidates: usize,
    pub models: Vec<QuasiStructuredSet>,
}

/// Every model of `theory` on the atoms `@1..@n`, in canonical order.
pub fn enumerate_models(theory: &Theory, n: usize, config: EvalConfig) -> Result<ModelSet, TheoryError> {
    enumerate_models_on(theory, &standard_atoms(n), config)
}

pub fn enumerate_models_on(theory: &Theory, atoms: &[Hf], config: EvalConfig) -> Result<ModelSet, TheoryError> {
    if theory.shape == Shape::Infinite {
        return Err(TheoryError::UnsupportedTheory(theory.name.clone()));
    }
    let cap = theory.shape.atom_cap();
    if atoms.len() > cap {
        return Err(TheoryError::BoundExceeded { theory: theory.name.clone(), size: atoms.len(), cap });
    }
    let cands = candidates(theory.shape, atoms);
    let verdicts = exec::map(&cands, |c| holds(&theory.formula, c, config));
    let mut models = Vec::new();
    for (c, v) in cands.iter().zip(verdicts) {
        if v? {
            models.push(c.clone());
        }
    }
    models.sort_by(|a, b| a.structure.cmp(&b.structure));
    models.dedup();
    Ok(ModelSet { theory: theory.name.clone(), atoms: atoms.len(), candidates: cands.len(), models })
}

/// The candidate structures of a shape over `atoms`.
pub fn candidates(shape: Shape, atoms: &[Hf]) -> Vec<QuasiStructuredSet> {
    let domain = Hf::set_of(atoms.iter().cloned());
    let atoms = domain.members().to_vec();
    let with = |s: Hf| QuasiStructuredSet::new(domain.clone(), s);
    match shape {
        Shape::Empty => vec![with(Hf::empty())],
        Shape::Pointed => atoms.iter().cloned().map(with).collect(),
        Shape::Subsets => domain.powerset().members().iter().cloned().map(with).collect(),
        Shape::Families => domain.powerset().powerset().members().iter().cloned().map(with).collect(),
        Shape::Neighborhoods => neighborhood_candidates(&domain).into_iter().map(with).collect(),
        Shape::Lattice => lattice_candidates(&atoms).into_iter().map(with).collect(),
        Shape::Metric => metric_candidates(&atoms, &default_pool()).into_iter().map(with).collect(),
        Shape::TopMet => {
            let metrics = metric_candidates(&atoms, &default_pool());
            let families = domain.powerset().powerset();
            let mut out = Vec::new();
            for o in families.members() {
                for m in &metrics {
                    out.push(with(Hf::kpair(o.clone(), m.clone())));
                }
            }
            out
        }
        Shape::Infinite => Vec::new(),
    }
}

fn neighborhood_candidates(domain: &Hf) -> Vec<Hf> {
    let subsets = domain.powerset();
    // For each point, the families of subsets that contain it.
    let per_point: Vec<Vec<Hf>> = domain
        .members()
        .iter()
        .map(|y| {
            let containing = Hf::set_of(subsets.members().iter().filter(|z| z.contains(y)).cloned());
            containing.powerset().members().to_vec()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_point.len()];
    loop {
        let graph = domain
            .members()
            .iter()
            .zip(&choice)
            .enumerate()
            .map(|(i, (y, &c))| Hf::kpair(y.clone(), per_point[i][c].clone()));
        out.push(Hf::set_of(graph));
        if !odometer(&mut choice, |i| per_point[i].len()) {
            return out;
        }
    }
}

/// Advances a mixed-radix counter; false once it wraps around.
fn odometer(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Distance pool for metric candidates: 0, 1 and 2.
pub fn default_pool() -> Vec<Ratio<i64>> {
    vec![Ratio::from_integer(0), Ratio::from_integer(1), Ratio::from_integer(2)]
}

/// The graph of `(x, y) ↦ dist(i, j)` on kernel-encoded rationals.
pub fn encode_metric(atoms: &[Hf], dist: impl Fn(usize, usize) -> Ratio<i64>) -> Hf {
    let mut graph = Vec::new();
    for (i, x) in atoms.iter().enumerate() {
        for (j, y) in atoms.iter().enumerate() {
            graph.push(Hf::kpair(Hf::kpair(x.clone(), y.clone()), Hf::rational(dist(i, j))));
        }
    }
    Hf::set_of(graph)
}

pub fn metric_candidates(atoms: &[Hf], pool: &[Ratio<i64>]) -> Vec<Hf> {
    let n = atoms.len();
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; off.len()];
    loop {
        let table: BTreeMap<(usize, usize), Ratio<i64>> =
            off.iter().zip(&choice).map(|(&ij, &c)| (ij, pool[c])).collect();
        out.push(encode_metric(atoms, |i, j| table.get(&(i, j)).copied().unwrap_or_default()));
        if !odometer(&mut choice, |_| pool.len()) {
            return out;
        }
    }
}

/// Encodes operation tables on `atoms` as the structure of a Boolean
/// algebra candidate: `(meet, join, complement, top, bottom)`.
pub fn encode_operations(
    atoms: &[Hf],
    meet: impl Fn(usize, usize) -> usize,
    join: impl Fn(usize, usize) -> usize,
    neg: impl Fn(usize) -> usize,
    top: usize,
    bot: usize,
) -> Hf {
    let binary = |op: &dyn Fn(usize, usize) -> usize| {
        let mut graph = Vec::new();
        for (i, x) in atoms.iter().enumerate() {
            for (j, y) in atoms.iter().enumerate() {
                graph.push(Hf::kpair(Hf::kpair(x.clone(), y.clone()), atoms[op(i, j)].clone()));
            }
        }
        Hf::set_of(graph)
    };
    let unary = Hf::set_of(atoms.iter().enumerate().map(|(i, x)| Hf::kpair(x.clone(), atoms[neg(i)].clone())));
    tuple(&[binary(&meet), binary(&join), unary, atoms[top].clone(), atoms[bot].clone()])
}

/// Operation tables of a Boolean algebra candidate, indexed by position in
/// the sorted domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationTables {
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    pub top: usize,
    pub bot: usize,
}

/// Inverse of [`encode_operations`]; `None` unless every component is a
/// total operation on the domain.
pub fn decode_operations(q: &QuasiStructuredSet) -> Option<OperationTables> {
    let dom = q.domain.members();
    let idx = |x: &Hf| dom.binary_search(x).ok();
    let parts = tuple_decode(&q.structure, 5).ok()?;
    let binary = |g: &Hf| -> Option<Vec<Vec<usize>>> {
        let f = g.function_view().ok()?;
        if f.len() != dom.len() * dom.len() {
            return None;
        }
        let mut t = vec![vec![0; dom.len()]; dom.len()];
        for (k, v) in f.iter() {
            let (x, y) = k.kpair_decode().ok()?;
            t[idx(&x)?][idx(&y)?] = idx(v)?;
        }
        Some(t)
    };
    let nf = parts[2].function_view().ok()?;
    if nf.len() != dom.len() {
        return None;
    }
    let mut neg = vec![0; dom.len()];
    for (k, v) in nf.iter() {
        neg[idx(k)?] = idx(v)?;
    }
    Some(OperationTables {
        meet: binary(&parts[0])?,
        join: binary(&parts[1])?,
        neg,
        top: idx(&parts[3])?,
        bot: idx(&parts[4])?,
    })
}

/// Every lattice order on the atoms, with its meet, join, top and bottom,
/// combined with every unary operation.
fn lattice_candidates(atoms: &[Hf]) -> Vec<Hf> {
    let n = atoms.len();
    if n == 0 {
        return Vec::new();
    }
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut lattices = Vec::new();
    for mask in 0u64..(1u64 << off.len()) {
        let mut le = vec![vec![false; n]; n];
        for (k, &(i, j)) in off.iter().enumerate() {
            le[i][j] = mask >> k & 1 == 1;
        }
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        if let Some(l) = lattice_of(&le) {
            lattices.push(l);
        }
    }
    let mut out = Vec::new();
    for (meet, join, top, bot) in &lattices {
        let mut neg = vec![0usize; n];
        loop {
            out.push(encode_operations(atoms, |i, j| meet[i][j], |i, j| join[i][j], |i| neg[i], *top, *bot));
            if !odometer(&mut neg, |_| n) {
                break;
            }
        }
    }
    out
}

type LatticeTables = (Vec<Vec<usize>>, Vec<Vec<usize>>, usize, usize);

/// Meet and join tables plus top and bottom, if `le` is a lattice order.
fn lattice_of(le: &[Vec<bool>]) -> Option<LatticeTables> {
    let n = le.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] && le[j][i] {
                return None;
            }
            for k in 0..n {
                if le[i][j] && le[j][k] && !le[i][k] {
                    return None;
                }
            }
        }
    }
    let glb = |i: usize, j: usize| -> Option<usize> {
        let lower: Vec<usize> = (0..n).filter(|&k| le[k][i] && le[k][j]).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&k| le[k][m]))
    };
    let lub = |i: usize, j: usize| -> Option<usize> {
        let upper: Vec<usize> = (0..n).filter(|&k| le[i][k] && le[j][k]).collect();
        upper.iter().copied().find(|&m| upper.iter().all(|&k| le[m][k]))
    };
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            meet[i][j] = glb(i, j)?;
            join[i][j] = lub(i, j)?;
        }
    }
    let top = (0..n).find(|&m| (0..n).all(|k| le[k][m]))?;
    let bot = (0..n).find(|&m| (0..n).all(|k| le[m][k]))?;
    Some((meet, join, top, bot))
}

/// The algebra of subsets of a `k`-element set on `2^k` atoms, where the
/// subset with bitmask `i` is labelled `atoms[i]`.
pub fn powerset_algebra(atoms: &[Hf]) -> QuasiStructuredSet {
    let n = atoms.len();
    assert!(n.is_power_of_two(), "a powerset algebra has 2^k elements");
    let full = n - 1;
    let structure = encode_operations(atoms, |i, j| i & j, |i, j| i | j, |i| full & !i, full, 0);
    let domain = Hf::set_of(atoms.iter().cloned());
    QuasiStructuredSet::new(domain, structure)
}

/// `count` Boolean algebras of the given size on `@1..@size`: the canonical
/// labelling first, then seeded random relabellings.
pub fn bool_samples(size: usize, count: usize, seed: u64) -> Vec<QuasiStructuredSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut atoms = standard_atoms(size);
    let mut out = Vec::new();
    for k in 0..count {
        if k > 0 {
            atoms.shuffle(&mut rng);
        }
        let a = powerset_algebra(&atoms);
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

/// The theories and interpretations known by name.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub theories: BTreeMap<String, Theory>,
    pub interps: BTreeMap<String, crate::interp::Interpretation>,
}

impl Catalog {
    /// The built-in catalog.
    pub fn builtin() -> Catalog {
        let mut c = Catalog::default();
        c.load(BUILTIN_THEORIES).expect("built-in theories parse");
        c.load(BUILTIN_INTERPS).expect("built-in interpretations parse");
        c
    }

    /// Adds the definitions in `src`, replacing same-named entries.
    /// Interpretations must refer to theories that are already known or
    /// defined in the same source.
    pub fn load(&mut self, src: &str) -> Result<(), crate::interp::InterpError> {
        let file = parse_definitions(src).map_err(TheoryError::from)?;
        for t in file.theories {
            let shape = match &t.shape {
                None => Shape::Families,
                Some(s) => Shape::parse(s).ok_or_else(|| TheoryError::UnknownShape(s.clone()))?,
            };
            let theory = Theory::new(&t.name, shape, t.formula)?;
            self.theories.insert(t.name, theory);
        }
        for i in file.interps {
            for name in [&i.source, &i.target] {
                if !self.theories.contains_key(name) {
                    return Err(TheoryError::UnknownTheory(name.clone()).into());
                }
            }
            let interp = crate::interp::Interpretation::from_def(i);
            self.interps.insert(interp.name.clone(), interp);
        }
        Ok(())
    }

    pub fn theory(&self, name: &str) -> Result<&Theory, TheoryError> {
        self.theories.get(name).ok_or_else(|| TheoryError::UnknownTheory(name.to_string()))
    }
}
