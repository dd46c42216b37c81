//! Structured and quasi-structured sets: validity, field, lift and
//! isomorphism.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rustc_hash::FxHashMap;
use std::fmt;

use thiserror::Error;

use crate::hf::{AtomId, Hf, HfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructError {
    #[error("invalid quasi-structured set: {0}")]
    InvalidInput(String),
    #[error("atom map has no image for {0}")]
    IncompleteMap(String),
    #[error("atom map is not functional at {0}")]
    NotFunctional(String),
    #[error("domain has {size} elements, above the search cap of {cap}")]
    BoundExceeded { size: usize, cap: usize },
    #[error("malformed structured-set literal: {0}")]
    Syntax(String),
    #[error(transparent)]
    Hf(#[from] HfError),
}

/// A domain value paired with a structure value. No validity is implied;
/// see [`check_quasi`] and [`check_structured`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiStructuredSet {
    pub domain: Hf,
    pub structure: Hf,
}

impl QuasiStructuredSet {
    pub fn new(domain: Hf, structure: Hf) -> Self {
        QuasiStructuredSet { domain, structure }
    }

    /// Parses `<domain-literal> ; <structure-literal>`.
    pub fn parse(text: &str) -> Result<Self, StructError> {
        let (d, s) = text
            .split_once(';')
            .ok_or_else(|| StructError::Syntax(format!("expected '<domain> ; <structure>', got {text:?}")))?;
        Ok(QuasiStructuredSet::new(Hf::parse(d.trim())?, Hf::parse(s.trim())?))
    }

    /// The pair `kpair(domain, structure)` as a single value.
    pub fn as_value(&self) -> Hf {
        Hf::kpair(self.domain.clone(), self.structure.clone())
    }
}

impl fmt::Display for QuasiStructuredSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.domain, self.structure)
    }
}

impl fmt::Debug for QuasiStructuredSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

/// A quasi-structured set whose domain is a set of atoms and whose
/// structure mentions no atoms outside the domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructuredSet(QuasiStructuredSet);

impl StructuredSet {
    pub fn new(domain: Hf, structure: Hf) -> Result<Self, StructuredVerdict> {
        let verdict = check_structured(&domain, &structure);
        if verdict.valid() {
            Ok(StructuredSet(QuasiStructuredSet::new(domain, structure)))
        } else {
            Err(verdict)
        }
    }

    pub fn as_quasi(&self) -> &QuasiStructuredSet {
        &self.0
    }

    pub fn into_quasi(self) -> QuasiStructuredSet {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredVerdict {
    /// Domain members that are not atoms.
    pub non_atoms: Vec<Hf>,
    /// Atoms in `trcl({structure})` missing from the domain.
    pub foreign_atoms: Vec<AtomId>,
    /// Whether the stricter reading, where every value in the structure's
    /// closure must itself be a domain atom, also holds.
    pub strict_reading_holds: bool,
}

impl StructuredVerdict {
    pub fn valid(&self) -> bool {
        self.non_atoms.is_empty() && self.foreign_atoms.is_empty()
    }
}

impl fmt::Display for StructuredVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            write!(f, "valid")?;
        } else {
            write!(f, "invalid")?;
            if !self.non_atoms.is_empty() {
                write!(f, "; non-atom domain members: {:?}", self.non_atoms)?;
            }
            if !self.foreign_atoms.is_empty() {
                let ids: Vec<String> = self.foreign_atoms.iter().map(|a| a.to_string()).collect();
                write!(f, "; foreign atoms: {}", ids.join(", "))?;
            }
        }
        if !self.strict_reading_holds {
            write!(f, " (fails the strict closure-of-atoms reading)")?;
        }
        Ok(())
    }
}

pub fn check_structured(domain: &Hf, structure: &Hf) -> StructuredVerdict {
    let non_atoms = if domain.is_atom() {
        vec![domain.clone()]
    } else {
        domain.members().iter().filter(|x| x.is_set()).cloned().collect()
    };
    let closure = Hf::singleton(structure.clone()).trcl_set();
    let mut foreign = Vec::new();
    let mut strict = true;
    for x in &closure {
        match x.as_atom() {
            Some(id) if !domain.contains(x) => foreign.push(id),
            Some(_) => {}
            None => strict = false,
        }
    }
    foreign.sort();
    StructuredVerdict { non_atoms, foreign_atoms: foreign, strict_reading_holds: strict && domain.is_set() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// `∅ ∉ trcl(B)`
    EmptyInClosure,
    /// no domain element lies in the closure of another
    Tangled,
    /// structure atoms lie in `trcl(B)`
    ForeignAtom,
    /// every path from a value below `B` up to the structure meets `B`
    PathAvoidsDomain,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::EmptyInClosure => "1(a)",
            Clause::Tangled => "1(b)",
            Clause::ForeignAtom => "2(a)",
            Clause::PathAvoidsDomain => "2(b)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub message: String,
    /// Offending values; for [`Clause::PathAvoidsDomain`] this is the path
    /// from the low value up to the structure.
    pub witness: Vec<Hf>,
}

/// Per-clause result of [`check_quasi`], violations in clause order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuasiVerdict {
    pub violations: Vec<Violation>,
}

impl QuasiVerdict {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for QuasiVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "valid"),
            Some(v) => {
                write!(f, "clause {} violated: {}", v.clause.label(), v.message)?;
                if !v.witness.is_empty() {
                    let w: Vec<String> = v.witness.iter().map(|x| x.to_string()).collect();
                    write!(f, " [witness: {}]", w.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

pub fn check_quasi(domain: &Hf, structure: &Hf) -> QuasiVerdict {
    let mut violations = Vec::new();
    if domain.is_atom() {
        violations.push(Violation {
            clause: Clause::EmptyInClosure,
            message: "domain is an atom".into(),
            witness: vec![domain.clone()],
        });
        return QuasiVerdict { violations };
    }
    let domain_closure = domain.trcl_set();
    let empty = Hf::empty();
    if domain_closure.contains(&empty) {
        violations.push(Violation {
            clause: Clause::EmptyInClosure,
            message: "the empty set lies in the closure of the domain".into(),
            witness: vec![empty],
        });
    }
    'outer: for x in domain.members() {
        for y in domain.members() {
            if x != y && y.is_set() && y.trcl_set().contains(x) {
                violations.push(Violation {
                    clause: Clause::Tangled,
                    message: format!("{x} lies in the closure of {y}"),
                    witness: vec![x.clone(), y.clone()],
                });
                break 'outer;
            }
        }
    }
    let closure = Hf::singleton(structure.clone()).trcl_set();
    let mut foreign: Vec<&Hf> = closure.iter().filter(|x| x.is_atom() && !domain_closure.contains(*x)).collect();
    foreign.sort();
    if let Some(a) = foreign.first() {
        violations.push(Violation {
            clause: Clause::ForeignAtom,
            message: format!("atom {a} occurs in the structure but not below the domain"),
            witness: foreign.iter().map(|x| (*x).clone()).collect(),
        });
    }
    if let Some(path) = path_avoiding_domain(domain, structure) {
        violations.push(Violation {
            clause: Clause::PathAvoidsDomain,
            message: format!("{} is below the domain but reaches the structure without meeting it", path[0]),
            witness: path,
        });
    }
    QuasiVerdict { violations }
}

/// Shortest membership path `⟨d, ..., structure⟩` that never touches the
/// domain, for the least `d` (in canonical order) below the domain admitting
/// one.
fn path_avoiding_domain(domain: &Hf, structure: &Hf) -> Option<Vec<Hf>> {
    if domain.contains(structure) {
        return None;
    }
    // Breadth-first downward from the structure through values outside B;
    // `parent` records the value each node was first reached from.
    let mut parent: HashMap<Hf, Hf> = HashMap::new();
    let mut queue = VecDeque::from([structure.clone()]);
    let mut seen: HashSet<Hf> = HashSet::from([structure.clone()]);
    while let Some(y) = queue.pop_front() {
        for m in y.members() {
            if domain.contains(m) || !seen.insert(m.clone()) {
                continue;
            }
            parent.insert(m.clone(), y.clone());
            queue.push_back(m.clone());
        }
    }
    let below: HashSet<Hf> = domain.members().iter().flat_map(|e| e.trcl_set()).collect();
    let mut candidates: Vec<&Hf> = parent.keys().filter(|d| below.contains(*d)).collect();
    candidates.sort();
    let d = candidates.first()?;
    let mut path = vec![(*d).clone()];
    let mut cur = (*d).clone();
    while let Some(p) = parent.get(&cur) {
        path.push(p.clone());
        cur = p.clone();
    }
    Some(path)
}

fn require_valid(q: &QuasiStructuredSet) -> Result<(), StructError> {
    let verdict = check_quasi(&q.domain, &q.structure);
    if verdict.valid() {
        Ok(())
    } else {
        Err(StructError::InvalidInput(verdict.to_string()))
    }
}

/// Whether `x` lies in the universe built over `domain` with the domain's
/// elements playing the role of atoms.
pub fn in_universe(domain: &Hf, x: &Hf) -> bool {
    fn go(domain: &Hf, x: &Hf, memo: &mut HashMap<Hf, bool>) -> bool {
        if x.is_pure() || domain.contains(x) {
            return true;
        }
        if x.is_atom() {
            return false;
        }
        if let Some(&r) = memo.get(x) {
            return r;
        }
        let r = x.members().iter().all(|m| go(domain, m, memo));
        memo.insert(x.clone(), r);
        r
    }
    go(domain, x, &mut HashMap::new())
}

/// `(A ∪ trcl({a})) ∩ V(A)`.
pub fn field(q: &QuasiStructuredSet) -> Result<Hf, StructError> {
    require_valid(q)?;
    Ok(field_unchecked(q))
}

pub(crate) fn field_unchecked(q: &QuasiStructuredSet) -> Hf {
    let mut all = Hf::singleton(q.structure.clone()).trcl_set();
    all.extend(q.domain.members().iter().cloned());
    Hf::set_of(all.into_iter().filter(|x| in_universe(&q.domain, x)))
}

/// A finite map between domains. Keys need not be atoms, since quasi
/// domains may contain sets.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AtomMap {
    map: BTreeMap<Hf, Hf>,
}

impl AtomMap {
    pub fn new<I: IntoIterator<Item = (Hf, Hf)>>(pairs: I) -> Result<Self, StructError> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            if let Some(prev) = map.insert(k.clone(), v.clone()) {
                if prev != v {
                    return Err(StructError::NotFunctional(k.to_string()));
                }
            }
        }
        Ok(AtomMap { map })
    }

    pub fn identity(domain: &Hf) -> Self {
        AtomMap { map: domain.members().iter().map(|x| (x.clone(), x.clone())).collect() }
    }

    /// Pairs `from[i] -> to[perm[i]]`.
    pub fn from_permutation(from: &[Hf], to: &[Hf], perm: &[usize]) -> Self {
        AtomMap { map: from.iter().zip(perm).map(|(x, &j)| (x.clone(), to[j].clone())).collect() }
    }

    pub fn get(&self, x: &Hf) -> Option<&Hf> {
        self.map.get(x)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Hf, &Hf)> {
        self.map.iter()
    }

    pub fn domain(&self) -> Hf {
        Hf::set_of(self.map.keys().cloned())
    }

    pub fn range(&self) -> Hf {
        Hf::set_of(self.map.values().cloned())
    }

    pub fn is_injective(&self) -> bool {
        self.range().len() == self.map.len()
    }

    /// Whether this is a bijection from exactly `from` onto exactly `to`.
    pub fn is_bijection(&self, from: &Hf, to: &Hf) -> bool {
        self.domain() == *from && self.range() == *to && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.is_injective()
            .then(|| AtomMap { map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect() })
    }

    /// `g ∘ self`, defined where both steps are.
    pub fn then(&self, g: &AtomMap) -> AtomMap {
        AtomMap { map: self.map.iter().filter_map(|(k, v)| g.get(v).map(|w| (k.clone(), w.clone()))).collect() }
    }

    /// Parses a whitespace- or comma-separated list of `x->y` pairs.
    pub fn parse(text: &str) -> Result<Self, StructError> {
        let mut pairs = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let (lhs, tail) = rest
                .split_once("->")
                .ok_or_else(|| StructError::Syntax(format!("expected '->' in {rest:?}")))?;
            let tail = tail.trim_start();
            let end = literal_end(tail).ok_or_else(|| StructError::Syntax(format!("bad image in {tail:?}")))?;
            pairs.push((Hf::parse(lhs.trim().trim_start_matches(','))?, Hf::parse(&tail[..end])?));
            rest = tail[end..].trim_start().trim_start_matches(',').trim_start();
        }
        AtomMap::new(pairs)
    }
}

fn literal_end(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    match bytes.first()? {
        b'@' => Some(1 + bytes[1..].iter().take_while(|c| c.is_ascii_digit()).count()),
        b'{' => {
            let mut depth = 0i32;
            for (i, c) in bytes.iter().enumerate() {
                match c {
                    b'{' => depth += 1,
                    b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            return Some(i + 1);
                        }
                    }
                    _ => {}
                }
            }
            None
        }
        _ => None,
    }
}

impl fmt::Display for AtomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(k, v)| format!("{k}->{v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for AtomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Memoizing evaluator of `f⁺`: pure values are fixed, domain elements go
/// through `f`, and other sets are rebuilt memberwise. Atoms outside the
/// domain are left alone.
pub struct Lift<'a> {
    f: &'a AtomMap,
    domain: &'a Hf,
    memo: FxHashMap<Hf, Hf>,
}

impl<'a> Lift<'a> {
    pub fn new(f: &'a AtomMap, domain: &'a Hf) -> Self {
        Lift { f, domain, memo: FxHashMap::default() }
    }

    pub fn apply(&mut self, x: &Hf) -> Result<Hf, StructError> {
        if x.is_pure() {
            return Ok(x.clone());
        }
        if self.domain.contains(x) {
            return self.f.get(x).cloned().ok_or_else(|| StructError::IncompleteMap(x.to_string()));
        }
        if x.is_atom() {
            return Ok(x.clone());
        }
        if let Some(y) = self.memo.get(x) {
            return Ok(y.clone());
        }
        let members = x.members().iter().map(|m| self.apply(m)).collect::<Result<Vec<_>, _>>()?;
        let y = Hf::set_of(members);
        self.memo.insert(x.clone(), y.clone());
        Ok(y)
    }
}

/// `f⁺(x)` for a single value.
pub fn lift_value(f: &AtomMap, domain: &Hf, x: &Hf) -> Result<Hf, StructError> {
    Lift::new(f, domain).apply(x)
}

/// The lift of `f` over `field(source)`, as `(x, f⁺(x))` pairs in canonical
/// order of `x`.
pub fn lift(f: &AtomMap, source: &QuasiStructuredSet) -> Result<Vec<(Hf, Hf)>, StructError> {
    require_valid(source)?;
    for x in source.domain.members() {
        if f.get(x).is_none() {
            return Err(StructError::IncompleteMap(x.to_string()));
        }
    }
    let mut l = Lift::new(f, &source.domain);
    field_unchecked(source).members().iter().map(|x| Ok((x.clone(), l.apply(x)?))).collect()
}

/// `f` is a bijection between the domains and `f⁺(a.structure) = b.structure`.
pub fn is_isomorphism(f: &AtomMap, a: &QuasiStructuredSet, b: &QuasiStructuredSet) -> bool {
    f.is_bijection(&a.domain, &b.domain)
        && lift_value(f, &a.domain, &a.structure).is_ok_and(|s| s == b.structure)
}
