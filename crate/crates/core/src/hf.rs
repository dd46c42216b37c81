//! Hereditarily finite sets over a supply of atoms.
//!
//! Every value is either an atom (memberless, identified by an [`AtomId`]) or
//! a set whose members are kept sorted and deduplicated under the global
//! order: atoms first by id, then sets lexicographically by their member
//! sequences. Values are hash-consed in a [`ValueStore`], so two values are
//! equal exactly when they share a node and equality is a pointer compare.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfError {
    #[error("value is not a Kuratowski pair: {0}")]
    NotAPair(String),
    #[error("value is not a von Neumann natural: {0}")]
    NotANat(String),
    #[error("value is not a kernel rational: {0}")]
    NotARational(String),
    #[error("value is not a function: {0}")]
    NotAFunction(String),
    #[error("literal syntax error at byte {pos}: {msg}")]
    Literal { pos: usize, msg: String },
}

/// Opaque atom label. Atoms are equal iff their ids are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

enum Kind {
    Atom(AtomId),
    Set(Box<[Hf]>),
}

struct Node {
    kind: Kind,
    hash: u64,
    rank: u32,
    pure: bool,
}

/// A canonical hereditarily finite value.
#[derive(Clone)]
pub struct Hf(Arc<Node>);

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn atom_hash(id: AtomId) -> u64 {
    mix(0xa70a_0000_0000_0000 ^ u64::from(id.0))
}

fn set_hash(children: &[Hf]) -> u64 {
    let mut h = 0x5e7_5e7_u64;
    for c in children {
        h = mix(h ^ c.0.hash);
    }
    mix(h ^ children.len() as u64)
}

const SHARDS: usize = 64;

/// Append-only interning table. Equal canonical forms always resolve to the
/// same node; nodes are never mutated or released.
pub struct ValueStore {
    shards: Vec<Mutex<FxHashMap<u64, Vec<Hf>>>>,
    next_fresh: AtomicU32,
}

impl ValueStore {
    fn new() -> Self {
        ValueStore {
            shards: (0..SHARDS).map(|_| Mutex::new(FxHashMap::default())).collect(),
            next_fresh: AtomicU32::new(1 << 30),
        }
    }

    /// The process-wide store used by every constructor on [`Hf`].
    pub fn global() -> &'static ValueStore {
        static STORE: OnceLock<ValueStore> = OnceLock::new();
        STORE.get_or_init(ValueStore::new)
    }

    /// Allocates an atom id that no literal below `2^30` can collide with.
    pub fn fresh_atom(&self) -> AtomId {
        AtomId(self.next_fresh.fetch_add(1, AtomicOrdering::Relaxed))
    }

    /// Number of interned nodes.
    pub fn len(&self) -> usize {
        self.shards
            .iter()
            .map(|s| s.lock().unwrap().values().map(Vec::len).sum::<usize>())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn intern_atom(&self, id: AtomId) -> Hf {
        let hash = atom_hash(id);
        let mut table = self.shards[(hash as usize) % SHARDS].lock().unwrap();
        let bucket = table.entry(hash).or_default();
        if let Some(x) = bucket.iter().find(|x| x.as_atom() == Some(id)) {
            return x.clone();
        }
        let node = Hf(Arc::new(Node { kind: Kind::Atom(id), hash, rank: 0, pure: false }));
        bucket.push(node.clone());
        node
    }

    /// Looks up or inserts the set with these canonical members. Only a miss
    /// allocates.
    fn intern_set(&self, cs: &[Hf]) -> Hf {
        let hash = set_hash(cs);
        let mut table = self.shards[(hash as usize) % SHARDS].lock().unwrap();
        let bucket = table.entry(hash).or_default();
        let found = bucket.iter().find(|x| match &x.0.kind {
            Kind::Set(a) => a.len() == cs.len() && a.iter().zip(cs).all(|(x, y)| Arc::ptr_eq(&x.0, &y.0)),
            Kind::Atom(_) => false,
        });
        if let Some(x) = found {
            return x.clone();
        }
        let rank = cs.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
        let pure = cs.iter().all(|c| c.0.pure);
        let node = Hf(Arc::new(Node { kind: Kind::Set(cs.into()), hash, rank, pure }));
        bucket.push(node.clone());
        node
    }
}

impl PartialEq for Hf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Hf {}

impl Hash for Hf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Hf {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Atom(a), Kind::Atom(b)) => a.cmp(b),
            (Kind::Atom(_), Kind::Set(_)) => Ordering::Less,
            (Kind::Set(_), Kind::Atom(_)) => Ordering::Greater,
            (Kind::Set(a), Kind::Set(b)) => a.iter().cmp(b.iter()),
        }
    }
}

impl PartialOrd for Hf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hf {
    pub fn atom(id: AtomId) -> Hf {
        ValueStore::global().intern_atom(id)
    }

    /// Shorthand for `Hf::atom(AtomId(id))`.
    pub fn at(id: u32) -> Hf {
        Hf::atom(AtomId(id))
    }

    pub fn empty() -> Hf {
        Hf::from_sorted(Vec::new())
    }

    /// Canonical set with the given members.
    pub fn set_of<I: IntoIterator<Item = Hf>>(children: I) -> Hf {
        let mut cs: Vec<Hf> = children.into_iter().collect();
        cs.sort();
        cs.dedup();
        Hf::from_sorted(cs)
    }

    /// Builds a set from members already in canonical order without duplicates.
    pub(crate) fn from_sorted(cs: Vec<Hf>) -> Hf {
        Hf::from_sorted_slice(&cs)
    }

    fn from_sorted_slice(cs: &[Hf]) -> Hf {
        debug_assert!(cs.windows(2).all(|w| w[0] < w[1]), "members not canonical");
        ValueStore::global().intern_set(cs)
    }

    pub fn singleton(x: Hf) -> Hf {
        Hf::from_sorted_slice(&[x])
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.0.kind, Kind::Atom(_))
    }

    pub fn is_set(&self) -> bool {
        !self.is_atom()
    }

    pub fn as_atom(&self) -> Option<AtomId> {
        match self.0.kind {
            Kind::Atom(id) => Some(id),
            Kind::Set(_) => None,
        }
    }

    /// Members in canonical order; empty for atoms and for ∅.
    pub fn members(&self) -> &[Hf] {
        match &self.0.kind {
            Kind::Atom(_) => &[],
            Kind::Set(cs) => cs,
        }
    }

    pub fn len(&self) -> usize {
        self.members().len()
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(&self.0.kind, Kind::Set(cs) if cs.is_empty())
    }

    /// `x ∈ self`. Always false when `self` is an atom.
    pub fn contains(&self, x: &Hf) -> bool {
        self.members().binary_search(x).is_ok()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    /// True iff no atom occurs in `trcl({self})`.
    pub fn is_pure(&self) -> bool {
        self.0.pure
    }

    /// Structural hash, stable across runs.
    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// Every value reachable from `self` by one or more membership steps.
    pub fn trcl(&self) -> Hf {
        Hf::set_of(self.trcl_set())
    }

    pub fn trcl_set(&self) -> HashSet<Hf> {
        let mut seen = HashSet::new();
        let mut stack: Vec<&Hf> = self.members().iter().collect();
        while let Some(x) = stack.pop() {
            if seen.insert(x.clone()) {
                stack.extend(x.members().iter());
            }
        }
        seen
    }

    /// Atoms occurring in `trcl({self})`, in id order.
    pub fn atoms(&self) -> Vec<AtomId> {
        let mut out = std::collections::BTreeSet::new();
        if let Some(a) = self.as_atom() {
            out.insert(a);
        }
        for x in self.trcl_set() {
            if let Some(a) = x.as_atom() {
                out.insert(a);
            }
        }
        out.into_iter().collect()
    }

    pub fn is_subset(&self, other: &Hf) -> bool {
        self.is_set() && self.members().iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &Hf) -> Hf {
        Hf::from_sorted(merge_sorted(self.members(), other.members()))
    }

    pub fn intersection(&self, other: &Hf) -> Hf {
        Hf::from_sorted(self.members().iter().filter(|x| other.contains(x)).cloned().collect())
    }

    pub fn difference(&self, other: &Hf) -> Hf {
        Hf::from_sorted(self.members().iter().filter(|x| !other.contains(x)).cloned().collect())
    }

    /// `⋃self`; members that are atoms contribute nothing.
    pub fn big_union(&self) -> Hf {
        Hf::set_of(self.members().iter().flat_map(|m| m.members().iter().cloned()))
    }

    /// All subsets of `self` (∅ and `self` included). An atom has only ∅.
    pub fn powerset(&self) -> Hf {
        let ms = self.members();
        assert!(ms.len() < 31, "powerset of a {}-element set", ms.len());
        let subsets = (0u32..(1 << ms.len())).map(|mask| {
            Hf::from_sorted(
                ms.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, m)| m.clone())
                    .collect(),
            )
        });
        Hf::set_of(subsets)
    }

    /// `{kpair(x, y) | x ∈ self, y ∈ other}`.
    pub fn product(&self, other: &Hf) -> Hf {
        Hf::set_of(
            self.members()
                .iter()
                .flat_map(|x| other.members().iter().map(move |y| Hf::kpair(x.clone(), y.clone()))),
        )
    }

    /// Kuratowski pair `{{x}, {x, y}}`.
    pub fn kpair(x: Hf, y: Hf) -> Hf {
        // {x} precedes {x, y} exactly when x < y, so no sorting is needed.
        match x.cmp(&y) {
            Ordering::Equal => Hf::singleton(Hf::singleton(x)),
            Ordering::Less => {
                let pair = Hf::from_sorted_slice(&[x.clone(), y]);
                Hf::from_sorted_slice(&[Hf::singleton(x), pair])
            }
            Ordering::Greater => {
                let pair = Hf::from_sorted_slice(&[y, x.clone()]);
                Hf::from_sorted_slice(&[pair, Hf::singleton(x)])
            }
        }
    }

    pub fn kpair_decode(&self) -> Result<(Hf, Hf), HfError> {
        let bad = || HfError::NotAPair(self.to_string());
        match self.members() {
            [single] => match single.members() {
                [x] if single.is_set() => Ok((x.clone(), x.clone())),
                _ => Err(bad()),
            },
            [a, b] => {
                // {x} sorts before {x, y} only when x < y; handle both orders.
                let (one, two) = if a.len() == 1 { (a, b) } else { (b, a) };
                match (one.members(), two.members()) {
                    ([x], [p, q]) if one.is_set() && two.is_set() => {
                        if x == p {
                            Ok((x.clone(), q.clone()))
                        } else if x == q {
                            Ok((x.clone(), p.clone()))
                        } else {
                            Err(bad())
                        }
                    }
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }

    /// Von Neumann natural: `0 ↦ ∅`, `n+1 ↦ n ∪ {n}`.
    pub fn nat(n: u64) -> Hf {
        let mut cur = Hf::empty();
        let mut members: Vec<Hf> = Vec::new();
        for _ in 0..n {
            members.push(cur.clone());
            cur = Hf::set_of(members.iter().cloned());
        }
        cur
    }

    pub fn nat_decode(&self) -> Result<u64, HfError> {
        let n = self.len() as u64;
        if self.is_set() && *self == Hf::nat(n) {
            Ok(n)
        } else {
            Err(HfError::NotANat(self.to_string()))
        }
    }

    /// Kernel rational `kpair(kpair(sign, |p|), q)` in lowest terms with
    /// `q > 0`; `sign` is the natural 0 for non-negative and 1 for negative.
    pub fn rational(r: Ratio<i64>) -> Hf {
        let sign = if *r.numer() < 0 { 1 } else { 0 };
        let numer = Hf::kpair(Hf::nat(sign), Hf::nat(r.numer().unsigned_abs()));
        Hf::kpair(numer, Hf::nat(*r.denom() as u64))
    }

    pub fn rational_decode(&self) -> Result<Ratio<i64>, HfError> {
        let bad = || HfError::NotARational(self.to_string());
        if !self.is_pure() {
            return Err(bad());
        }
        let (numer, denom) = self.kpair_decode().map_err(|_| bad())?;
        let (sign, mag) = numer.kpair_decode().map_err(|_| bad())?;
        let sign = sign.nat_decode().map_err(|_| bad())?;
        let mag = mag.nat_decode().map_err(|_| bad())? as i64;
        let denom = denom.nat_decode().map_err(|_| bad())? as i64;
        if denom == 0 || sign > 1 || (sign == 1 && mag == 0) {
            return Err(bad());
        }
        let r = Ratio::new(if sign == 1 { -mag } else { mag }, denom);
        // Only the lowest-terms encoding is canonical.
        if Hf::rational(r) != *self {
            return Err(bad());
        }
        Ok(r)
    }

    pub fn function_view(&self) -> Result<FunctionView, HfError> {
        FunctionView::new(self)
    }

    /// Parses the textual literal syntax (`@3`, `{}`, `{@1, {@2}}`).
    pub fn parse(text: &str) -> Result<Hf, HfError> {
        let mut p = LiteralParser { src: text.as_bytes(), pos: 0 };
        let v = p.value()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

fn merge_sorted(a: &[Hf], b: &[Hf]) -> Vec<Hf> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Atom(id) => write!(f, "{id}"),
            Kind::Set(cs) => {
                f.write_str("{")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Hf {
    type Err = HfError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hf::parse(s)
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LiteralParser<'_> {
    fn err(&self, msg: &str) -> HfError {
        HfError::Literal { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn value(&mut self) -> Result<Hf, HfError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'@') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let id: u32 = digits.parse().map_err(|_| self.err("expected atom id after '@'"))?;
                Ok(Hf::at(id))
            }
            Some(b'{') => {
                self.pos += 1;
                let mut members = Vec::new();
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'}') {
                    self.pos += 1;
                    return Ok(Hf::empty());
                }
                loop {
                    members.push(self.value()?);
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(Hf::set_of(members));
                        }
                        _ => return Err(self.err("expected ',' or '}'")),
                    }
                }
            }
            _ => Err(self.err("expected '@' or '{'")),
        }
    }
}

/// Read-only view of a set of Kuratowski pairs with functional first
/// coordinates.
#[derive(Debug, Clone)]
pub struct FunctionView {
    map: BTreeMap<Hf, Hf>,
}

impl FunctionView {
    fn new(f: &Hf) -> Result<Self, HfError> {
        if f.is_atom() {
            return Err(HfError::NotAFunction(f.to_string()));
        }
        let mut map = BTreeMap::new();
        for p in f.members() {
            let (x, y) = p.kpair_decode().map_err(|_| HfError::NotAFunction(f.to_string()))?;
            if let Some(prev) = map.insert(x, y.clone()) {
                if prev != y {
                    return Err(HfError::NotAFunction(f.to_string()));
                }
            }
        }
        Ok(FunctionView { map })
    }

    pub fn lookup(&self, x: &Hf) -> Option<&Hf> {
        self.map.get(x)
    }

    pub fn domain(&self) -> Hf {
        Hf::from_sorted(self.map.keys().cloned().collect())
    }

    pub fn range(&self) -> Hf {
        Hf::set_of(self.map.values().cloned())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Hf, &Hf)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Builds an n-tuple as right-nested Kuratowski pairs; a 1-tuple is the
/// element itself.
pub fn tuple(items: &[Hf]) -> Hf {
    match items {
        [] => Hf::empty(),
        [x] => x.clone(),
        [x, rest @ ..] => Hf::kpair(x.clone(), tuple(rest)),
    }
}

/// Inverse of [`tuple`] for a known arity.
pub fn tuple_decode(v: &Hf, arity: usize) -> Result<Vec<Hf>, HfError> {
    match arity {
        0 => Ok(Vec::new()),
        1 => Ok(vec![v.clone()]),
        _ => {
            let (x, rest) = v.kpair_decode()?;
            let mut out = vec![x];
            out.extend(tuple_decode(&rest, arity - 1)?);
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Hf {
        Hf::at(1)
    }
    fn v() -> Hf {
        Hf::at(2)
    }
    fn w() -> Hf {
        Hf::at(3)
    }
    fn lit(s: &str) -> Hf {
        Hf::parse(s).unwrap()
    }

    #[test]
    fn set_of_canonicalizes() {
        assert_eq!(Hf::set_of([u(), u(), v()]), lit("{@1, @2}"));
        assert_eq!(Hf::set_of([v(), u()]), Hf::set_of([u(), v()]));
        assert_eq!(Hf::set_of([]).to_string(), "{}");
        assert_eq!(Hf::set_of([v(), u()]).to_string(), "{@1, @2}");
    }

    #[test]
    fn membership() {
        let uv = Hf::set_of([u(), v()]);
        assert!(uv.contains(&u()));
        assert!(!v().contains(&u()));
        assert!(!Hf::singleton(u()).contains(&Hf::singleton(u())));
    }

    #[test]
    fn transitive_closure() {
        assert_eq!(lit("{{@1}}").trcl(), lit("{@1, {@1}}"));
        assert_eq!(u().trcl(), Hf::empty());
        assert_eq!(lit("{{}, {{}}}").trcl(), lit("{{}, {{}}}"));
    }

    #[test]
    fn ranks() {
        assert_eq!(u().rank(), 0);
        assert_eq!(Hf::empty().rank(), 0);
        assert_eq!(lit("{@1}").rank(), 1);
        assert_eq!(lit("{{@1}, @2}").rank(), 2);
    }

    #[test]
    fn purity() {
        assert!(Hf::empty().is_pure());
        assert!(!lit("{@1}").is_pure());
        assert!(lit("{{}, {{}}}").is_pure());
        assert!(!u().is_pure());
    }

    #[test]
    fn kuratowski_pairs() {
        assert_eq!(Hf::kpair(u(), v()), lit("{{@1}, {@1, @2}}"));
        assert_eq!(Hf::kpair(u(), u()), lit("{{@1}}"));
        assert_eq!(lit("{{@1},{@1,@2}}").kpair_decode().unwrap(), (u(), v()));
        // first coordinate larger than the second
        assert_eq!(Hf::kpair(v(), u()).kpair_decode().unwrap(), (v(), u()));
        assert!(matches!(lit("{@1, @2}").kpair_decode(), Err(HfError::NotAPair(_))));
        assert!(u().kpair_decode().is_err());
    }

    #[test]
    fn naturals() {
        assert_eq!(Hf::nat(0), Hf::empty());
        assert_eq!(Hf::nat(2), lit("{{}, {{}}}"));
        assert_eq!(lit("{{}}").nat_decode().unwrap(), 1);
        assert!(matches!(lit("{{{}}}").nat_decode(), Err(HfError::NotANat(_))));
        assert!(u().nat_decode().is_err());
        for n in 0..6 {
            assert_eq!(Hf::nat(n).nat_decode().unwrap(), n);
            assert_eq!(Hf::nat(n).rank() as u64, n);
        }
    }

    #[test]
    fn rationals_round_trip() {
        for (p, q) in [(0, 1), (1, 1), (2, 1), (-3, 4), (6, 8)] {
            let r = Ratio::new(p, q);
            assert_eq!(Hf::rational(r).rational_decode().unwrap(), r);
        }
        assert_eq!(Hf::rational(Ratio::new(6, 8)), Hf::rational(Ratio::new(3, 4)));
        assert!(Hf::nat(3).rational_decode().is_err());
    }

    #[test]
    fn function_views() {
        let f = Hf::set_of([Hf::kpair(u(), Hf::singleton(u()))]);
        assert_eq!(f.function_view().unwrap().lookup(&u()), Some(&Hf::singleton(u())));
        let g = Hf::set_of([Hf::kpair(u(), v()), Hf::kpair(u(), w())]);
        assert!(matches!(g.function_view(), Err(HfError::NotAFunction(_))));
        let e = Hf::empty().function_view().unwrap();
        assert_eq!(e.domain(), Hf::empty());
        assert!(e.is_empty());
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(lit(" { @2 ,@1 } ").to_string(), "{@1, @2}");
        assert!(Hf::parse("{@1").is_err());
        assert!(Hf::parse("@x").is_err());
        assert!(Hf::parse("{} {}").is_err());
    }

    #[test]
    fn global_order_puts_atoms_first() {
        let s = Hf::set_of([Hf::empty(), v(), lit("{@1}"), u(), lit("{{}}")]);
        assert_eq!(s.to_string(), "{@1, @2, {}, {@1}, {{}}}");
    }

    #[test]
    fn set_algebra() {
        let a = lit("{@1, @2}");
        let b = lit("{@2, @3}");
        assert_eq!(a.union(&b), lit("{@1,@2,@3}"));
        assert_eq!(a.intersection(&b), lit("{@2}"));
        assert_eq!(a.difference(&b), lit("{@1}"));
        assert_eq!(a.powerset().len(), 4);
        assert_eq!(lit("{{@1}, {@2, @3}, @4}").big_union(), lit("{@1, @2, @3}"));
        assert_eq!(a.product(&b).len(), 4);
        assert!(lit("{@1}").is_subset(&a));
        assert!(!u().is_subset(&a));
    }

    #[test]
    fn tuples() {
        let t = tuple(&[u(), v(), w()]);
        assert_eq!(tuple_decode(&t, 3).unwrap(), vec![u(), v(), w()]);
        assert_eq!(tuple(&[u()]), u());
    }
}
