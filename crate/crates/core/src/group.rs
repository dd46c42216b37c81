//! Isomorphism search between quasi-structured sets, automorphism groups,
//! and isomorphism testing for small finite groups.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::exec;
use crate::hf::Hf;
use crate::structured::{lift_value, AtomMap, QuasiStructuredSet, StructError};

pub const DEFAULT_DOMAIN_CAP: usize = 8;
pub const DEFAULT_GROUP_CAP: usize = 64;

/// Per-domain-element invariant: for every non-pure set `y` above the
/// element in the structure's closure, its height over the domain, its
/// size, and whether the element is a direct member. Isomorphisms can only
/// pair elements with equal signatures.
type Signature = Vec<(u32, usize, bool)>;

fn signatures(q: &QuasiStructuredSet) -> Vec<Signature> {
    let dom = q.domain.members();
    let index: HashMap<&Hf, usize> = dom.iter().enumerate().map(|(i, x)| (x, i)).collect();
    // node -> (height, bitmask of domain elements below)
    let mut memo: HashMap<Hf, (u32, u128)> = HashMap::new();
    fn visit(
        y: &Hf,
        index: &HashMap<&Hf, usize>,
        memo: &mut HashMap<Hf, (u32, u128)>,
    ) -> (u32, u128) {
        if let Some(&i) = index.get(y) {
            return (0, 1u128 << i);
        }
        if y.is_pure() || y.is_atom() {
            return (0, 0);
        }
        if let Some(&r) = memo.get(y) {
            return r;
        }
        let mut h = 0;
        let mut mask = 0;
        for m in y.members() {
            let (mh, mm) = visit(m, index, memo);
            h = h.max(mh + 1);
            mask |= mm;
        }
        memo.insert(y.clone(), (h, mask));
        (h, mask)
    }
    visit(&Hf::singleton(q.structure.clone()), &index, &mut memo);
    let mut sigs: Vec<Signature> = vec![Vec::new(); dom.len()];
    for (y, &(h, mask)) in &memo {
        for (i, sig) in sigs.iter_mut().enumerate() {
            if mask & (1u128 << i) != 0 {
                sig.push((h, y.len(), y.contains(&dom[i])));
            }
        }
    }
    for s in &mut sigs {
        s.sort_unstable();
    }
    sigs
}

/// All isomorphisms from `a` to `b` (up to `limit` of them), as
/// permutations `perm` with `a.domain[i] -> b.domain[perm[i]]`, in
/// lexicographic order.
pub fn isomorphism_perms(
    a: &QuasiStructuredSet,
    b: &QuasiStructuredSet,
    cap: usize,
    limit: Option<usize>,
) -> Result<Vec<Vec<usize>>, StructError> {
    let n = a.domain.len();
    if n > cap || b.domain.len() > cap {
        return Err(StructError::BoundExceeded { size: n.max(b.domain.len()), cap });
    }
    if n != b.domain.len() || n > 128 {
        return Ok(Vec::new());
    }
    let sa = signatures(a);
    let sb = signatures(b);
    let mut ma = sa.clone();
    let mut mb = sb.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return Ok(Vec::new());
    }
    let candidates: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| sa[i] == sb[j]).collect()).collect();
    let from = a.domain.members();
    let to = b.domain.members();
    let check = |perm: &[usize]| {
        let f = AtomMap::from_permutation(from, to, perm);
        lift_value(&f, &a.domain, &a.structure).is_ok_and(|s| s == b.structure)
    };
    if n == 0 {
        return Ok(if a.structure == b.structure { vec![Vec::new()] } else { Vec::new() });
    }
    // Fan out over the image of the first element.
    let branches = exec::map(&candidates[0], |&j0| {
        let mut out = Vec::new();
        let mut perm = vec![j0];
        let mut used = vec![false; n];
        used[j0] = true;
        extend(&candidates, &mut perm, &mut used, &check, &mut out, limit);
        out
    });
    let mut all: Vec<Vec<usize>> = branches.into_iter().flatten().collect();
    if let Some(l) = limit {
        all.truncate(l);
    }
    Ok(all)
}

fn extend<F: Fn(&[usize]) -> bool>(
    candidates: &[Vec<usize>],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    check: &F,
    out: &mut Vec<Vec<usize>>,
    limit: Option<usize>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    let i = perm.len();
    if i == candidates.len() {
        if check(perm) {
            out.push(perm.clone());
        }
        return;
    }
    for &j in &candidates[i] {
        if !used[j] {
            used[j] = true;
            perm.push(j);
            extend(candidates, perm, used, check, out, limit);
            perm.pop();
            used[j] = false;
        }
    }
}

pub fn isomorphisms(
    a: &QuasiStructuredSet,
    b: &QuasiStructuredSet,
    cap: usize,
    limit: Option<usize>,
) -> Result<Vec<AtomMap>, StructError> {
    let perms = isomorphism_perms(a, b, cap, limit)?;
    Ok(perms
        .iter()
        .map(|p| AtomMap::from_permutation(a.domain.members(), b.domain.members(), p))
        .collect())
}

pub fn find_isomorphism(
    a: &QuasiStructuredSet,
    b: &QuasiStructuredSet,
    cap: usize,
) -> Result<Option<AtomMap>, StructError> {
    Ok(isomorphisms(a, b, cap, Some(1))?.into_iter().next())
}

/// A finite permutation group on a domain, with its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    domain: Vec<Hf>,
    perms: Vec<Vec<usize>>,
    /// `table[i][j]` is the element "apply `j`, then `i`".
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl Group {
    /// Builds the group from a set of permutations of `0..domain.len()`.
    /// Returns `None` unless the set contains the identity and is closed
    /// under composition.
    pub fn from_permutations(domain: Vec<Hf>, mut perms: Vec<Vec<usize>>) -> Option<Group> {
        perms.sort();
        perms.dedup();
        let n = domain.len();
        let index: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let id: Vec<usize> = (0..n).collect();
        let identity = *index.get(&id)?;
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&k| p[k]).collect();
                table[i][j] = *index.get(&pq)?;
            }
        }
        Some(Group { domain, perms, table, identity })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn permutation(&self, i: usize) -> &[usize] {
        &self.perms[i]
    }

    pub fn element(&self, i: usize) -> AtomMap {
        AtomMap::from_permutation(&self.domain, &self.domain, &self.perms[i])
    }

    pub fn elements(&self) -> Vec<AtomMap> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == self.identity).expect("group has inverses")
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.table[x][i];
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|i| self.element_order(i)).collect();
        v.sort_unstable();
        v
    }

    fn closure(&self, gens: &[usize]) -> HashSet<usize> {
        let mut seen = HashSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.table[x][g];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = HashSet::from([self.identity]);
        for x in 0..self.order() {
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }
}

/// All automorphisms of `a`.
pub fn automorphism_group(a: &QuasiStructuredSet, cap: usize) -> Result<Group, StructError> {
    let perms = isomorphism_perms(a, a, cap, None)?;
    Ok(Group::from_permutations(a.domain.members().to_vec(), perms).expect("automorphisms form a group"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    OrderMismatch { left: usize, right: usize },
    ElementOrderMismatch { left: Vec<usize>, right: Vec<usize> },
    /// Same invariants, but no generator assignment extends to an
    /// isomorphism.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupComparison {
    /// `map[i]` is the image in the right group of element `i` of the left.
    Isomorphic(Vec<usize>),
    NotIsomorphic(Obstruction),
}

impl GroupComparison {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, GroupComparison::Isomorphic(_))
    }
}

pub fn groups_isomorphic(g: &Group, h: &Group, cap: usize) -> Result<GroupComparison, StructError> {
    for order in [g.order(), h.order()] {
        if order > cap {
            return Err(StructError::BoundExceeded { size: order, cap });
        }
    }
    if g.order() != h.order() {
        return Ok(GroupComparison::NotIsomorphic(Obstruction::OrderMismatch { left: g.order(), right: h.order() }));
    }
    let (pg, ph) = (g.order_profile(), h.order_profile());
    if pg != ph {
        return Ok(GroupComparison::NotIsomorphic(Obstruction::ElementOrderMismatch { left: pg, right: ph }));
    }
    let gens = g.generators();
    let mut images = Vec::with_capacity(gens.len());
    match assign(g, h, &gens, &mut images) {
        Some(map) => Ok(GroupComparison::Isomorphic(map)),
        None => Ok(GroupComparison::NotIsomorphic(Obstruction::Exhausted)),
    }
}

fn assign(g: &Group, h: &Group, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        return extend_hom(g, h, gens, images);
    }
    let want = g.element_order(gens[images.len()]);
    for y in 0..h.order() {
        if h.element_order(y) == want {
            images.push(y);
            if let Some(m) = assign(g, h, gens, images) {
                return Some(m);
            }
            images.pop();
        }
    }
    None
}

/// Extends generator images to a map on all of `g`, failing on an
/// inconsistency or a non-bijective result.
fn extend_hom(g: &Group, h: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut phi = vec![usize::MAX; g.order()];
    phi[g.identity] = h.identity;
    let mut queue = VecDeque::from([g.identity]);
    while let Some(x) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.table[x][s];
            let img = h.table[phi[x]][images[k]];
            if phi[y] == usize::MAX {
                phi[y] = img;
                queue.push_back(y);
            } else if phi[y] != img {
                return None;
            }
        }
    }
    let distinct: HashSet<usize> = phi.iter().copied().collect();
    (distinct.len() == g.order() && !phi.contains(&usize::MAX)).then_some(phi)
}
