//! Exporting a relational structure from the pure sets onto a quasi-domain.

use std::collections::HashMap;

use thiserror::Error;

use crate::hf::{tuple, tuple_decode, Hf};
use crate::structured::{check_quasi, QuasiStructuredSet, QuasiVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtomizeError {
    #[error("not a simple structure: {0}")]
    NotSimple(String),
    #[error("not a quasi-domain: {0}")]
    NotAQuasiDomain(String),
    #[error("construction produced an invalid quasi-structured set: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone)]
pub struct Atomized {
    pub result: QuasiStructuredSet,
    /// Each element of the input domain paired with its new domain element.
    pub embedding: Vec<(Hf, Hf)>,
}

/// Rebuilds `⟨m_domain, m_rel⟩` (an `arity`-ary relation on pure values)
/// over the quasi-domain `base`: every pure value `x` is sent to `f(x)`
/// with `f(∅) = base` and `f(x) = {f(y) | y ∈ x}`, then each `f(x)` is
/// wrapped as `{f(x), {A*}}` where `A* = f[m_domain]`.
pub fn atomize(m_domain: &Hf, m_rel: &Hf, arity: usize, base: &Hf) -> Result<Atomized, AtomizeError> {
    if !m_domain.is_set() || !m_domain.is_pure() || !m_rel.is_pure() || !m_rel.is_set() {
        return Err(AtomizeError::NotSimple("domain and relation must be pure sets".into()));
    }
    if arity == 0 {
        return Err(AtomizeError::NotSimple("arity must be positive".into()));
    }
    let mut tuples = Vec::with_capacity(m_rel.len());
    for t in m_rel.members() {
        let items = tuple_decode(t, arity)
            .map_err(|_| AtomizeError::NotSimple(format!("{t} is not a {arity}-tuple")))?;
        if let Some(x) = items.iter().find(|x| !m_domain.contains(x)) {
            return Err(AtomizeError::NotSimple(format!("{x} is outside the domain")));
        }
        tuples.push(items);
    }
    if base.is_atom() || base.is_empty_set() {
        return Err(AtomizeError::NotAQuasiDomain("must be a nonempty set".into()));
    }
    let domain_check = check_quasi(base, &Hf::empty());
    if let Some(v) = domain_check.first() {
        return Err(AtomizeError::NotAQuasiDomain(format!("clause {} fails: {}", v.clause.label(), v.message)));
    }

    let mut memo: HashMap<Hf, Hf> = HashMap::new();
    fn push(x: &Hf, base: &Hf, memo: &mut HashMap<Hf, Hf>) -> Hf {
        if x.is_empty_set() {
            return base.clone();
        }
        if let Some(y) = memo.get(x) {
            return y.clone();
        }
        let y = Hf::set_of(x.members().iter().map(|m| push(m, base, memo)));
        memo.insert(x.clone(), y.clone());
        y
    }
    let pushed: Vec<Hf> = m_domain.members().iter().map(|x| push(x, base, &mut memo)).collect();
    let a_star = Hf::set_of(pushed.iter().cloned());
    let tag = Hf::singleton(a_star);
    let wrap: HashMap<&Hf, Hf> = m_domain
        .members()
        .iter()
        .zip(&pushed)
        .map(|(x, p)| (x, Hf::set_of([p.clone(), tag.clone()])))
        .collect();
    let domain = Hf::set_of(wrap.values().cloned());
    let structure = Hf::set_of(
        tuples.iter().map(|items| tuple(&items.iter().map(|x| wrap[x].clone()).collect::<Vec<_>>())),
    );
    let result = QuasiStructuredSet::new(domain, structure);
    let verdict: QuasiVerdict = check_quasi(&result.domain, &result.structure);
    if !verdict.valid() {
        return Err(AtomizeError::Invalid(verdict.to_string()));
    }
    let embedding = m_domain.members().iter().map(|x| (x.clone(), wrap[x].clone())).collect();
    Ok(Atomized { result, embedding })
}

/// Bijections `g: from_domain -> to_domain` carrying `from_rel` exactly onto
/// `to_rel`, as `arity`-tuples. Brute force; intended for small domains.
pub fn relational_isomorphisms(
    from_domain: &Hf,
    from_rel: &Hf,
    to_domain: &Hf,
    to_rel: &Hf,
    arity: usize,
) -> Vec<Vec<(Hf, Hf)>> {
    let xs = from_domain.members();
    let ys = to_domain.members();
    if xs.len() != ys.len() || from_rel.len() != to_rel.len() {
        return Vec::new();
    }
    let Ok(rel): Result<Vec<Vec<Hf>>, _> = from_rel.members().iter().map(|t| tuple_decode(t, arity)).collect()
    else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for perm in permutations(xs.len()) {
        let g: HashMap<&Hf, &Hf> = xs.iter().zip(perm.iter().map(|&j| &ys[j])).collect();
        let image = Hf::set_of(rel.iter().map(|items| {
            tuple(&items.iter().map(|x| g[x].clone()).collect::<Vec<_>>())
        }));
        if image == *to_rel {
            out.push(xs.iter().map(|x| (x.clone(), g[x].clone())).collect());
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                go(cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{automorphism_group, find_isomorphism};

    fn nat_set(ns: &[u64]) -> Hf {
        Hf::set_of(ns.iter().map(|&n| Hf::nat(n)))
    }

    #[test]
    fn two_element_order() {
        let m = nat_set(&[0, 1]);
        let rel = Hf::singleton(Hf::kpair(Hf::nat(0), Hf::nat(1)));
        let a = atomize(&m, &rel, 2, &Hf::set_of([Hf::at(1)])).unwrap();
        assert_eq!(a.result.domain.len(), 2);
        assert_eq!(a.result.structure.len(), 1);
        assert_eq!(relational_isomorphisms(&m, &rel, &a.result.domain, &a.result.structure, 2).len(), 1);
        let b = atomize(&m, &rel, 2, &Hf::set_of([Hf::at(7)])).unwrap();
        assert!(find_isomorphism(&a.result, &b.result, 8).unwrap().is_some());
    }

    #[test]
    fn empty_relation() {
        let a = atomize(&nat_set(&[0]), &Hf::empty(), 1, &Hf::set_of([Hf::at(1)])).unwrap();
        assert_eq!(a.result.domain.len(), 1);
        assert_eq!(a.result.structure, Hf::empty());
    }

    #[test]
    fn three_cycle_has_rotations() {
        let m = nat_set(&[0, 1, 2]);
        let edge = |x, y| Hf::kpair(Hf::nat(x), Hf::nat(y));
        let rel = Hf::set_of([edge(0, 1), edge(1, 2), edge(2, 0)]);
        let a = atomize(&m, &rel, 2, &Hf::set_of([Hf::at(1), Hf::at(2)])).unwrap();
        assert_eq!(automorphism_group(&a.result, 8).unwrap().order(), 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = nat_set(&[0, 1]);
        let outside = Hf::singleton(Hf::kpair(Hf::nat(0), Hf::nat(5)));
        assert!(matches!(atomize(&m, &outside, 2, &Hf::set_of([Hf::at(1)])), Err(AtomizeError::NotSimple(_))));
        let impure = Hf::set_of([Hf::at(3)]);
        assert!(matches!(atomize(&impure, &Hf::empty(), 1, &Hf::set_of([Hf::at(1)])), Err(AtomizeError::NotSimple(_))));
        assert!(matches!(atomize(&m, &Hf::empty(), 1, &Hf::empty()), Err(AtomizeError::NotAQuasiDomain(_))));
        assert!(matches!(
            atomize(&m, &Hf::empty(), 1, &Hf::set_of([Hf::empty()])),
            Err(AtomizeError::NotAQuasiDomain(_))
        ));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
