//! Direct Rust implementations of the built-in theories, written against
//! the mathematical definitions rather than the catalog formulas. They serve
//! as independent checks on formula evaluation.

use std::collections::HashSet;

use num_rational::Ratio;

use super::decode_operations;
use crate::hf::Hf;
use crate::structured::QuasiStructuredSet;

pub fn for_theory(name: &str) -> Option<super::NativeCheck> {
    Some(match name {
        "set1" => |q| q.domain.len() == 1 && q.structure.is_empty_set(),
        "set2" => |q| q.domain.len() == 2 && q.structure.is_empty_set(),
        "pset2" => |q| q.domain.len() == 2 && q.domain.contains(&q.structure),
        "subset" => |q| q.structure.is_set() && q.structure.is_subset(&q.domain),
        "top" => is_topology,
        "stone" | "metrble" => is_hausdorff_space,
        "nei" => is_neighborhood_system,
        "nei_weak" => is_weak_neighborhood_system,
        "bool" => is_boolean_algebra,
        "metr" => is_metric,
        _ => return None,
    })
}

fn subsets_of_domain(q: &QuasiStructuredSet, family: &Hf) -> bool {
    family.is_set() && family.members().iter().all(|y| y.is_set() && y.is_subset(&q.domain))
}

/// Contains `∅` and the domain, closed under binary intersection and union
/// (enough for finite families).
pub fn is_topology(q: &QuasiStructuredSet) -> bool {
    topology_on(&q.domain, &q.structure, q)
}

fn topology_on(domain: &Hf, t: &Hf, q: &QuasiStructuredSet) -> bool {
    if !subsets_of_domain(q, t) || !t.contains(&Hf::empty()) || !t.contains(domain) {
        return false;
    }
    let opens = t.members();
    opens.iter().all(|a| opens.iter().all(|b| t.contains(&a.intersection(b)) && t.contains(&a.union(b))))
}

/// A topology in which distinct points have disjoint neighbourhoods.
pub fn is_hausdorff_space(q: &QuasiStructuredSet) -> bool {
    if !is_topology(q) {
        return false;
    }
    let opens = q.structure.members();
    let pts = q.domain.members();
    pts.iter().all(|x| {
        pts.iter().all(|y| {
            x == y
                || opens.iter().any(|u| {
                    u.contains(x) && opens.iter().any(|v| v.contains(y) && u.intersection(v).is_empty_set())
                })
        })
    })
}

pub fn is_neighborhood_system(q: &QuasiStructuredSet) -> bool {
    neighborhoods(q, true)
}

/// The variant that only asks for one open neighbourhood per point.
pub fn is_weak_neighborhood_system(q: &QuasiStructuredSet) -> bool {
    neighborhoods(q, false)
}

fn neighborhoods(q: &QuasiStructuredSet, strong: bool) -> bool {
    let Ok(f) = q.structure.function_view() else { return false };
    if f.domain() != q.domain {
        return false;
    }
    let subsets = q.domain.powerset();
    let nbhd = |y: &Hf| f.lookup(y).expect("total").clone();
    for (y, n) in f.iter() {
        if !subsets_of_domain(q, n) {
            return false;
        }
        for z in n.members() {
            if !z.contains(y) {
                return false;
            }
            if subsets.members().iter().any(|w| z.is_subset(w) && !n.contains(w)) {
                return false;
            }
            if n.members().iter().any(|w| !n.contains(&z.intersection(w))) {
                return false;
            }
        }
        let open = |z: &Hf| z.members().iter().all(|w| nbhd(w).contains(z));
        if !n.members().iter().any(open) {
            return false;
        }
        // Every neighbourhood of y contains an open one.
        if strong && !n.members().iter().all(|z| n.members().iter().any(|w| w.is_subset(z) && open(w))) {
            return false;
        }
    }
    true
}

/// Checked through the induced order `x ≤ y ⟺ x ∧ y = x`: it must be a
/// partial order in which meet and join are greatest lower and least upper
/// bounds, top and bottom are extremal and distinct, the lattice is
/// distributive and every element's image under negation is a complement.
pub fn is_boolean_algebra(q: &QuasiStructuredSet) -> bool {
    let Some(t) = decode_operations(q) else { return false };
    let n = t.neg.len();
    let le = |x: usize, y: usize| t.meet[x][y] == x;
    for x in 0..n {
        for y in 0..n {
            if le(x, y) && le(y, x) && x != y {
                return false;
            }
            for z in 0..n {
                if le(x, y) && le(y, z) && !le(x, z) {
                    return false;
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let (m, j) = (t.meet[x][y], t.join[x][y]);
            if !(le(m, x) && le(m, y) && le(x, j) && le(y, j)) {
                return false;
            }
            for z in 0..n {
                if le(z, x) && le(z, y) && !le(z, m) {
                    return false;
                }
                if le(x, z) && le(y, z) && !le(j, z) {
                    return false;
                }
                if t.meet[x][t.join[y][z]] != t.join[t.meet[x][y]][t.meet[x][z]] {
                    return false;
                }
            }
        }
    }
    if t.top == t.bot || !(0..n).all(|x| le(x, t.top) && le(t.bot, x)) {
        return false;
    }
    (0..n).all(|x| t.meet[x][t.neg[x]] == t.bot && t.join[x][t.neg[x]] == t.top)
}

/// The structure is the graph of a rational-valued metric on the domain.
pub fn is_metric(q: &QuasiStructuredSet) -> bool {
    let Ok(f) = q.structure.function_view() else { return false };
    let pts = q.domain.members();
    if f.len() != pts.len() * pts.len() {
        return false;
    }
    let mut d = vec![vec![Ratio::from_integer(0i64); pts.len()]; pts.len()];
    let mut seen = HashSet::new();
    for (k, v) in f.iter() {
        let Ok((x, y)) = k.kpair_decode() else { return false };
        let (Ok(i), Ok(j)) = (pts.binary_search(&x), pts.binary_search(&y)) else { return false };
        let Ok(r) = v.rational_decode() else { return false };
        d[i][j] = r;
        seen.insert((i, j));
    }
    if seen.len() != pts.len() * pts.len() {
        return false;
    }
    let n = pts.len();
    let zero = Ratio::from_integer(0);
    for i in 0..n {
        for j in 0..n {
            if (i == j) != (d[i][j] == zero) || d[i][j] < zero || d[i][j] != d[j][i] {
                return false;
            }
            if (0..n).any(|k| d[i][k] > d[i][j] + d[j][k]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::{candidates, Catalog, Shape};
    use crate::formulas::{holds, EvalConfig};
    use crate::theories::standard_atoms;

    /// Formula and native verdicts agree on every enumerated candidate.
    fn agree(name: &str, max: usize) {
        let c = Catalog::builtin();
        let t = c.theory(name).unwrap();
        let check = t.native.expect("native checker");
        for n in 1..=max {
            for cand in candidates(t.shape, &standard_atoms(n)) {
                let f = holds(&t.formula, &cand, EvalConfig::default()).unwrap();
                assert_eq!(f, check(&cand), "{name} on {cand}");
            }
        }
    }

    #[test]
    fn top_agrees() {
        agree("top", 3);
    }

    #[test]
    fn stone_agrees() {
        agree("stone", 3);
        agree("metrble", 2);
    }

    #[test]
    fn nei_agrees() {
        agree("nei", 3);
        agree("nei_weak", 3);
    }

    #[test]
    fn bool_agrees() {
        agree("bool", 3);
    }

    #[test]
    fn metric_agrees() {
        agree("metr", 3);
    }

    #[test]
    fn small_agree() {
        for name in ["set1", "set2", "pset2", "subset"] {
            agree(name, 3);
        }
        assert_eq!(Shape::parse("lattice"), Some(Shape::Lattice));
    }
}
