//! Direct implementations of some built-in interpretations. They must agree
//! with evaluating the catalog terms.

use super::NativeApply;
use crate::hf::Hf;
use crate::structured::QuasiStructuredSet;
use crate::theories::{decode_operations, encode_operations};

pub fn for_interp(name: &str) -> Option<NativeApply> {
    Some(match name {
        "top_to_nei" => top_to_nei,
        "nei_to_top" => nei_to_top,
        "bool_to_stone" => bool_to_stone,
        "stone_to_bool" => stone_to_bool,
        _ => return None,
    })
}

/// Each point goes to the supersets of its open neighbourhoods.
pub fn top_to_nei(a: &QuasiStructuredSet) -> Option<QuasiStructuredSet> {
    let subsets = a.domain.powerset();
    let graph = a.domain.members().iter().map(|y| {
        let nbhds = subsets
            .members()
            .iter()
            .filter(|z| a.structure.members().iter().any(|w| w.contains(y) && w.is_subset(z)))
            .cloned();
        Hf::kpair(y.clone(), Hf::set_of(nbhds))
    });
    Some(QuasiStructuredSet::new(a.domain.clone(), Hf::set_of(graph)))
}

/// The sets that are a neighbourhood of each of their points.
pub fn nei_to_top(a: &QuasiStructuredSet) -> Option<QuasiStructuredSet> {
    let f = a.structure.function_view().ok()?;
    let opens = a
        .domain
        .powerset()
        .members()
        .iter()
        .filter(|y| y.members().iter().all(|z| f.lookup(z).is_some_and(|n| n.contains(y))))
        .cloned()
        .collect::<Vec<_>>();
    Some(QuasiStructuredSet::new(a.domain.clone(), Hf::set_of(opens)))
}

/// Ultrafilters of a finite algebra are the principal filters of its atoms,
/// and the resulting space is discrete.
pub fn bool_to_stone(a: &QuasiStructuredSet) -> Option<QuasiStructuredSet> {
    let t = decode_operations(a)?;
    let dom = a.domain.members();
    let n = dom.len();
    let le = |x: usize, y: usize| t.meet[x][y] == x;
    let atoms = (0..n).filter(|&x| x != t.bot && (0..n).all(|y| !le(y, x) || y == x || y == t.bot));
    let points: Vec<Hf> = atoms.map(|x| Hf::set_of((0..n).filter(|&y| le(x, y)).map(|y| dom[y].clone()))).collect();
    let space = Hf::set_of(points);
    let opens = space.powerset();
    Some(QuasiStructuredSet::new(space, opens))
}

/// Clopen sets, each tagged with the point set, under intersection, union
/// and complement.
pub fn stone_to_bool(a: &QuasiStructuredSet) -> Option<QuasiStructuredSet> {
    let tag = Hf::singleton(a.domain.clone());
    let clopens: Vec<Hf> = a
        .structure
        .members()
        .iter()
        .filter(|c| a.structure.contains(&a.domain.difference(c)))
        .map(|c| c.union(&tag))
        .collect();
    let elems = Hf::set_of(clopens);
    let els = elems.members();
    let pos = |x: &Hf| els.binary_search(x).expect("closed under the operations");
    let structure = encode_operations(
        els,
        |i, j| pos(&els[i].intersection(&els[j])),
        |i, j| pos(&els[i].union(&els[j])),
        |i| pos(&a.domain.difference(&els[i]).union(&tag)),
        pos(&a.domain.union(&tag)),
        pos(&tag),
    );
    Some(QuasiStructuredSet::new(elems, structure))
}
