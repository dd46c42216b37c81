use std::collections::BTreeSet;

use proptest::prelude::*;
use vstar::Hf;

/// A plain tree model of hereditarily finite sets, used as the oracle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum V {
    Atom(u32),
    Set(BTreeSet<V>),
}

impl V {
    fn to_hf(&self) -> Hf {
        match self {
            V::Atom(i) => Hf::at(*i),
            V::Set(s) => Hf::set_of(s.iter().map(V::to_hf)),
        }
    }

    fn rank(&self) -> u32 {
        match self {
            V::Atom(_) => 0,
            V::Set(s) => s.iter().map(|x| x.rank() + 1).max().unwrap_or(0),
        }
    }

    fn closure(&self, out: &mut BTreeSet<V>) {
        if let V::Set(s) = self {
            for x in s {
                if out.insert(x.clone()) {
                    x.closure(out);
                }
            }
        }
    }

    fn has_atom(&self) -> bool {
        match self {
            V::Atom(_) => true,
            V::Set(s) => s.iter().any(V::has_atom),
        }
    }
}

fn value() -> impl Strategy<Value = V> {
    let leaf = prop_oneof![(1u32..4).prop_map(V::Atom), Just(V::Set(BTreeSet::new()))];
    leaf.prop_recursive(4, 24, 4, |inner| prop::collection::btree_set(inner, 0..4).prop_map(V::Set))
}

fn set() -> impl Strategy<Value = V> {
    prop::collection::btree_set(value(), 0..4).prop_map(V::Set)
}

proptest! {
    #[test]
    fn equality_is_extensional(a in value(), b in value()) {
        prop_assert_eq!(a == b, a.to_hf() == b.to_hf());
    }

    #[test]
    fn building_twice_interns(a in value()) {
        let (x, y) = (a.to_hf(), a.to_hf());
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(x.structural_hash(), y.structural_hash());
    }

    #[test]
    fn membership_matches_model(a in set(), b in value()) {
        let V::Set(members) = &a else { unreachable!() };
        prop_assert_eq!(members.contains(&b), a.to_hf().contains(&b.to_hf()));
        prop_assert_eq!(members.len(), a.to_hf().len());
    }

    #[test]
    fn rank_recurrence(a in value()) {
        let x = a.to_hf();
        prop_assert_eq!(x.rank(), a.rank());
        let below = x.members().iter().map(|m| m.rank() + 1).max().unwrap_or(0);
        prop_assert_eq!(x.rank(), below);
    }

    #[test]
    fn closure_matches_model(a in value()) {
        let mut oracle = BTreeSet::new();
        a.closure(&mut oracle);
        prop_assert_eq!(a.to_hf().trcl(), Hf::set_of(oracle.iter().map(V::to_hf)));
    }

    #[test]
    fn closure_is_transitive(a in value()) {
        let c = a.to_hf().trcl();
        for y in c.members() {
            for z in y.members() {
                prop_assert!(c.contains(z));
            }
        }
        prop_assert_eq!(c.trcl().is_subset(&c), true);
    }

    #[test]
    fn purity_matches_model(a in value()) {
        prop_assert_eq!(a.to_hf().is_pure(), !a.has_atom());
    }

    #[test]
    fn pairs_are_injective(a in value(), b in value(), c in value(), d in value()) {
        let p = Hf::kpair(a.to_hf(), b.to_hf());
        let q = Hf::kpair(c.to_hf(), d.to_hf());
        prop_assert_eq!(p == q, a == c && b == d);
        prop_assert_eq!(p.kpair_decode().unwrap(), (a.to_hf(), b.to_hf()));
    }

    #[test]
    fn printing_round_trips(a in value()) {
        let x = a.to_hf();
        prop_assert_eq!(Hf::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn naturals_round_trip(n in 0u64..40) {
        prop_assert_eq!(Hf::nat(n).nat_decode().unwrap(), n);
        prop_assert_eq!(Hf::nat(n).len() as u64, n);
    }

    #[test]
    fn order_is_total_and_atoms_first(a in value(), b in value()) {
        let (x, y) = (a.to_hf(), b.to_hf());
        prop_assert_eq!(x.cmp(&y) == std::cmp::Ordering::Equal, x == y);
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        if x.is_atom() && y.is_set() {
            prop_assert!(x < y);
        }
    }
}

#[test]
fn members_are_sorted_and_distinct() {
    let x = Hf::parse("{{}, @2, @1, @2, {@1}}").unwrap();
    assert_eq!(x.len(), 4);
    assert!(x.members().windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn function_view_reads_graphs() {
    let f = Hf::set_of((0..4).map(|n| Hf::kpair(Hf::nat(n), Hf::nat(n + 1))));
    let view = f.function_view().unwrap();
    assert_eq!(view.len(), 4);
    assert_eq!(view.lookup(&Hf::nat(2)), Some(&Hf::nat(3)));
    assert_eq!(view.domain(), Hf::nat(4));
    assert!(view.lookup(&Hf::nat(4)).is_none());
}

#[test]
fn interning_survives_threads() {
    let handles: Vec<_> = (0..8)
        .map(|_| std::thread::spawn(|| Hf::set_of((0..50).map(Hf::nat))))
        .collect();
    let values: Vec<Hf> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] == w[1]));
}
