use proptest::prelude::*;
use vstar::formulas::EvalConfig;
use vstar::gen::Gen;
use vstar::group::{automorphism_group, find_isomorphism, groups_isomorphic, GroupComparison, Obstruction};
use vstar::structured::{check_quasi, check_structured, field, is_isomorphism, lift, lift_value, AtomMap, QuasiStructuredSet};
use vstar::theories::{enumerate_models, Catalog};
use vstar::Hf;

fn q(s: &str) -> QuasiStructuredSet {
    QuasiStructuredSet::parse(s).unwrap()
}

fn topologies(n: usize) -> Vec<QuasiStructuredSet> {
    let cat = Catalog::builtin();
    enumerate_models(cat.theory("top").unwrap(), n, EvalConfig::default()).unwrap().models
}

#[test]
fn sierpinski_has_no_swap() {
    let s = q("{@1, @2} ; {{}, {@1}, {@1, @2}}");
    let swap = AtomMap::parse("@1->@2, @2->@1").unwrap();
    let flipped = q("{@1, @2} ; {{}, {@2}, {@1, @2}}");
    assert!(!is_isomorphism(&swap, &s, &s));
    assert!(is_isomorphism(&swap, &s, &flipped));
    assert_eq!(automorphism_group(&s, 8).unwrap().order(), 1);
}

#[test]
fn field_contains_domain_and_structure() {
    let a = q("{@1, @2} ; {{@1}}");
    let f = field(&a).unwrap();
    assert_eq!(f.len(), 4);
    assert!(f.contains(&a.structure));
    assert!(a.domain.members().iter().all(|x| f.contains(x)));
    assert!(!f.contains(&a.domain));
}

#[test]
fn lift_fixes_pure_values() {
    let a = q("{@1, @2} ; {{@1}, {{}}}");
    let swap = AtomMap::parse("@1->@2, @2->@1").unwrap();
    let pairs = lift(&swap, &a).unwrap();
    for (x, y) in pairs {
        if x.is_pure() {
            assert_eq!(x, y);
        }
    }
}

#[test]
fn cyclic_and_klein_groups_differ() {
    let cycle = q("{@1, @2, @3, @4} ; {{{@1}, {@1, @2}}, {{@2}, {@2, @3}}, {{@3}, {@3, @4}}, {{@4}, {@1, @4}}}");
    let two_edges = q("{@1, @2, @3, @4} ; {{@1, @2}, {{@3, @4}}}");
    let c4 = automorphism_group(&cycle, 8).unwrap();
    let v4 = automorphism_group(&two_edges, 8).unwrap();
    assert_eq!((c4.order(), v4.order()), (4, 4));
    assert!(matches!(
        groups_isomorphic(&c4, &v4, 64).unwrap(),
        GroupComparison::NotIsomorphic(Obstruction::ElementOrderMismatch { .. })
    ));
}

#[test]
fn isomorphism_is_an_equivalence_on_topologies() {
    for n in 1..=3 {
        let models = topologies(n);
        let iso = |a: &QuasiStructuredSet, b: &QuasiStructuredSet| find_isomorphism(a, b, 8).unwrap();
        for a in &models {
            assert!(iso(a, a).is_some());
            for b in &models {
                let Some(f) = iso(a, b) else { continue };
                let back = f.inverse().unwrap();
                assert!(is_isomorphism(&back, b, a));
                for c in &models {
                    if let Some(g) = iso(b, c) {
                        assert!(is_isomorphism(&f.then(&g), a, c));
                    }
                }
            }
        }
    }
}

#[test]
fn automorphism_count_times_class_size_is_n_factorial() {
    // Orbit-stabilizer: each isomorphism class of topologies on n labelled
    // points has n!/|Aut| members.
    for (n, fact) in [(1, 1), (2, 2), (3, 6)] {
        let models = topologies(n);
        for a in &models {
            let class = models.iter().filter(|b| find_isomorphism(a, b, 8).unwrap().is_some()).count();
            assert_eq!(class * automorphism_group(a, 8).unwrap().order(), fact, "{a}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lift_is_functorial(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a = g.atoms(3);
        let b = g.atoms(3);
        let c = g.atoms(2);
        let (da, db) = (Hf::set_of(a.clone()), Hf::set_of(b.clone()));
        let f = g.map_into(&a, &b);
        let h = g.map_into(&b, &c);
        let x = g.value(&a, 4);
        prop_assert_eq!(lift_value(&AtomMap::identity(&da), &da, &x).unwrap(), x.clone());
        let stepwise = lift_value(&h, &db, &lift_value(&f, &da, &x).unwrap()).unwrap();
        prop_assert_eq!(lift_value(&f.then(&h), &da, &x).unwrap(), stepwise);
    }

    #[test]
    fn lifted_bijections_are_isomorphisms(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a = g.structured_set(3, 4);
        let f = g.bijection(&a.domain);
        let image = QuasiStructuredSet::new(
            lift_value(&f, &a.domain, &a.domain).unwrap(),
            lift_value(&f, &a.domain, &a.structure).unwrap(),
        );
        prop_assert!(is_isomorphism(&f, &a, &image));
        prop_assert!(find_isomorphism(&a, &image, 8).unwrap().is_some());
        prop_assert_eq!(
            automorphism_group(&a, 8).unwrap().order(),
            automorphism_group(&image, 8).unwrap().order()
        );
    }

    #[test]
    fn structured_implies_quasi(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let atoms = g.atoms(3);
        let domain = Hf::set_of(atoms.clone());
        let structure = g.set(&atoms, 4);
        if check_structured(&domain, &structure).valid() {
            prop_assert!(check_quasi(&domain, &structure).valid());
        }
    }
}
