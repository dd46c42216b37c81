use num_rational::Ratio;
use vstar::atomize::permutations;
use vstar::formulas::EvalConfig;
use vstar::interp::{
    apply, apply_native, aut_obstruction, check_biint, check_computable, check_defeq, check_domain_preserving,
    InterpError, Sample, SearchCaps, NAMED_PAIRS,
};
use vstar::report::Status;
use vstar::structured::{lift_value, AtomMap, QuasiStructuredSet};
use vstar::theories::{encode_metric, standard_atoms, Catalog};
use vstar::Hf;

fn config() -> EvalConfig {
    EvalConfig::default()
}

fn sample(cat: &Catalog, theory: &str, n: usize) -> Sample {
    Sample::exhaustive(cat, theory, n, config()).unwrap()
}

#[test]
fn top_nei_examples() {
    let cat = Catalog::builtin();
    let t = cat.interp("top_to_nei").unwrap();
    let s = cat.interp("nei_to_top").unwrap();
    let sierpinski = QuasiStructuredSet::parse("{@1, @2} ; {{}, {@1}, {@1, @2}}").unwrap();
    let nei = apply(&cat, t, &sierpinski, config()).unwrap();
    assert_eq!(nei.domain, sierpinski.domain);
    assert_eq!(apply(&cat, s, &nei, config()).unwrap(), sierpinski);
    let not_a_topology = QuasiStructuredSet::parse("{@1, @2} ; {{@1}}").unwrap();
    assert!(matches!(apply(&cat, t, &not_a_topology, config()), Err(InterpError::SourceViolation { .. })));
}

#[test]
fn obstruction_examples() {
    let cat = Catalog::builtin();
    let caps = SearchCaps::default();
    let r = aut_obstruction(&sample(&cat, "top", 3), &sample(&cat, "nei", 3), caps).unwrap();
    assert_eq!(r.status, Status::Unknown);
    let r = aut_obstruction(&sample(&cat, "sierpinski", 2), &sample(&cat, "discrete2", 2), caps).unwrap();
    assert_eq!(r.status, Status::Refuted);
    let c = r.counterexample.unwrap();
    assert_eq!(c["aut_order"], 1);
    assert_eq!(c["compared_with"][0]["aut_order"], 2);
}

#[test]
fn computability_examples() {
    let cat = Catalog::builtin();
    let tops = sample(&cat, "top", 2);
    let status = |name: &str| check_computable(cat.interp(name).unwrap(), &tops, config()).unwrap().status;
    assert_eq!(status("top_to_nei"), Status::Verified);
    assert_eq!(status("top_identity"), Status::Verified);
    assert_eq!(status("sigma_delta_demo"), Status::Verified);
    assert_eq!(status("sigma_demo"), Status::Unknown);
}

#[test]
fn metrics_collapse_for_every_constant() {
    let cat = Catalog::builtin();
    let i = cat.interp("metr_to_metrble").unwrap();
    let atoms = standard_atoms(2);
    let domain = Hf::set_of(atoms.clone());
    let image = |c: i64| {
        let d = encode_metric(&atoms, |x, y| Ratio::new(if x == y { 0 } else { c }, 2));
        apply(&cat, i, &QuasiStructuredSet::new(domain.clone(), d), config()).unwrap()
    };
    let first = image(1);
    for c in 2..5 {
        assert_eq!(image(c), first);
    }
}

#[test]
fn set1_to_set2_outputs_two_points() {
    let cat = Catalog::builtin();
    let i = cat.interp("set1_to_set2").unwrap();
    let out = apply(&cat, i, &QuasiStructuredSet::parse("{@1} ; {}").unwrap(), config()).unwrap();
    assert_eq!(out.domain.len(), 2);
}

/// Every parameter-free interpretation commutes with relabelling the atoms:
/// `i(f⁺a) = f⁺(i(a))`.
#[test]
fn interpretations_are_equivariant() {
    let cat = Catalog::builtin();
    let targets = [Hf::at(4), Hf::at(5), Hf::at(6)];
    for (name, i) in &cat.interps {
        let Ok(source) = cat.theory(&i.source) else { continue };
        let max = source.shape.atom_cap().min(3);
        if max == 0 {
            continue;
        }
        for a in Sample::exhaustive(&cat, &i.source, max, config()).unwrap().models {
            let Ok(image) = apply(&cat, i, &a, config()) else { continue };
            let n = a.domain.len();
            for p in permutations(n) {
                let f = AtomMap::from_permutation(a.domain.members(), &targets[..n], &p);
                let lift = |x: &Hf| lift_value(&f, &a.domain, x).unwrap();
                let moved = QuasiStructuredSet::new(lift(&a.domain), lift(&a.structure));
                let moved_image = apply(&cat, i, &moved, config()).unwrap();
                assert_eq!(moved_image.domain, lift(&image.domain), "{name} on {a} under {f}");
                assert_eq!(moved_image.structure, lift(&image.structure), "{name} on {a} under {f}");
            }
        }
    }
}

#[test]
fn native_paths_match_terms() {
    let cat = Catalog::builtin();
    for name in ["top_to_nei", "nei_to_top", "bool_to_stone", "stone_to_bool"] {
        let i = cat.interp(name).unwrap();
        assert!(i.native.is_some(), "{name}");
        let cap = if i.source == "bool" { 4 } else { 3 };
        for a in sample(&cat, &i.source, cap).models {
            assert_eq!(apply(&cat, i, &a, config()).unwrap(), apply_native(&cat, i, &a, config()).unwrap(), "{name}");
        }
    }
}

/// Definitional equivalence is the strongest relation: it forces domain
/// preservation and bi-interpretability on the same samples.
#[test]
fn defeq_implies_weaker_relations() {
    let cat = Catalog::builtin();
    let mut verified = 0;
    let extra = ["subset_complement,subset_complement", "top_identity,top_identity", "subset_id,subset_id"];
    for pair in NAMED_PAIRS.iter().map(|p| p.0).chain(extra) {
        let (t, s) = cat.pair(pair).unwrap();
        let max = |th: &str| cat.theory(th).unwrap().shape.atom_cap().min(3);
        let ts = Sample::exhaustive(&cat, &t.source, max(&t.source), config()).unwrap();
        let ss = Sample::exhaustive(&cat, &s.source, max(&s.source), config()).unwrap();
        let Ok(r) = check_defeq(&cat, t, s, &ts, &ss, config()) else { continue };
        if r.status != Status::Verified {
            continue;
        }
        verified += 1;
        assert_eq!(check_domain_preserving(t, &ts, config()).unwrap().status, Status::Verified, "{pair}");
        assert_eq!(check_domain_preserving(s, &ss, config()).unwrap().status, Status::Verified, "{pair}");
        let bi = check_biint(&cat, t, s, &ts, &ss, config(), SearchCaps::default()).unwrap();
        assert_eq!(bi.status, Status::Verified, "{pair}");
    }
    assert!(verified >= 4, "only {verified} pairs verified");
}

#[test]
fn mismatched_pairs_are_rejected() {
    let cat = Catalog::builtin();
    let (t, _) = cat.pair("top-nei").unwrap();
    let ts = sample(&cat, "top", 1);
    assert!(matches!(check_defeq(&cat, t, t, &ts, &ts, config()), Err(InterpError::Mismatch(..))));
    assert!(matches!(cat.pair("nonsense"), Err(InterpError::UnknownInterp(_))));
}
