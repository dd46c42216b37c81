use vstar::exec;
use vstar::formulas::EvalConfig;
use vstar::structured::QuasiStructuredSet;
use vstar::theories::{bool_samples, candidates, decode_operations, enumerate_models, Catalog, OperationTables};
use vstar::Hf;

fn models(cat: &Catalog, theory: &str, n: usize) -> Vec<QuasiStructuredSet> {
    enumerate_models(cat.theory(theory).unwrap(), n, EvalConfig::default()).unwrap().models
}

/// Ultrafilters of a finite Boolean algebra given by its tables, found by
/// testing every subset of the elements.
fn ultrafilters(t: &OperationTables) -> usize {
    let n = t.neg.len();
    let leq = |a: usize, b: usize| t.meet[a][b] == a;
    (0u32..1 << n)
        .filter(|&f| {
            let has = |x: usize| f >> x & 1 == 1;
            !has(t.bot)
                && (0..n).all(|x| has(x) != has(t.neg[x]))
                && (0..n).all(|x| (0..n).all(|y| !(has(x) && has(y)) || has(t.meet[x][y])))
                && (0..n).all(|x| (0..n).all(|y| !(has(x) && leq(x, y)) || has(y)))
        })
        .count()
}

#[test]
fn boolean_algebras_have_power_of_two_sizes() {
    let cat = Catalog::builtin();
    for n in 1..=4 {
        let found = models(&cat, "bool", n);
        assert_eq!(found.is_empty(), !n.is_power_of_two() || n == 1, "{n}");
        for a in &found {
            let k = n.trailing_zeros() as usize;
            assert_eq!(ultrafilters(&decode_operations(a).unwrap()), k);
        }
    }
    for a in bool_samples(8, 3, 5) {
        assert!(cat.theory("bool").unwrap().satisfies(&a, EvalConfig::default()).unwrap());
        assert_eq!(ultrafilters(&decode_operations(&a).unwrap()), 3);
    }
}

#[test]
fn finite_metrizable_spaces_are_discrete() {
    let cat = Catalog::builtin();
    for theory in ["metrble", "stone"] {
        for n in 1..=3 {
            let found = models(&cat, theory, n);
            assert_eq!(found.len(), 1, "{theory} on {n}");
            assert_eq!(found[0].structure, found[0].domain.powerset());
        }
    }
}

#[test]
fn native_checks_agree_with_formulas() {
    let cat = Catalog::builtin();
    let config = EvalConfig::default();
    for t in cat.theories.values() {
        let Some(native) = t.native else { continue };
        for n in 1..=t.shape.atom_cap().min(3) {
            let atoms: Vec<Hf> = (1..=n as u32).map(Hf::at).collect();
            for c in candidates(t.shape, &atoms) {
                assert_eq!(t.satisfies(&c, config).unwrap(), native(&c), "{} on {c}", t.name);
            }
        }
    }
}

#[test]
fn weak_neighbourhood_systems_contain_the_strong_ones() {
    let cat = Catalog::builtin();
    for n in 1..=3 {
        let weak = models(&cat, "nei_weak", n);
        let strong = models(&cat, "nei", n);
        assert!(strong.iter().all(|m| weak.contains(m)));
    }
}

#[test]
fn sequential_and_parallel_enumeration_agree() {
    let cat = Catalog::builtin();
    let top = cat.theory("top").unwrap();
    exec::set_parallel(false);
    let seq = enumerate_models(top, 3, EvalConfig::default()).unwrap().models;
    exec::set_parallel(true);
    let par = enumerate_models(top, 3, EvalConfig::default()).unwrap().models;
    assert_eq!(seq, par);
}

#[test]
fn enumeration_respects_caps() {
    let cat = Catalog::builtin();
    let cap = cat.theory("top").unwrap().shape.atom_cap();
    assert!(enumerate_models(cat.theory("top").unwrap(), cap + 1, EvalConfig::default()).is_err());
    assert!(enumerate_models(cat.theory("nat").unwrap(), 1, EvalConfig::default()).is_err());
}
