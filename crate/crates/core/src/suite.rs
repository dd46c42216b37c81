//! The end-to-end acceptance checks, each reduced to a pass/fail verdict
//! with a short explanation.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::Serialize;

use crate::atomize::{atomize, relational_isomorphisms};
use crate::formulas::{eval_formula, EvalConfig, Name};
use crate::gen::Gen;
use crate::group::{automorphism_group, find_isomorphism, groups_isomorphic, GroupComparison, Obstruction};
use crate::hf::{tuple, Hf};
use crate::interp::cb::{construct_on_fibre, AbstractInjectionPair, Branch};
use crate::interp::{apply, aut_obstruction, check_biint, check_defeq, InterpError, Sample, SearchCaps};
use crate::report::Status;
use crate::structured::{check_quasi, check_structured, lift_value, AtomMap, QuasiStructuredSet};
use crate::theories::{bool_samples, encode_metric, enumerate_models, standard_atoms, Catalog};

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub config: EvalConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock time, left out of the JSON so that output is reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

pub const TITLES: [&str; 9] = [
    "topological spaces and neighbourhood systems are definitionally equivalent",
    "Boolean algebras and Stone spaces are bi-interpretable but not definitionally equivalent",
    "one- and two-element sets are not bi-interpretable",
    "metrics to metrizable topologies is not injective",
    "Cantor-Bernstein construction",
    "truth transfers along lifted bijections",
    "lift preserves identities and composition",
    "atomization of pure simple structures",
    "structural sanity",
];

/// Number of random cases for the transfer check.
pub const TRANSFER_CASES: usize = 1000;
/// Number of random map pairs for the lift laws.
pub const LIFT_CASES: usize = 500;

type Check = fn(&Catalog, &SuiteOptions) -> Result<String, String>;

const CHECKS: [Check; 9] = [
    top_nei,
    bool_stone,
    set1_set2,
    metric_collapse,
    cantor_bernstein,
    transfer,
    lift_laws,
    atomization,
    sanity,
];

pub fn run_one(id: usize, cat: &Catalog, opts: &SuiteOptions) -> Outcome {
    let start = Instant::now();
    let result = CHECKS[id - 1](cat, opts);
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome { id, title: TITLES[id - 1], passed, detail, elapsed }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<Outcome> {
    let cat = Catalog::builtin();
    (1..=CHECKS.len()).map(|i| run_one(i, &cat, opts)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: InterpError) -> String {
    e.to_string()
}

/// Number of topologies on `n` points, by testing every family of subsets
/// encoded as bitmasks.
pub fn count_topologies_by_brute_force(n: usize) -> usize {
    let subsets = 1usize << n;
    let full = subsets - 1;
    (0u64..1 << subsets)
        .filter(|&fam| {
            let has = |s: usize| fam >> s & 1 == 1;
            has(0)
                && has(full)
                && (0..subsets).all(|a| !has(a) || (0..subsets).all(|b| !has(b) || (has(a & b) && has(a | b))))
        })
        .count()
}

fn top_nei(cat: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let top = cat.theory("top").map_err(|e| e.to_string())?;
    let mut counts = Vec::new();
    for n in 1..=3 {
        let found = enumerate_models(top, n, o.config).map_err(|e| e.to_string())?.models.len();
        let oracle = count_topologies_by_brute_force(n);
        ensure(found == oracle, || format!("{found} topologies on {n} points, brute force finds {oracle}"))?;
        counts.push(found);
    }
    let (t, s) = cat.pair("top-nei").map_err(err)?;
    let ts = Sample::exhaustive(cat, "top", 3, o.config).map_err(err)?;
    let ss = Sample::exhaustive(cat, "nei", 3, o.config).map_err(err)?;
    let r = check_defeq(cat, t, s, &ts, &ss, o.config).map_err(err)?;
    ensure(r.status == Status::Verified, || format!("defeq {:?}: {:?}", r.status, r.counterexample))?;
    Ok(format!("counts {counts:?}; both round trips exact on {} + {} models", ts.models.len(), ss.models.len()))
}

fn bool_samples_for(cat: &Catalog, o: &SuiteOptions) -> Result<Sample, String> {
    Ok(Sample::sizes(cat, "bool", [2, 4], o.config)
        .map_err(err)?
        .with_extra(bool_samples(8, 3, o.seed), "8-element algebras"))
}

fn bool_stone(cat: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let (t, s) = cat.pair("bool-stone").map_err(err)?;
    let bs = bool_samples_for(cat, o)?;
    let mut sizes: Vec<usize> = bs.models.iter().map(|m| m.domain.len()).collect();
    sizes.dedup();
    ensure(sizes == [2, 4, 8], || format!("sample sizes {sizes:?}"))?;
    let ss = Sample::exhaustive(cat, "stone", 3, o.config).map_err(err)?;
    let bi = check_biint(cat, t, s, &bs, &ss, o.config, SearchCaps::default()).map_err(err)?;
    ensure(bi.status == Status::Verified, || format!("biint {:?}: {:?} {:?}", bi.status, bi.counterexample, bi.notes))?;
    let de = check_defeq(cat, t, s, &bs, &ss, o.config).map_err(err)?;
    let reason = de.counterexample.as_ref().and_then(|c| c["reason"].as_str()).unwrap_or("");
    ensure(de.status == Status::Refuted && reason == "domain mismatch", || {
        format!("defeq {:?} with reason {reason:?}", de.status)
    })?;
    Ok(format!(
        "witness terms verified on {} algebras and {} spaces; defeq refuted by a domain mismatch",
        bs.models.len(),
        ss.models.len()
    ))
}

fn set1_set2(cat: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let one = Sample::exhaustive(cat, "set1", 1, o.config).map_err(err)?;
    let two = Sample::sizes(cat, "set2", [2], o.config).map_err(err)?;
    ensure(one.models.len() == 1 && two.models.len() == 1, || "expected one model each".into())?;
    let g1 = automorphism_group(&one.models[0], 8).map_err(|e| e.to_string())?;
    let g2 = automorphism_group(&two.models[0], 8).map_err(|e| e.to_string())?;
    ensure(g1.order() == 1 && g2.order() == 2, || format!("orders {} and {}", g1.order(), g2.order()))?;
    let cmp = groups_isomorphic(&g1, &g2, 64).map_err(|e| e.to_string())?;
    ensure(
        cmp == GroupComparison::NotIsomorphic(Obstruction::OrderMismatch { left: 1, right: 2 }),
        || format!("group comparison {cmp:?}"),
    )?;
    let r = aut_obstruction(&one, &two, SearchCaps::default()).map_err(err)?;
    ensure(r.status == Status::Refuted, || format!("obstruction status {:?}", r.status))?;
    let i = cat.interp("set2_to_set1").map_err(err)?;
    for m in &two.models {
        let out = apply(cat, i, m, o.config).map_err(err)?;
        ensure(out.domain == Hf::singleton(m.domain.clone()), || format!("set2_to_set1 gave {out}"))?;
    }
    Ok("automorphism orders 1 vs 2; obstruction reported; set2_to_set1 is an interpretation".into())
}

fn metric_collapse(cat: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let atoms = standard_atoms(2);
    let domain = Hf::set_of(atoms.clone());
    let constant = |c: i64| {
        QuasiStructuredSet::new(
            domain.clone(),
            encode_metric(&atoms, |i, j| Ratio::from_integer(if i == j { 0 } else { c })),
        )
    };
    let (d1, d2) = (constant(1), constant(2));
    let i = cat.interp("metr_to_metrble").map_err(err)?;
    let t1 = apply(cat, i, &d1, o.config).map_err(err)?;
    let t2 = apply(cat, i, &d2, o.config).map_err(err)?;
    ensure(d1 != d2, || "inputs coincide".into())?;
    ensure(t1 == t2, || format!("outputs differ: {t1} vs {t2}"))?;
    Ok(format!("both constant metrics map to {t1}"))
}

fn abstract_pair(t_cat: &[&str], s_cat: &[&str], t: &[(&str, &str)], s: &[(&str, &str)]) -> AbstractInjectionPair {
    let m = |v: &[(&str, &str)]| v.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    AbstractInjectionPair {
        t_catalog: t_cat.iter().map(|x| x.to_string()).collect(),
        s_catalog: s_cat.iter().map(|x| x.to_string()).collect(),
        t: m(t),
        s: m(s),
    }
}

/// The three small catalogs used to exercise every branch of the chase.
pub fn cb_examples() -> [AbstractInjectionPair; 3] {
    [
        abstract_pair(&["a0", "a1"], &["b0", "b1"], &[("a0", "b0"), ("a1", "b1")], &[("b0", "a1")]),
        abstract_pair(&["a0"], &["b0", "b1"], &[("a0", "b0")], &[("b1", "a0")]),
        abstract_pair(&["a0", "a1"], &["b0", "b1"], &[("a0", "b0"), ("a1", "b1")], &[("b0", "a1"), ("b1", "a0")]),
    ]
}

fn cantor_bernstein(cat: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let [ex1, ex2, ex3] = cb_examples();
    let c1 = ex1.construct().map_err(err)?;
    ensure(
        c1.branches() == [Branch::TStopper, Branch::TStopper]
            && c1.traces[1].chain == ["a1", "b0", "a0"]
            && c1.image_of("a0") == Some("b0")
            && c1.image_of("a1") == Some("b1")
            && c1.bijective,
        || format!("first example: {c1:?}"),
    )?;
    let c2 = ex2.construct().map_err(err)?;
    ensure(
        c2.branches() == [Branch::SStopper] && c2.traces[0].chain == ["a0", "b1"] && c2.image_of("a0") == Some("b1"),
        || format!("second example: {c2:?}"),
    )?;
    let c3 = ex3.construct().map_err(err)?;
    ensure(c3.branches() == [Branch::Cycle, Branch::Cycle] && c3.bijective, || format!("third example: {c3:?}"))?;

    let mut runs = 0;
    for (pair, sizes) in [("subset-identity", 1..=3), ("subset-complement", 1..=3), ("top-nei", 1..=3)] {
        let (t, s) = cat.pair(pair).map_err(err)?;
        for n in sizes {
            let c = construct_on_fibre(cat, t, s, n, o.config).map_err(err)?;
            ensure(c.bijective && c.u_equals_t, || format!("{pair} on {n} atoms: {c:?}"))?;
            if pair == "subset-identity" {
                ensure(c.traces.iter().all(|tr| tr.branch == Branch::Cycle && tr.element == tr.image), || {
                    format!("{pair} on {n} atoms: u is not the identity")
                })?;
            }
            runs += 1;
        }
    }
    Ok(format!("abstract branches as expected; u = t on all {runs} fibre runs"))
}

/// Values the parameters of a random formula are drawn from.
fn parameter(g: &mut Gen, q: &QuasiStructuredSet) -> Hf {
    use rand::seq::SliceRandom;
    use rand::Rng;
    if g.rng().gen_bool(0.5) {
        let mut pool: Vec<Hf> = Hf::set_of([q.domain.clone(), q.structure.clone()]).trcl_set().into_iter().collect();
        pool.sort();
        pool.choose(g.rng()).expect("nonempty").clone()
    } else {
        g.value(q.domain.members(), 3)
    }
}

/// Counts cases where `φ(c)` in `a` and `φ(f⁺c)` in `f⁺a` disagree.
pub fn transfer_discrepancies(seed: u64, cases: usize, config: EvalConfig) -> Vec<String> {
    let mut g = Gen::new(seed);
    let names: Vec<Name> = (0..3).map(|i| Name::from(format!("c{i}"))).collect();
    let mut bad = Vec::new();
    for _ in 0..cases {
        let q = g.structured_set(3, 4);
        let f = g.bijection(&q.domain);
        let k = rand::Rng::gen_range(g.rng(), 0..=2);
        let params: Vec<Hf> = (0..k).map(|_| parameter(&mut g, &q)).collect();
        let phi = g.delta0_formula(&names[..k], 3);
        let lift = |x: &Hf| lift_value(&f, &q.domain, x).expect("total on the domain");
        let image = QuasiStructuredSet::new(lift(&q.domain), lift(&q.structure));
        let env: Vec<(Name, Hf)> = names.iter().cloned().zip(params.iter().cloned()).collect();
        let moved: Vec<(Name, Hf)> = names.iter().cloned().zip(params.iter().map(lift)).collect();
        let before = eval_formula(&phi, &q, &env, config);
        let after = eval_formula(&phi, &image, &moved, config);
        let same = match (&before, &after) {
            (Ok(x), Ok(y)) => x == y,
            (Err(x), Err(y)) => std::mem::discriminant(x) == std::mem::discriminant(y),
            _ => false,
        };
        if !same {
            bad.push(format!("{phi} on {q} under {f}: {before:?} vs {after:?}"));
        }
    }
    bad
}

fn transfer(_: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let bad = transfer_discrepancies(o.seed, TRANSFER_CASES, o.config);
    ensure(bad.is_empty(), || format!("{} discrepancies, first: {}", bad.len(), bad[0]))?;
    Ok(format!("{TRANSFER_CASES} cases, 0 discrepancies"))
}

/// Failures of `id⁺ = id` and `(g∘f)⁺ = g⁺∘f⁺` on random values.
pub fn lift_law_failures(seed: u64, cases: usize) -> Vec<String> {
    use rand::Rng;
    let mut g = Gen::new(seed ^ 0x5eed);
    let mut bad = Vec::new();
    for _ in 0..cases {
        let na = g.rng().gen_range(1..=3);
        let nb = g.rng().gen_range(1..=3);
        let nc = g.rng().gen_range(1..=3);
        let a = g.atoms(na);
        let b = g.atoms(nb);
        let c = g.atoms(nc);
        let f = g.map_into(&a, &b);
        let h = g.map_into(&b, &c);
        let da = Hf::set_of(a.clone());
        let db = Hf::set_of(b.clone());
        let x = g.value(&a, 4);
        // Atoms of `x` outside `a` cannot occur, so both sides are total.
        if lift_value(&AtomMap::identity(&da), &da, &x).ok() != Some(x.clone()) {
            bad.push(format!("identity on {da} moves {x}"));
        }
        let stepwise = lift_value(&f, &da, &x).and_then(|y| lift_value(&h, &db, &y));
        let composed = lift_value(&f.then(&h), &da, &x);
        if stepwise != composed {
            bad.push(format!("{x} under {f} then {h}: {stepwise:?} vs {composed:?}"));
        }
    }
    bad
}

fn lift_laws(_: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let bad = lift_law_failures(o.seed, LIFT_CASES);
    ensure(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    Ok(format!("{LIFT_CASES} map pairs, 0 failures"))
}

/// Every relation of the given arity on `{0, .., n-1}`.
pub fn simple_structures(n: usize, arity: usize) -> Vec<(Hf, Hf)> {
    let dom: Vec<Hf> = (0..n as u64).map(Hf::nat).collect();
    let mut tuples: Vec<Hf> = vec![];
    match arity {
        1 => tuples.extend(dom.iter().map(|x| tuple(std::slice::from_ref(x)))),
        2 => {
            for x in &dom {
                for y in &dom {
                    tuples.push(tuple(&[x.clone(), y.clone()]));
                }
            }
        }
        _ => panic!("arity {arity} not supported"),
    }
    let domain = Hf::set_of(dom);
    (0u64..1 << tuples.len())
        .map(|mask| {
            let rel = Hf::set_of(tuples.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()));
            (domain.clone(), rel)
        })
        .collect()
}

fn atomization(_: &Catalog, _: &SuiteOptions) -> Result<String, String> {
    let base = Hf::set_of([Hf::at(1)]);
    let mut checked = 0;
    for arity in 1..=2 {
        for n in 1..=3 {
            for (m, rel) in simple_structures(n, arity) {
                let a = atomize(&m, &rel, arity, &base).map_err(|e| format!("{m} with {rel}: {e}"))?;
                ensure(check_quasi(&a.result.domain, &a.result.structure).valid(), || {
                    format!("{m} with {rel}: output is not quasi-structured")
                })?;
                let isos = relational_isomorphisms(&m, &rel, &a.result.domain, &a.result.structure, arity);
                ensure(!isos.is_empty(), || format!("{m} with {rel}: output is not isomorphic"))?;
                checked += 1;
            }
        }
    }
    let m: Hf = Hf::set_of((0..3).map(Hf::nat));
    let edge = |x, y| tuple(&[Hf::nat(x), Hf::nat(y)]);
    let cycle = Hf::set_of([edge(0, 1), edge(1, 2), edge(2, 0)]);
    let a = atomize(&m, &cycle, 2, &base).map_err(|e| e.to_string())?;
    let order = automorphism_group(&a.result, 8).map_err(|e| e.to_string())?.order();
    ensure(order == 3, || format!("3-cycle has {order} automorphisms"))?;
    Ok(format!("{checked} structures atomized and matched; 3-cycle has 3 automorphisms"))
}

/// Whether some bijection of the points carries the open sets of `a`
/// exactly onto those of `b`, computed on bitmasks.
pub fn homeomorphic(a: &QuasiStructuredSet, b: &QuasiStructuredSet) -> bool {
    let pts = a.domain.members();
    if pts != b.domain.members() {
        return false;
    }
    let n = pts.len();
    let mask = |u: &Hf| pts.iter().enumerate().filter(|(_, p)| u.contains(p)).fold(0usize, |m, (i, _)| m | 1 << i);
    let opens = |q: &QuasiStructuredSet| {
        let mut v: Vec<usize> = q.structure.members().iter().map(mask).collect();
        v.sort_unstable();
        v
    };
    let (oa, ob) = (opens(a), opens(b));
    crate::atomize::permutations(n).iter().any(|p| {
        let mut moved: Vec<usize> =
            oa.iter().map(|&m| (0..n).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << p[i])).collect();
        moved.sort_unstable();
        moved == ob
    })
}

fn sanity(cat: &Catalog, o: &SuiteOptions) -> Result<String, String> {
    let mut instances: Vec<QuasiStructuredSet> = Vec::new();
    for theory in ["top", "nei", "stone"] {
        instances.extend(Sample::exhaustive(cat, theory, 3, o.config).map_err(err)?.models);
    }
    let bs = bool_samples_for(cat, o)?;
    let (t, s) = cat.pair("bool-stone").map_err(err)?;
    for m in &bs.models {
        let x = apply(cat, t, m, o.config).map_err(err)?;
        instances.push(apply(cat, s, &x, o.config).map_err(err)?);
        instances.push(x);
    }
    instances.extend(bs.models);
    let mut structured = 0;
    for q in &instances {
        if check_structured(&q.domain, &q.structure).valid() {
            structured += 1;
            ensure(check_quasi(&q.domain, &q.structure).valid(), || format!("{q} is structured but not quasi"))?;
        }
    }
    let top = cat.theory("top").map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for n in 1..=3 {
        let models = enumerate_models(top, n, o.config).map_err(|e| e.to_string())?.models;
        for a in &models {
            for b in &models {
                let iso = find_isomorphism(a, b, 8).map_err(|e| e.to_string())?.is_some();
                ensure(iso == homeomorphic(a, b), || format!("{a} and {b}: isomorphic {iso}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{structured} of {} instances structured, all quasi; homeomorphism matches isomorphism on {pairs} pairs",
        instances.len()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_counts() {
        assert_eq!(
            (1..=3).map(count_topologies_by_brute_force).collect::<Vec<_>>(),
            [1, 4, 29]
        );
    }

    #[test]
    fn simple_structure_counts() {
        assert_eq!(simple_structures(2, 2).len(), 16);
        assert_eq!(simple_structures(3, 1).len(), 8);
    }

    #[test]
    fn homeomorphism_oracle() {
        let q = |s: &str| QuasiStructuredSet::parse(s).unwrap();
        let a = q("{@1, @2} ; {{}, {@1}, {@1, @2}}");
        let b = q("{@1, @2} ; {{}, {@2}, {@1, @2}}");
        let c = q("{@1, @2} ; {{}, {@1, @2}}");
        assert!(homeomorphic(&a, &b));
        assert!(!homeomorphic(&a, &c));
    }
}
