//! Interpretations between theories and the checks built on them:
//! application, definitional equivalence, bi-interpretability, the
//! automorphism-group obstruction and computability of the defining terms.

use serde_json::{json, Value};
use thiserror::Error;

use crate::exec;
use crate::formulas::{classify_term, eval_term, EvalConfig, EvalError, InterpDef, LevyClass, Term};
use crate::group::{automorphism_group, groups_isomorphic, isomorphisms, Group, DEFAULT_DOMAIN_CAP, DEFAULT_GROUP_CAP};
use crate::hf::Hf;
use crate::report::{CheckReport, Status};
use crate::structured::{check_quasi, is_isomorphism, lift_value, AtomMap, QuasiStructuredSet, StructError};
use crate::theories::{enumerate_models, Catalog, TheoryError};

pub mod cb;
pub mod native;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error("unknown interpretation '{0}'")]
    UnknownInterp(String),
    #[error("input does not satisfy '{theory}': {input}")]
    SourceViolation { theory: String, input: String },
    #[error("'{interp}' produced {output}, which violates {reason}")]
    TargetViolation { interp: String, reason: String, output: String },
    #[error("'{0}' and '{1}' do not run in opposite directions")]
    Mismatch(String, String),
    #[error("image {0} is missing from the target catalog")]
    IncompleteCatalog(String),
    #[error("'{name}' is not injective: {first} and {second} have the same image")]
    NotInjective { name: String, first: String, second: String },
    #[error("'{name}' changes the domain of {input}")]
    NotDomainPreserving { name: String, input: String },
    #[error("witness of '{name}' on {input} is not a function graph")]
    BadWitness { name: String, input: String },
}

/// Bounds on the automorphism and isomorphism searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    /// Largest domain searched for isomorphisms.
    pub domain: usize,
    /// Largest group order compared.
    pub group: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { domain: DEFAULT_DOMAIN_CAP, group: DEFAULT_GROUP_CAP }
    }
}

/// Native replacement for the defining terms of a built-in interpretation.
pub type NativeApply = fn(&QuasiStructuredSet) -> Option<QuasiStructuredSet>;

#[derive(Debug, Clone)]
pub struct Interpretation {
    pub name: String,
    pub source: String,
    pub target: String,
    pub tau_d: Term,
    pub tau_s: Term,
    /// Graph of an isomorphism from the input onto partner(self(input)).
    pub eta: Option<Term>,
    pub tau_d_pi: Option<Term>,
    pub tau_s_pi: Option<Term>,
    pub native: Option<NativeApply>,
}

impl Interpretation {
    pub fn from_def(d: InterpDef) -> Interpretation {
        let native = native::for_interp(&d.name);
        Interpretation {
            name: d.name,
            source: d.source,
            target: d.target,
            tau_d: d.tau_d,
            tau_s: d.tau_s,
            eta: d.eta,
            tau_d_pi: d.tau_d_pi,
            tau_s_pi: d.tau_s_pi,
            native,
        }
    }

    /// Evaluates the defining terms without checking either theory.
    pub fn apply_raw(&self, a: &QuasiStructuredSet, config: EvalConfig) -> Result<QuasiStructuredSet, EvalError> {
        let domain = eval_term(&self.tau_d, a, &[], config)?;
        let structure = eval_term(&self.tau_s, a, &[], config)?;
        Ok(QuasiStructuredSet::new(domain, structure))
    }
}

impl Catalog {
    pub fn interp(&self, name: &str) -> Result<&Interpretation, InterpError> {
        self.interps.get(name).ok_or_else(|| InterpError::UnknownInterp(name.to_string()))
    }

    /// Resolves `t,s` or one of the named pairs to two interpretations.
    pub fn pair(&self, spec: &str) -> Result<(&Interpretation, &Interpretation), InterpError> {
        let (t, s) = match NAMED_PAIRS.iter().find(|(n, _, _)| *n == spec) {
            Some((_, t, s)) => (*t, *s),
            None => spec.split_once(',').ok_or_else(|| InterpError::UnknownInterp(spec.to_string()))?,
        };
        Ok((self.interp(t.trim())?, self.interp(s.trim())?))
    }
}

/// Built-in pairs `(name, t, s)`.
pub const NAMED_PAIRS: &[(&str, &str, &str)] = &[
    ("top-nei", "top_to_nei", "nei_to_top"),
    ("bool-stone", "bool_to_stone", "stone_to_bool"),
    ("set1-pset2", "set1_to_pset2", "pset2_to_set1"),
    ("set1-set2", "set1_to_set2", "set2_to_set1"),
    ("subset-complement", "subset_complement", "subset_id"),
    ("subset-identity", "subset_id", "subset_complement"),
];

/// `i(a)`, checking that `a` satisfies the source theory and that the
/// output is quasi-structured and satisfies the target theory.
pub fn apply(
    cat: &Catalog,
    i: &Interpretation,
    a: &QuasiStructuredSet,
    config: EvalConfig,
) -> Result<QuasiStructuredSet, InterpError> {
    if !cat.theory(&i.source)?.satisfies(a, config)? {
        return Err(InterpError::SourceViolation { theory: i.source.clone(), input: a.to_string() });
    }
    let out = i.apply_raw(a, config)?;
    check_output(cat, i, out, config)
}

/// Like [`apply`], with the native fast path in place of the terms when the
/// interpretation has one.
pub fn apply_native(
    cat: &Catalog,
    i: &Interpretation,
    a: &QuasiStructuredSet,
    config: EvalConfig,
) -> Result<QuasiStructuredSet, InterpError> {
    let Some(f) = i.native else { return apply(cat, i, a, config) };
    if !cat.theory(&i.source)?.satisfies(a, config)? {
        return Err(InterpError::SourceViolation { theory: i.source.clone(), input: a.to_string() });
    }
    let out = f(a).ok_or_else(|| InterpError::SourceViolation { theory: i.source.clone(), input: a.to_string() })?;
    check_output(cat, i, out, config)
}

fn check_output(
    cat: &Catalog,
    i: &Interpretation,
    out: QuasiStructuredSet,
    config: EvalConfig,
) -> Result<QuasiStructuredSet, InterpError> {
    let verdict = check_quasi(&out.domain, &out.structure);
    if let Some(v) = verdict.first() {
        return Err(InterpError::TargetViolation {
            interp: i.name.clone(),
            reason: format!("clause {} ({})", v.clause.label(), v.message),
            output: out.to_string(),
        });
    }
    if !cat.theory(&i.target)?.satisfies(&out, config)? {
        return Err(InterpError::TargetViolation {
            interp: i.name.clone(),
            reason: format!("theory '{}'", i.target),
            output: out.to_string(),
        });
    }
    Ok(out)
}

/// A finite list of models of one theory, with a description for reports.
#[derive(Debug, Clone)]
pub struct Sample {
    pub theory: String,
    pub description: String,
    pub models: Vec<QuasiStructuredSet>,
}

impl Sample {
    /// All models on `1..=max_atoms` atoms, clamped to the theory's
    /// enumeration cap.
    pub fn exhaustive(cat: &Catalog, theory: &str, max_atoms: usize, config: EvalConfig) -> Result<Sample, InterpError> {
        Sample::sizes(cat, theory, 1..=max_atoms, config)
    }

    pub fn sizes(
        cat: &Catalog,
        theory: &str,
        sizes: impl IntoIterator<Item = usize>,
        config: EvalConfig,
    ) -> Result<Sample, InterpError> {
        let t = cat.theory(theory)?;
        let cap = t.shape.atom_cap();
        let mut models = Vec::new();
        let mut used = Vec::new();
        for n in sizes {
            if n > cap {
                continue;
            }
            models.extend(enumerate_models(t, n, config)?.models);
            used.push(n.to_string());
        }
        let description = format!("all {theory} models on {{{}}} atoms ({} models)", used.join(","), models.len());
        Ok(Sample { theory: theory.to_string(), description, models })
    }

    pub fn with_extra(mut self, extra: Vec<QuasiStructuredSet>, what: &str) -> Sample {
        self.description = format!("{} + {} {what}", self.description, extra.len());
        for m in extra {
            if !self.models.contains(&m) {
                self.models.push(m);
            }
        }
        self
    }
}

fn check_pair<'c>(t: &'c Interpretation, s: &'c Interpretation) -> Result<(), InterpError> {
    if t.source != s.target || t.target != s.source {
        return Err(InterpError::Mismatch(t.name.clone(), s.name.clone()));
    }
    Ok(())
}

enum Step {
    Done(QuasiStructuredSet),
    Refuted(Value),
    Unknown(String),
}

/// Applies `i`, turning target violations into counterexamples and undecided
/// searches into unknowns.
fn step(cat: &Catalog, i: &Interpretation, a: &QuasiStructuredSet, config: EvalConfig) -> Result<Step, InterpError> {
    match apply(cat, i, a, config) {
        Ok(b) => Ok(Step::Done(b)),
        Err(InterpError::TargetViolation { reason, output, .. }) => Ok(Step::Refuted(json!({
            "interpretation": i.name,
            "input": a.to_string(),
            "output": output,
            "reason": format!("output violates {reason}"),
        }))),
        Err(InterpError::Eval(EvalError::RankCapExceeded))
        | Err(InterpError::Theory(TheoryError::Eval(EvalError::RankCapExceeded))) => {
            Ok(Step::Unknown(format!("'{}' undecided on {a}", i.name)))
        }
        Err(e) => Err(e),
    }
}

fn round_trip_direction(
    cat: &Catalog,
    first: &Interpretation,
    second: &Interpretation,
    sample: &Sample,
    config: EvalConfig,
    report: &mut CheckReport,
) -> Result<(), InterpError> {
    let results = exec::map(&sample.models, |a| -> Result<Option<Step>, InterpError> {
        let b = match step(cat, first, a, config)? {
            Step::Done(b) => b,
            other => return Ok(Some(other)),
        };
        let back = match step(cat, second, &b, config)? {
            Step::Done(x) => x,
            other => return Ok(Some(other)),
        };
        if back == *a {
            return Ok(None);
        }
        let reason = if back.domain != a.domain { "domain mismatch" } else { "structure mismatch" };
        Ok(Some(Step::Refuted(json!({
            "direction": format!("{} then {}", first.name, second.name),
            "input": a.to_string(),
            "image": b.to_string(),
            "round_trip": back.to_string(),
            "reason": reason,
        }))))
    });
    for r in results {
        match r? {
            None | Some(Step::Done(_)) => {}
            Some(Step::Refuted(v)) => report.refute(v),
            Some(Step::Unknown(note)) => report.undecided(note),
        }
    }
    Ok(())
}

/// Whether `s∘t` and `t∘s` are the identity on the samples.
pub fn check_defeq(
    cat: &Catalog,
    t: &Interpretation,
    s: &Interpretation,
    t_sample: &Sample,
    s_sample: &Sample,
    config: EvalConfig,
) -> Result<CheckReport, InterpError> {
    check_pair(t, s)?;
    let mut report = CheckReport::new(
        "defeq",
        format!("{},{}", t.name, s.name),
        format!("{}; {}", t_sample.description, s_sample.description),
    );
    round_trip_direction(cat, t, s, t_sample, config, &mut report)?;
    round_trip_direction(cat, s, t, s_sample, config, &mut report)?;
    Ok(report)
}

/// Whether `tau_d` returns the input domain on every sample model.
pub fn check_domain_preserving(
    i: &Interpretation,
    sample: &Sample,
    config: EvalConfig,
) -> Result<CheckReport, InterpError> {
    let mut report = CheckReport::new("domain-preserving", i.name.clone(), sample.description.clone());
    let results = exec::map(&sample.models, |a| eval_term(&i.tau_d, a, &[], config));
    for (a, r) in sample.models.iter().zip(results) {
        match r {
            Ok(d) if d != a.domain => report.refute(json!({
                "input": a.to_string(),
                "image_domain": d.to_string(),
            })),
            Ok(_) => {}
            Err(EvalError::RankCapExceeded) => report.undecided("domain term undecided"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

/// The graph held by an `eta` value as an atom map, if it is one.
fn witness_map(graph: &Hf) -> Option<AtomMap> {
    let f = graph.function_view().ok()?;
    AtomMap::new(f.iter().map(|(x, y)| (x.clone(), y.clone()))).ok()
}

/// Isomorphisms `a → b` whose graph is fixed by every automorphism of `a`.
/// Any isomorphism defined by a formula without parameters has this
/// property, so an empty result rules out a definable witness.
pub fn invariant_isomorphisms(
    a: &QuasiStructuredSet,
    b: &QuasiStructuredSet,
    cap: usize,
) -> Result<(usize, Vec<AtomMap>), StructError> {
    let isos = isomorphisms(a, b, cap, None)?;
    let total = isos.len();
    if isos.is_empty() {
        return Ok((0, isos));
    }
    let auts = automorphism_group(a, cap)?.elements();
    let invariant = isos
        .into_iter()
        .filter(|f| {
            let graph = graph_of(f);
            auts.iter().all(|g| lift_value(g, &a.domain, &graph).is_ok_and(|h| h == graph))
        })
        .collect();
    Ok((total, invariant))
}

fn graph_of(f: &AtomMap) -> Hf {
    Hf::set_of(f.iter().map(|(x, y)| Hf::kpair(x.clone(), y.clone())))
}

fn biint_direction(
    cat: &Catalog,
    first: &Interpretation,
    second: &Interpretation,
    sample: &Sample,
    config: EvalConfig,
    caps: SearchCaps,
    report: &mut CheckReport,
) -> Result<(), InterpError> {
    let results = exec::map(&sample.models, |a| -> Result<(Option<Step>, Option<Value>), InterpError> {
        let b = match step(cat, first, a, config)? {
            Step::Done(b) => b,
            other => return Ok((Some(other), None)),
        };
        let back = match step(cat, second, &b, config)? {
            Step::Done(x) => x,
            other => return Ok((Some(other), None)),
        };
        let direction = format!("{} then {}", first.name, second.name);
        if let Some(eta) = &first.eta {
            let graph = match eval_term(eta, a, &[], config) {
                Ok(g) => g,
                Err(EvalError::RankCapExceeded) => {
                    return Ok((Some(Step::Unknown(format!("witness of '{}' undecided on {a}", first.name))), None))
                }
                Err(e) => return Err(e.into()),
            };
            let map = witness_map(&graph)
                .ok_or_else(|| InterpError::BadWitness { name: first.name.clone(), input: a.to_string() })?;
            if !is_isomorphism(&map, a, &back) {
                return Ok((
                    Some(Step::Refuted(json!({
                        "direction": direction,
                        "input": a.to_string(),
                        "round_trip": back.to_string(),
                        "witness": map.to_string(),
                        "reason": "witness term is not an isomorphism",
                    }))),
                    None,
                ));
            }
            return Ok((None, Some(json!({"input": a.to_string(), "witness": map.to_string(), "from": "term"}))));
        }
        let (total, invariant) = invariant_isomorphisms(a, &back, caps.domain)?;
        match invariant.len() {
            0 => Ok((
                Some(Step::Refuted(json!({
                    "direction": direction,
                    "input": a.to_string(),
                    "round_trip": back.to_string(),
                    "isomorphisms": total,
                    "reason": if total == 0 { "round trip is not isomorphic to the input" }
                              else { "no isomorphism is invariant under the automorphisms of the input" },
                }))),
                None,
            )),
            1 => Ok((None, Some(json!({"input": a.to_string(), "witness": invariant[0].to_string(), "from": "search"})))),
            n => Ok((
                Some(Step::Unknown(format!("{n} candidate witnesses on {a} and no witness term to choose between them"))),
                None,
            )),
        }
    });
    for r in results {
        let (issue, witness) = r?;
        match issue {
            None | Some(Step::Done(_)) => {}
            Some(Step::Refuted(v)) => report.refute(v),
            Some(Step::Unknown(note)) => report.undecided(note),
        }
        if let Some(w) = witness {
            if report.witnesses.len() < 12 {
                report.witnesses.push(w);
            }
        }
    }
    Ok(())
}

/// Bi-interpretability on the samples: for each model `a` of the source an
/// isomorphism `a ≅ s(t(a))`, from the `eta` term when one is given and
/// otherwise found by search, and likewise on the other side.
pub fn check_biint(
    cat: &Catalog,
    t: &Interpretation,
    s: &Interpretation,
    t_sample: &Sample,
    s_sample: &Sample,
    config: EvalConfig,
    caps: SearchCaps,
) -> Result<CheckReport, InterpError> {
    check_pair(t, s)?;
    let mut report = CheckReport::new(
        "biint",
        format!("{},{}", t.name, s.name),
        format!("{}; {}", t_sample.description, s_sample.description),
    );
    biint_direction(cat, t, s, t_sample, config, caps, &mut report)?;
    biint_direction(cat, s, t, s_sample, config, caps, &mut report)?;
    Ok(report)
}

struct AutInfo {
    model: QuasiStructuredSet,
    group: Group,
}

fn aut_infos(sample: &Sample, cap: usize) -> Result<Vec<AutInfo>, InterpError> {
    exec::map(&sample.models, |m| {
        Ok(AutInfo { model: m.clone(), group: automorphism_group(m, cap)? })
    })
    .into_iter()
    .collect()
}

fn unmatched(
    left: &[AutInfo],
    right: &[AutInfo],
    cap: usize,
    report: &mut CheckReport,
    side: &str,
) -> Result<(), InterpError> {
    for a in left {
        let mut closest = Vec::new();
        let mut matched = false;
        for b in right {
            match groups_isomorphic(&a.group, &b.group, cap)? {
                crate::group::GroupComparison::Isomorphic(_) => {
                    matched = true;
                    break;
                }
                crate::group::GroupComparison::NotIsomorphic(o) => {
                    if closest.len() < 3 {
                        closest.push(json!({"model": b.model.to_string(), "aut_order": b.group.order(), "obstruction": o}));
                    }
                }
            }
        }
        if !matched {
            report.refute(json!({
                "side": side,
                "model": a.model.to_string(),
                "aut_order": a.group.order(),
                "element_orders": a.group.order_profile(),
                "compared_with": closest,
                "reason": "no model on the other side has an isomorphic automorphism group",
            }));
            return Ok(());
        }
    }
    Ok(())
}

/// Looks for a model on either side whose automorphism group matches none
/// on the other side. Bi-interpretations preserve automorphism groups, so
/// such a model refutes bi-interpretability, relative to the enumeration
/// bound. Finding no obstruction proves nothing and is reported as unknown.
pub fn aut_obstruction(t_sample: &Sample, s_sample: &Sample, caps: SearchCaps) -> Result<CheckReport, InterpError> {
    let mut report = CheckReport::new(
        "obstruct",
        format!("{},{}", t_sample.theory, s_sample.theory),
        format!("{}; {}", t_sample.description, s_sample.description),
    );
    let left = aut_infos(t_sample, caps.domain)?;
    let right = aut_infos(s_sample, caps.domain)?;
    unmatched(&left, &right, caps.group, &mut report, &t_sample.theory)?;
    if report.status != Status::Refuted {
        unmatched(&right, &left, caps.group, &mut report, &s_sample.theory)?;
    }
    if report.status != Status::Refuted {
        let mut orders: Vec<usize> = left.iter().chain(&right).map(|i| i.group.order()).collect();
        orders.sort_unstable();
        orders.dedup();
        report.undecided(format!(
            "every automorphism group has a match on the other side (orders seen: {orders:?}); \
             this does not establish bi-interpretability"
        ));
    }
    Ok(report)
}

/// Whether the defining terms are Δ₁ on the sample: each must be Δ₀ or Σ₁,
/// and a Σ₁ term needs a Π₁ companion (`*_pi`) that agrees with it on
/// every sample model.
pub fn check_computable(i: &Interpretation, sample: &Sample, config: EvalConfig) -> Result<CheckReport, InterpError> {
    let mut report = CheckReport::new("computable", i.name.clone(), sample.description.clone());
    for (label, term, companion) in [("tau_d", &i.tau_d, &i.tau_d_pi), ("tau_s", &i.tau_s, &i.tau_s_pi)] {
        let class = classify_term(term);
        report.witnesses.push(json!({"term": label, "class": class}));
        match class {
            LevyClass::Delta0 => {}
            LevyClass::Pi1 | LevyClass::Other => report.refute(json!({
                "term": label,
                "class": class,
                "reason": "defining terms must be Delta0 or Sigma1",
            })),
            LevyClass::Sigma1 => {
                let Some(pi) = companion else {
                    report.undecided(format!("{label} is Sigma1 with no Pi1 companion"));
                    continue;
                };
                let pclass = classify_term(pi);
                if !pclass.is_pi1() {
                    report.refute(json!({"term": format!("{label}_pi"), "class": pclass, "reason": "companion is not Pi1"}));
                    continue;
                }
                let results = exec::map(&sample.models, |a| {
                    (eval_term(term, a, &[], config), eval_term(pi, a, &[], config))
                });
                for (a, (x, y)) in sample.models.iter().zip(results) {
                    match (x, y) {
                        (Ok(x), Ok(y)) if x != y => report.refute(json!({
                            "term": label,
                            "input": a.to_string(),
                            "sigma_value": x.to_string(),
                            "pi_value": y.to_string(),
                            "reason": "term and companion disagree",
                        })),
                        (Ok(_), Ok(_)) => {}
                        (Err(EvalError::RankCapExceeded), _) | (_, Err(EvalError::RankCapExceeded)) => {
                            report.undecided(format!("{label} undecided on {a}"))
                        }
                        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::bool_samples;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn q(s: &str) -> QuasiStructuredSet {
        QuasiStructuredSet::parse(s).unwrap()
    }

    #[test]
    fn top_to_nei_on_sierpinski() {
        let c = Catalog::builtin();
        let a = q("{@1, @2} ; {{}, {@1}, {@1, @2}}");
        let b = apply(&c, c.interp("top_to_nei").unwrap(), &a, cfg()).unwrap();
        let kp = |x: &str, y: &str| Hf::kpair(Hf::parse(x).unwrap(), Hf::parse(y).unwrap());
        let want = Hf::set_of([kp("@1", "{{@1}, {@1, @2}}"), kp("@2", "{{@1, @2}}")]);
        assert_eq!(b.structure, want);
        let back = apply(&c, c.interp("nei_to_top").unwrap(), &b, cfg()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn set1_to_pset2_shape() {
        let c = Catalog::builtin();
        let a = q("{@1} ; {}");
        let b = apply(&c, c.interp("set1_to_pset2").unwrap(), &a, cfg()).unwrap();
        assert_eq!(b.to_string(), "{{@1, {@1}}, {{@1}}} ; {{@1}}");
        let back = apply(&c, c.interp("pset2_to_set1").unwrap(), &b, cfg()).unwrap();
        assert_eq!(back.domain.len(), 1);
        assert_ne!(back, a);
    }

    #[test]
    fn source_and_target_are_checked() {
        let c = Catalog::builtin();
        let not_top = q("{@1, @2} ; {{@1}}");
        assert!(matches!(
            apply(&c, c.interp("top_to_nei").unwrap(), &not_top, cfg()),
            Err(InterpError::SourceViolation { .. })
        ));
    }

    #[test]
    fn stone_round_trip_on_powerset_algebras() {
        let c = Catalog::builtin();
        let (t, s) = c.pair("bool-stone").unwrap();
        for a in bool_samples(4, 2, 1) {
            let x = apply(&c, t, &a, cfg()).unwrap();
            assert_eq!(x.domain.len(), 2);
            let back = apply(&c, s, &x, cfg()).unwrap();
            assert_eq!(back.domain.len(), 4);
            let eta = eval_term(t.eta.as_ref().unwrap(), &a, &[], cfg()).unwrap();
            assert!(is_isomorphism(&witness_map(&eta).unwrap(), &a, &back));
        }
    }

    #[test]
    fn pairs_resolve() {
        let c = Catalog::builtin();
        let (t, s) = c.pair("top_to_nei, nei_to_top").unwrap();
        assert_eq!((t.source.as_str(), s.source.as_str()), ("top", "nei"));
        assert!(c.pair("nope").is_err());
    }
}
