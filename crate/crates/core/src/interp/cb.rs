//! Turning a pair of injections `t: T → S` and `s: S → T` into a bijection
//! by chasing each element's history of preimages.
//!
//! For `a ∈ T`, walk backwards `a ← s⁻¹(a) ← t⁻¹(s⁻¹(a)) ← ...`. If the walk
//! stops at a `T` element (no `s`-preimage) then `u(a) = t(a)`; if it stops at
//! an `S` element (no `t`-preimage) then `u(a) = s⁻¹(a)`; if it returns to
//! `a` then `u(a) = t(a)`.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{apply, Interpretation, InterpError};
use crate::formulas::EvalConfig;
use crate::report::CheckReport;
use crate::structured::QuasiStructuredSet;
use crate::theories::{enumerate_models, Catalog};

/// Two finite catalogs with a total map `t` and a possibly partial map `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractInjectionPair {
    #[serde(rename = "T")]
    pub t_catalog: Vec<String>,
    #[serde(rename = "S")]
    pub s_catalog: Vec<String>,
    pub t: BTreeMap<String, String>,
    #[serde(default)]
    pub s: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The history ends at an element of `T`; `u = t`.
    TStopper,
    /// The history ends at an element of `S`; `u = s⁻¹`.
    SStopper,
    /// The history returns to its start; `u = t`.
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub element: String,
    pub branch: Branch,
    /// The element followed by its successive preimages, alternating sides.
    pub chain: Vec<String>,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub mode: String,
    pub traces: Vec<Trace>,
    pub bijective: bool,
    /// Whether `u` agrees with `t` everywhere.
    pub u_equals_t: bool,
}

impl Construction {
    /// The branch taken at each element, in catalog order.
    pub fn branches(&self) -> Vec<Branch> {
        self.traces.iter().map(|t| t.branch).collect()
    }

    pub fn image_of(&self, element: &str) -> Option<&str> {
        self.traces.iter().find(|t| t.element == element).map(|t| t.image.as_str())
    }

    pub fn to_report(&self, subject: &str, sample: &str) -> CheckReport {
        let mut r = CheckReport::new("cb", subject, sample);
        r.witnesses = self.traces.iter().map(|t| serde_json::to_value(t).expect("serializable")).collect();
        if !self.bijective {
            r.refute(json!({
                "reason": "the constructed map is not a bijection on the catalogs",
                "map": self.traces.iter().map(|t| (t.element.clone(), t.image.clone())).collect::<BTreeMap<_, _>>(),
            }));
        }
        if self.u_equals_t {
            r.notes.push("u agrees with t everywhere".into());
        }
        r
    }
}

fn check_injective<E: Ord + Clone + Display>(name: &str, map: &BTreeMap<E, E>) -> Result<(), InterpError> {
    let mut seen: BTreeMap<&E, &E> = BTreeMap::new();
    for (x, y) in map {
        if let Some(prev) = seen.insert(y, x) {
            return Err(InterpError::NotInjective { name: name.into(), first: prev.to_string(), second: x.to_string() });
        }
    }
    Ok(())
}

/// Runs the chase from every element of `t_cat`. `t` must be total on
/// `t_cat`; `s` may be partial. Both must be injective and stay inside the
/// catalogs.
pub fn construct<E: Ord + Clone + Display>(
    mode: &str,
    t_cat: &[E],
    s_cat: &[E],
    t: &BTreeMap<E, E>,
    s: &BTreeMap<E, E>,
) -> Result<Construction, InterpError> {
    let mut t_cat_sorted = t_cat.to_vec();
    t_cat_sorted.sort();
    let mut s_cat_sorted = s_cat.to_vec();
    s_cat_sorted.sort();
    let (t_cat, s_cat) = (&t_cat_sorted[..], &s_cat_sorted[..]);
    let in_t = |x: &E| t_cat.binary_search(x).is_ok();
    let in_s = |x: &E| s_cat.binary_search(x).is_ok();
    for a in t_cat {
        if !t.contains_key(a) {
            return Err(InterpError::IncompleteCatalog(format!("t has no value at {a}")));
        }
    }
    for (x, y) in t {
        if !in_t(x) || !in_s(y) {
            return Err(InterpError::IncompleteCatalog(format!("t: {x} -> {y} leaves the catalogs")));
        }
    }
    for (x, y) in s {
        if !in_s(x) || !in_t(y) {
            return Err(InterpError::IncompleteCatalog(format!("s: {x} -> {y} leaves the catalogs")));
        }
    }
    check_injective("t", t)?;
    check_injective("s", s)?;
    let t_inv: BTreeMap<&E, &E> = t.iter().map(|(x, y)| (y, x)).collect();
    let s_inv: BTreeMap<&E, &E> = s.iter().map(|(x, y)| (y, x)).collect();

    let mut traces = Vec::with_capacity(t_cat.len());
    for a in t_cat {
        let mut chain = vec![a.to_string()];
        let mut x = a;
        // Preimages are unique, so the walk either stops or returns to `a`
        // within one lap of the finite catalogs.
        let (branch, image) = loop {
            let Some(b) = s_inv.get(x) else { break (Branch::TStopper, &t[a]) };
            chain.push(b.to_string());
            let Some(prev) = t_inv.get(b) else { break (Branch::SStopper, s_inv[a]) };
            if *prev == a {
                chain.push(a.to_string());
                break (Branch::Cycle, &t[a]);
            }
            chain.push(prev.to_string());
            x = prev;
            assert!(chain.len() <= 2 * (t_cat.len() + s_cat.len()) + 2, "preimage walk failed to terminate");
        };
        traces.push((a, branch, chain, image));
    }
    let mut images: Vec<&E> = traces.iter().map(|t| t.3).collect();
    images.sort();
    images.dedup();
    let bijective = images.len() == t_cat.len() && images.len() == s_cat.len();
    let u_equals_t = traces.iter().all(|(a, _, _, img)| t[*a] == **img);
    Ok(Construction {
        mode: mode.into(),
        traces: traces
            .into_iter()
            .map(|(a, branch, chain, image)| Trace { element: a.to_string(), branch, chain, image: image.to_string() })
            .collect(),
        bijective,
        u_equals_t,
    })
}

impl AbstractInjectionPair {
    pub fn construct(&self) -> Result<Construction, InterpError> {
        construct("abstract", &self.t_catalog, &self.s_catalog, &self.t, &self.s)
    }
}

/// The graph of `i` on `catalog`, checking that it preserves domains and is
/// injective.
fn graph_on(
    cat: &Catalog,
    i: &Interpretation,
    catalog: &[QuasiStructuredSet],
    config: EvalConfig,
) -> Result<BTreeMap<QuasiStructuredSet, QuasiStructuredSet>, InterpError> {
    let images = crate::exec::map(catalog, |a| apply(cat, i, a, config));
    let mut graph = BTreeMap::new();
    for (a, b) in catalog.iter().zip(images) {
        let b = b?;
        if b.domain != a.domain {
            return Err(InterpError::NotDomainPreserving { name: i.name.clone(), input: a.to_string() });
        }
        graph.insert(a.clone(), b);
    }
    check_injective(&i.name, &graph)?;
    Ok(graph)
}

/// The construction on the fibre of models over `@1..@n`, where both
/// interpretations act on the enumerated models.
pub fn construct_on_fibre(
    cat: &Catalog,
    t: &Interpretation,
    s: &Interpretation,
    atoms: usize,
    config: EvalConfig,
) -> Result<Construction, InterpError> {
    if t.source != s.target || t.target != s.source {
        return Err(InterpError::Mismatch(t.name.clone(), s.name.clone()));
    }
    let t_models = enumerate_models(cat.theory(&t.source)?, atoms, config)?.models;
    let s_models = enumerate_models(cat.theory(&t.target)?, atoms, config)?.models;
    let t_graph = graph_on(cat, t, &t_models, config)?;
    let s_graph = graph_on(cat, s, &s_models, config)?;
    construct(&format!("fibre of {atoms} atoms"), &t_models, &s_models, &t_graph, &s_graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(t_cat: &[&str], s_cat: &[&str], t: &[(&str, &str)], s: &[(&str, &str)]) -> AbstractInjectionPair {
        let m = |v: &[(&str, &str)]| v.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
        AbstractInjectionPair {
            t_catalog: t_cat.iter().map(|x| x.to_string()).collect(),
            s_catalog: s_cat.iter().map(|x| x.to_string()).collect(),
            t: m(t),
            s: m(s),
        }
    }

    #[test]
    fn t_stoppers() {
        let p = pair(&["a0", "a1"], &["b0", "b1"], &[("a0", "b0"), ("a1", "b1")], &[("b0", "a1")]);
        let c = p.construct().unwrap();
        assert_eq!(c.branches(), [Branch::TStopper, Branch::TStopper]);
        assert_eq!(c.traces[1].chain, ["a1", "b0", "a0"]);
        assert_eq!((c.image_of("a0"), c.image_of("a1")), (Some("b0"), Some("b1")));
        assert!(c.bijective && c.u_equals_t);
    }

    #[test]
    fn s_stopper() {
        let p = pair(&["a0"], &["b0", "b1"], &[("a0", "b0")], &[("b1", "a0")]);
        let c = p.construct().unwrap();
        assert_eq!(c.branches(), [Branch::SStopper]);
        assert_eq!(c.traces[0].chain, ["a0", "b1"]);
        assert_eq!(c.image_of("a0"), Some("b1"));
        assert!(!c.bijective);
    }

    #[test]
    fn cycle() {
        let p = pair(&["a0", "a1"], &["b0", "b1"], &[("a0", "b0"), ("a1", "b1")], &[("b0", "a1"), ("b1", "a0")]);
        let c = p.construct().unwrap();
        assert_eq!(c.branches(), [Branch::Cycle, Branch::Cycle]);
        assert_eq!(c.traces[0].chain, ["a0", "b1", "a1", "b0", "a0"]);
        assert!(c.bijective && c.u_equals_t);
    }

    #[test]
    fn errors() {
        let p = pair(&["a0", "a1"], &["b0"], &[("a0", "b0"), ("a1", "b0")], &[]);
        assert!(matches!(p.construct(), Err(InterpError::NotInjective { .. })));
        let p = pair(&["a0"], &["b0"], &[("a0", "b9")], &[]);
        assert!(matches!(p.construct(), Err(InterpError::IncompleteCatalog(_))));
        let p = pair(&["a0", "a1"], &["b0", "b1"], &[("a0", "b0")], &[]);
        assert!(matches!(p.construct(), Err(InterpError::IncompleteCatalog(_))));
    }

    #[test]
    fn json_input() {
        let p: AbstractInjectionPair =
            serde_json::from_str(r#"{"T": ["a0"], "S": ["b0", "b1"], "t": {"a0": "b0"}, "s": {"b1": "a0"}}"#).unwrap();
        assert_eq!(p.construct().unwrap().image_of("a0"), Some("b1"));
    }

    #[test]
    fn subset_fibre_cycles() {
        let cat = Catalog::builtin();
        let (t, s) = cat.pair("subset-identity").unwrap();
        let c = construct_on_fibre(&cat, t, s, 2, EvalConfig::default()).unwrap();
        assert_eq!(c.traces.len(), 4);
        assert!(c.branches().iter().all(|b| *b == Branch::Cycle));
        assert!(c.bijective && c.u_equals_t);
        assert!(c.traces.iter().all(|tr| tr.element == tr.image));
    }

    #[test]
    fn fibre_requires_domain_preservation() {
        let cat = Catalog::builtin();
        let (t, s) = cat.pair("set1-pset2").unwrap();
        assert!(matches!(
            construct_on_fibre(&cat, t, s, 1, EvalConfig::default()),
            Err(InterpError::NotDomainPreserving { .. })
        ));
    }
}
