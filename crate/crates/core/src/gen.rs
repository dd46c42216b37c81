//! Seeded random instances: structured sets, atom maps, values above a
//! domain and bounded formulas. Used by the randomized checks in the suite
//! and by the tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formulas::{Formula, Name, Term};
use crate::hf::Hf;
use crate::structured::{AtomMap, QuasiStructuredSet};

/// Atoms that generated domains are drawn from.
pub const ATOM_POOL: u32 = 6;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// `n` distinct atoms from the pool, sorted.
    pub fn atoms(&mut self, n: usize) -> Vec<Hf> {
        let mut ids: Vec<u32> = (1..=ATOM_POOL).collect();
        ids.shuffle(&mut self.rng);
        let mut out: Vec<Hf> = ids[..n].iter().map(|&i| Hf::at(i)).collect();
        out.sort();
        out
    }

    /// A value built from `atoms` and `∅` of rank at most `rank`.
    pub fn value(&mut self, atoms: &[Hf], rank: u32) -> Hf {
        if rank == 0 || self.rng.gen_bool(0.2) {
            return if atoms.is_empty() || self.rng.gen_bool(0.25) {
                Hf::empty()
            } else {
                atoms.choose(&mut self.rng).expect("nonempty").clone()
            };
        }
        let n = self.rng.gen_range(0..=3);
        let members: Vec<Hf> = (0..n).map(|_| self.value(atoms, rank - 1)).collect();
        Hf::set_of(members)
    }

    /// A set of rank at most `rank` (so never an atom).
    pub fn set(&mut self, atoms: &[Hf], rank: u32) -> Hf {
        let n = self.rng.gen_range(0..=3);
        let members: Vec<Hf> = (0..n).map(|_| self.value(atoms, rank.saturating_sub(1))).collect();
        Hf::set_of(members)
    }

    /// A structured set on 1 to `max_atoms` atoms whose structure has rank at
    /// most `rank`.
    pub fn structured_set(&mut self, max_atoms: usize, rank: u32) -> QuasiStructuredSet {
        let n = self.rng.gen_range(1..=max_atoms);
        let atoms = self.atoms(n);
        let k = self.rng.gen_range(1..=4);
        let structure = Hf::set_of((0..k).map(|_| self.value(&atoms, rank.saturating_sub(1))).collect::<Vec<_>>());
        QuasiStructuredSet::new(Hf::set_of(atoms), structure)
    }

    /// A bijection from `domain` onto randomly chosen atoms of the pool.
    pub fn bijection(&mut self, domain: &Hf) -> AtomMap {
        let targets = self.atoms(domain.len());
        let mut perm: Vec<usize> = (0..targets.len()).collect();
        perm.shuffle(&mut self.rng);
        AtomMap::from_permutation(domain.members(), &targets, &perm)
    }

    /// An arbitrary map from `domain` into `codomain`.
    pub fn map_into(&mut self, domain: &[Hf], codomain: &[Hf]) -> AtomMap {
        let pairs: Vec<(Hf, Hf)> =
            domain.iter().map(|x| (x.clone(), codomain.choose(&mut self.rng).expect("nonempty").clone())).collect();
        AtomMap::new(pairs).expect("keys are distinct")
    }

    /// A random formula with every quantifier bounded, over the free
    /// variables `params`.
    pub fn delta0_formula(&mut self, params: &[Name], depth: u32) -> Formula {
        let mut scope: Vec<Name> = params.to_vec();
        let mut fresh = 0;
        self.formula(&mut scope, &mut fresh, depth)
    }

    fn formula(&mut self, scope: &mut Vec<Name>, fresh: &mut usize, depth: u32) -> Formula {
        let pick = if depth == 0 { self.rng.gen_range(0..3) } else { self.rng.gen_range(0..9) };
        match pick {
            0 | 1 => {
                let a = self.term(scope, fresh, depth.saturating_sub(1));
                let b = self.term(scope, fresh, depth.saturating_sub(1));
                Formula::Mem(a, b)
            }
            2 => {
                let a = self.term(scope, fresh, depth.saturating_sub(1));
                let b = self.term(scope, fresh, depth.saturating_sub(1));
                Formula::Eq(a, b)
            }
            3 => Formula::not(self.formula(scope, fresh, depth - 1)),
            4 => Formula::and(self.formula(scope, fresh, depth - 1), self.formula(scope, fresh, depth - 1)),
            5 => Formula::or(self.formula(scope, fresh, depth - 1), self.formula(scope, fresh, depth - 1)),
            6 => Formula::implies(self.formula(scope, fresh, depth - 1), self.formula(scope, fresh, depth - 1)),
            _ => {
                let bound = self.bound(scope, fresh, depth - 1);
                let x = self.fresh_name(fresh);
                scope.push(x.clone());
                let body = self.formula(scope, fresh, depth - 1);
                scope.pop();
                if pick == 7 {
                    Formula::Forall(x, bound, Box::new(body))
                } else {
                    Formula::Exists(x, bound, Box::new(body))
                }
            }
        }
    }

    fn fresh_name(&mut self, fresh: &mut usize) -> Name {
        *fresh += 1;
        Arc::from(format!("x{fresh}"))
    }

    /// Terms small enough to quantify over.
    fn bound(&mut self, scope: &mut Vec<Name>, fresh: &mut usize, depth: u32) -> Term {
        match self.rng.gen_range(0..6) {
            0 => Term::Domain,
            1 => Term::Structure,
            2 => Term::bigcup(Term::Structure),
            3 => Term::pow(Term::Domain),
            _ => self.term(scope, fresh, depth.min(1)),
        }
    }

    fn term(&mut self, scope: &mut Vec<Name>, fresh: &mut usize, depth: u32) -> Term {
        let leaf = |g: &mut Gen, scope: &[Name]| match g.rng.gen_range(0..5) {
            0 => Term::Domain,
            1 => Term::Structure,
            2 => Term::Empty,
            _ if !scope.is_empty() => Term::Var(scope.choose(&mut g.rng).expect("nonempty").clone()),
            _ => Term::Domain,
        };
        if depth == 0 || self.rng.gen_bool(0.5) {
            return leaf(self, scope);
        }
        match self.rng.gen_range(0..4) {
            0 => Term::bigcup(self.term(scope, fresh, depth - 1)),
            1 => {
                let a = self.term(scope, fresh, depth - 1);
                let b = self.term(scope, fresh, depth - 1);
                Term::pair(a, b)
            }
            2 => {
                let bound = self.bound(scope, fresh, depth - 1);
                let x = self.fresh_name(fresh);
                scope.push(x.clone());
                let body = self.formula(scope, fresh, depth - 1);
                scope.pop();
                Term::Sep(x, Box::new(bound), Box::new(body))
            }
            _ => {
                let bound = self.bound(scope, fresh, depth - 1);
                let x = self.fresh_name(fresh);
                scope.push(x.clone());
                let body = self.term(scope, fresh, depth - 1);
                scope.pop();
                Term::Image(x, Box::new(bound), Box::new(body))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{classify, LevyClass};
    use crate::structured::{check_quasi, check_structured};

    #[test]
    fn generated_sets_are_structured() {
        let mut g = Gen::new(7);
        for _ in 0..200 {
            let q = g.structured_set(3, 4);
            assert!(q.structure.rank() <= 4);
            assert!(check_structured(&q.domain, &q.structure).valid(), "{q}");
            assert!(check_quasi(&q.domain, &q.structure).valid(), "{q}");
        }
    }

    #[test]
    fn formulas_are_bounded() {
        let mut g = Gen::new(3);
        let params: Vec<Name> = vec!["c0".into()];
        for _ in 0..200 {
            let f = g.delta0_formula(&params, 3);
            assert_eq!(classify(&f), LevyClass::Delta0);
            assert!(f.free_vars().iter().all(|v| &**v == "c0"));
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = Gen::new(11).structured_set(3, 4);
        let b = Gen::new(11).structured_set(3, 4);
        assert_eq!(a, b);
    }
}
