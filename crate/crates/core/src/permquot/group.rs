use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::chain::StabChain;
use super::perm::Perm;
use crate::error::{Error, Result};
use crate::tree::{Element, LevelActions, DEFAULT_LEVEL_CAP};

/// Seed for the random phase of chain construction; results do not depend on it.
const CHAIN_SEED: u64 = 0x5eed;

/// A permutation group given by generators, with a lazily built stabilizer chain.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: Arc<OnceLock<StabChain>>,
}

/// `(degree, #generators, order)` as emitted in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub generators: usize,
    pub order: String,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::ArityMismatch { expected: degree, got: g.degree() });
        }
        Ok(PermGroup { degree, generators, chain: Arc::new(OnceLock::new()) })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: Arc::new(OnceLock::new()) }
    }

    fn from_chain(degree: usize, generators: Vec<Perm>, chain: StabChain) -> Self {
        let lock = OnceLock::new();
        let _ = lock.set(chain);
        PermGroup { degree, generators, chain: Arc::new(lock) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.generators, CHAIN_SEED))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Perm::is_identity)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.chain().contains(p)
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary { degree: self.degree, generators: self.generators.len(), order: self.order().to_string() }
    }

    /// Smallest normal subgroup containing `seeds`.
    ///
    /// Conjugates of the current generators by the generators of `self` are
    /// added until a full round adds nothing; `round_cap` bounds the rounds.
    pub fn normal_closure(&self, seeds: &[Perm], round_cap: usize) -> Result<PermGroup> {
        if let Some(g) = seeds.iter().find(|g| g.degree() != self.degree) {
            return Err(Error::ArityMismatch { expected: self.degree, got: g.degree() });
        }
        let mut gens: Vec<Perm> = seeds.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain::new(self.degree, &gens, CHAIN_SEED);
        let mut frontier = gens.clone();
        for _ in 0..round_cap {
            if frontier.is_empty() {
                return Ok(PermGroup::from_chain(self.degree, gens, chain));
            }
            let mut next = Vec::new();
            for n in &frontier {
                for g in &self.generators {
                    let c = n.conjugate_by(g);
                    if chain.add_generator(c.clone()) {
                        gens.push(c.clone());
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        if frontier.is_empty() {
            return Ok(PermGroup::from_chain(self.degree, gens, chain));
        }
        Err(Error::ResourceLimit(format!("normal closure did not stabilize within {round_cap} rounds")))
    }

    /// `[self : sub]`, after checking that every generator of `sub` lies in `self`.
    pub fn subgroup_index(&self, sub: &PermGroup) -> Result<BigUint> {
        if sub.degree != self.degree {
            return Err(Error::ArityMismatch { expected: self.degree, got: sub.degree });
        }
        if let Some(i) = sub.generators.iter().position(|g| !self.contains(g)) {
            return Err(Error::NotASubgroup(i));
        }
        let (n, d) = (self.order(), sub.order());
        debug_assert!((&n % &d).is_zero());
        Ok(n / d)
    }

    /// The commutator subgroup, as the normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let mut seeds = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds, 10_000)
    }

    /// Length of the derived series, or `None` if it stalls before reaching 1 within `cap` steps.
    pub fn derived_length(&self, cap: usize) -> Result<Option<usize>> {
        let mut g = self.clone();
        for k in 0..=cap {
            if g.order().is_one() {
                return Ok(Some(k));
            }
            let d = g.derived_subgroup()?;
            if d.order() == g.order() {
                return Ok(None);
            }
            g = d;
        }
        Ok(None)
    }
}

/// The permutation group induced on level `n` by `gens` (lexicographic vertex order).
pub fn level_quotient(gens: &[Element], n: usize) -> Result<PermGroup> {
    let Some(first) = gens.first() else {
        return Err(Error::ResourceLimit("no generators given".into()));
    };
    let machine = first.machine();
    let actions = LevelActions::new(machine, n, DEFAULT_LEVEL_CAP)?;
    let perms = gens
        .iter()
        .map(|g| {
            if !Arc::ptr_eq(g.machine(), machine) && **g.machine() != **machine {
                return Err(Error::IncompatibleMachines);
            }
            Perm::from_images(actions.word_perm(g.word()))
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(actions.size(), perms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_not_a_subgroup() {
        let s4 = PermGroup::new(
            4,
            vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap(), Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()],
        )
        .unwrap();
        let v4 = PermGroup::new(
            4,
            vec![Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(), Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap()],
        )
        .unwrap();
        assert_eq!(s4.subgroup_index(&v4).unwrap(), BigUint::from(6u32));
        assert_eq!(s4.subgroup_index(&s4).unwrap(), BigUint::from(1u32));
        assert!(matches!(v4.subgroup_index(&s4), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn normal_closure_of_transposition_is_symmetric() {
        let s4 = PermGroup::new(
            4,
            vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap(), Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()],
        )
        .unwrap();
        let n = s4.normal_closure(&[Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap()], 100).unwrap();
        assert_eq!(n.order(), BigUint::from(12u32));
        assert_eq!(s4.derived_length(10).unwrap(), Some(3));
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::trivial(3);
        assert!(g.contains(&Perm::identity(3)));
        assert_eq!(g.order(), BigUint::from(1u32));
    }
}
