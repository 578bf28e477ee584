use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::Perm;

/// Consecutive trivial sifts after which the random phase stops.
const RANDOM_STREAK: usize = 40;
const PRODUCT_REPLACEMENT_SLOTS: usize = 10;

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    /// Strong generators that were added at this level (they fix all earlier base points).
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    /// For each point, the index into `reps` of `u` with `u(base) = point`.
    slot: Vec<Option<u32>>,
    reps: Vec<(Perm, Perm)>,
}

/// A base and strong generating set with explicit transversals.
///
/// Built by random Schreier–Sims and then completed deterministically: every
/// Schreier generator at every level is sifted, so the chain is exact
/// regardless of the random phase.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Perm], seed: u64) -> Self {
        let mut chain = StabChain { degree, levels: Vec::new() };
        let gens: Vec<Perm> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            chain.insert_residue(g.clone());
        }
        chain.random_phase(&gens, seed);
        chain.complete();
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> impl Iterator<Item = &Perm> {
        self.levels.iter().flat_map(|l| l.gens.iter())
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `g` from level `start`; returns the residue and the level where it stopped.
    fn sift_from(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let b = g.apply(level.base);
            match level.slot[b as usize] {
                Some(k) => g.left_compose_in_place(&level.reps[k as usize].1),
                None => return (g, i),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    /// Adds a non-member as a strong generator; returns false when `g` is already a member.
    pub fn add_generator(&mut self, g: Perm) -> bool {
        if self.contains(&g) {
            return false;
        }
        if self.levels.is_empty() {
            self.insert_residue(g);
        } else {
            self.place(g, 0);
        }
        self.complete();
        true
    }

    fn insert_residue(&mut self, g: Perm) {
        let (r, i) = self.sift_from(g, 0);
        if r.is_identity() {
            return;
        }
        self.place(r, i);
    }

    /// Records a residue that stopped at level `i` and extends the affected orbits.
    fn place(&mut self, r: Perm, i: usize) {
        if i == self.levels.len() {
            let base = r.first_moved().expect("residue is not the identity");
            let mut slot = vec![None; self.degree];
            slot[base as usize] = Some(0);
            let id = Perm::identity(self.degree);
            self.levels.push(Level { base, gens: Vec::new(), orbit: vec![base], slot, reps: vec![(id.clone(), id)] });
        }
        self.levels[i].gens.push(r.clone());
        for k in 0..=i {
            self.extend_orbit(k, &r);
        }
    }

    /// Extends the orbit of level `k` after `new` joined `S^(k) = ∪_{j ≥ k} gens_j`.
    ///
    /// Old orbit points are already closed under the old generators, so only
    /// `new` is applied to them; fresh points see every generator.
    fn extend_orbit(&mut self, k: usize, new: &Perm) {
        let gens: Vec<Perm> = self.levels[k..].iter().flat_map(|l| l.gens.iter().cloned()).collect();
        let level = &mut self.levels[k];
        let old = level.orbit.len();
        let push = |level: &mut Level, s: &Perm, b: u32| {
            let c = s.apply(b);
            if level.slot[c as usize].is_none() {
                let rep = s.compose(&level.reps[level.slot[b as usize].unwrap() as usize].0);
                let inv = rep.inverse();
                level.slot[c as usize] = Some(level.reps.len() as u32);
                level.reps.push((rep, inv));
                level.orbit.push(c);
            }
        };
        for idx in 0..old {
            let b = level.orbit[idx];
            push(level, new, b);
        }
        let mut idx = old;
        while idx < level.orbit.len() {
            let b = level.orbit[idx];
            for s in &gens {
                push(level, s, b);
            }
            idx += 1;
        }
    }

    fn random_phase(&mut self, gens: &[Perm], seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut slots: Vec<Perm> = (0..PRODUCT_REPLACEMENT_SLOTS).map(|i| gens[i % gens.len()].clone()).collect();
        let mut acc = Perm::identity(self.degree);
        let step = |rng: &mut ChaCha8Rng, slots: &mut Vec<Perm>, acc: &mut Perm| {
            let i = rng.gen_range(0..slots.len());
            let mut j = rng.gen_range(0..slots.len() - 1);
            if j >= i {
                j += 1;
            }
            slots[i] = if rng.gen_bool(0.5) { slots[i].compose(&slots[j]) } else { slots[j].compose(&slots[i]) };
            *acc = acc.compose(&slots[i]);
        };
        for _ in 0..50 {
            step(&mut rng, &mut slots, &mut acc);
        }
        let mut streak = 0;
        while streak < RANDOM_STREAK {
            step(&mut rng, &mut slots, &mut acc);
            let (r, i) = self.sift_from(acc.clone(), 0);
            if r.is_identity() {
                streak += 1;
            } else {
                streak = 0;
                self.place(r, i);
            }
        }
    }

    /// Deterministic completion: sifts every Schreier generator, adding residues until none remain.
    ///
    /// Levels are checked from the deepest up. A residue placed at level `j`
    /// leaves deeper levels untouched, so checking resumes at `j`.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            i -= 1;
            if let Some(j) = self.check_level(i) {
                i = j + 1;
            }
        }
    }

    /// Sifts the Schreier generators of level `i`; places the first non-trivial residue.
    fn check_level(&mut self, i: usize) -> Option<usize> {
        let gens: Vec<Perm> = self.levels[i..].iter().flat_map(|l| l.gens.iter().cloned()).collect();
        let level = &self.levels[i];
        for &b in &level.orbit {
            let u = &level.reps[level.slot[b as usize].unwrap() as usize].0;
            for s in &gens {
                let c = s.apply(b);
                let uc_inv = &level.reps[level.slot[c as usize].unwrap() as usize].1;
                let schreier = uc_inv.compose(&s.compose(u));
                let (r, j) = self.sift_from(schreier, i + 1);
                if !r.is_identity() {
                    self.place(r, j);
                    return Some(j);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_order() {
        let t = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let c = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let chain = StabChain::new(4, &[t, c], 7);
        assert_eq!(chain.order(), BigUint::from(24u32));
    }

    #[test]
    fn membership_in_cyclic_group() {
        let c = Perm::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        let chain = StabChain::new(6, std::slice::from_ref(&c), 1);
        assert_eq!(chain.order(), BigUint::from(6u32));
        assert!(chain.contains(&c.compose(&c)));
        assert!(!chain.contains(&Perm::from_cycles(6, &[&[0, 1]]).unwrap()));
    }

    #[test]
    fn add_generator_extends_the_group() {
        let a = Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[&[2, 3, 4]]).unwrap();
        let mut chain = StabChain::new(5, &[a], 3);
        assert!(chain.add_generator(b));
        assert_eq!(chain.order(), BigUint::from(60u32));
    }
}
