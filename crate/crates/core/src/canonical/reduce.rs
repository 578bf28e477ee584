use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::tree::{LevelActions, Letter, Machine, Word};

/// Word reduction: free cancellation plus `s s → 1` for states proven to be involutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reducer {
    involution: Vec<bool>,
}

impl Reducer {
    /// Free reduction only.
    pub fn free(machine: &Machine) -> Self {
        Reducer { involution: vec![false; machine.len()] }
    }

    /// Detects involutive states and proves them coinductively.
    ///
    /// Candidates are states whose square acts trivially on a few levels. The
    /// hypothesis "every candidate squares to 1" is then checked one level
    /// deeper than it is used, which makes the whole set sound at once. If the
    /// proof fails, no involution rewriting is used.
    pub fn detect(machine: &Machine, cap: usize) -> Result<Self> {
        let depth = probe_depth(machine);
        let actions = LevelActions::new(machine, depth, usize::MAX)?;
        let involution: Vec<bool> = (0..machine.len() as u32)
            .map(|s| {
                let sq = [Letter::pos(s), Letter::pos(s)];
                actions.word_perm(&sq).iter().enumerate().all(|(i, &x)| i as u32 == x)
            })
            .collect();
        let candidate = Reducer { involution };
        let goals: Vec<Word> = (0..machine.len() as u32)
            .filter(|&s| candidate.involution[s as usize])
            .map(|s| vec![Letter::pos(s), Letter::pos(s)])
            .collect();
        if goals.is_empty() {
            return Ok(Reducer::free(machine));
        }
        match Prover::new(machine, &candidate, cap).explore(goals, false) {
            Ok(true) => Ok(candidate),
            Ok(false) | Err(Error::ProofCap(_)) => Ok(Reducer::free(machine)),
            Err(e) => Err(e),
        }
    }

    pub fn is_involution(&self, state: u32) -> bool {
        self.involution.get(state as usize).copied().unwrap_or(false)
    }

    pub fn all_involutions(&self) -> bool {
        self.involution.iter().all(|&b| b)
    }

    #[inline]
    fn normalize(&self, l: Letter) -> Letter {
        if l.is_inverse() && self.involution[l.state() as usize] {
            l.inv()
        } else {
            l
        }
    }

    #[inline]
    fn cancels(&self, a: Letter, b: Letter) -> bool {
        a == b.inv() || (a == b && self.involution[a.state() as usize])
    }

    pub fn reduce(&self, word: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(word.len());
        for &l in word {
            let l = self.normalize(l);
            if matches!(out.last(), Some(&top) if self.cancels(top, l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    pub fn inverse(&self, word: &[Letter]) -> Word {
        word.iter().rev().map(|&l| self.normalize(l.inv())).collect()
    }

    /// A canonical representative of the conjugacy class of the cyclic word:
    /// cyclically reduced, then the least rotation of the word or its inverse.
    pub fn cyclic_canonical(&self, word: &[Letter]) -> Word {
        let mut w = self.reduce(word);
        let (mut lo, mut hi) = (0, w.len());
        while hi - lo >= 2 && self.cancels(w[lo], w[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        w = w[lo..hi].to_vec();
        if w.len() <= 1 {
            return w;
        }
        let inv = self.inverse(&w);
        let mut best = w.clone();
        for cand in [&w, &inv] {
            for r in 0..cand.len() {
                let rotated: Word = cand[r..].iter().chain(cand[..r].iter()).copied().collect();
                if rotated < best {
                    best = rotated;
                }
            }
        }
        best
    }
}

fn probe_depth(machine: &Machine) -> usize {
    match machine.arity() {
        2 => 8,
        3 => 5,
        4 => 4,
        _ => 2,
    }
}

/// Coinductive triviality prover for words over a machine.
///
/// A goal word must fix the first level; its sections, reduced and brought to
/// cyclic canonical form, become new goals unless already seen. When the goal
/// set closes, every goal acts trivially (induction on the level). A goal that
/// moves a first-level letter certifies nontriviality.
pub struct Prover<'a> {
    machine: &'a Machine,
    reducer: &'a Reducer,
    cap: usize,
}

impl<'a> Prover<'a> {
    pub fn new(machine: &'a Machine, reducer: &'a Reducer, cap: usize) -> Self {
        Prover { machine, reducer, cap }
    }

    pub fn is_trivial(&self, word: &[Letter]) -> Result<bool> {
        self.explore(vec![word.to_vec()], true)
    }

    pub fn equal(&self, g: &[Letter], h: &[Letter]) -> Result<bool> {
        let mut w = g.to_vec();
        w.extend(self.reducer.inverse(h));
        self.is_trivial(&w)
    }

    /// `reduce_goals = false` keeps the initial goals verbatim; only their
    /// sections are rewritten.
    pub(crate) fn explore(&self, goals: Vec<Word>, reduce_goals: bool) -> Result<bool> {
        let arity = self.machine.arity() as u8;
        let mut seen: HashSet<Word> = HashSet::new();
        let mut stack = Vec::new();
        for g in goals {
            let g = if reduce_goals { self.reducer.cyclic_canonical(&g) } else { g };
            if !g.is_empty() && seen.insert(g.clone()) {
                stack.push(g);
            }
        }
        while let Some(g) = stack.pop() {
            if (0..arity).any(|x| self.machine.word_apply(&g, x) != x) {
                return Ok(false);
            }
            for x in 0..arity {
                let s = self.reducer.cyclic_canonical(&self.machine.word_section(&g, x));
                if !s.is_empty() && !seen.contains(&s) {
                    if seen.len() >= self.cap {
                        return Err(Error::ProofCap(self.cap));
                    }
                    seen.insert(s.clone());
                    stack.push(s);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_machine;

    #[test]
    fn involutions_detected_in_bundled_machines() {
        for text in [crate::machines::TILDE_D, crate::machines::G012, crate::machines::H] {
            let m = parse_machine(text).unwrap();
            let r = Reducer::detect(&m, 100_000).unwrap();
            assert!(r.all_involutions(), "{text}");
        }
    }

    #[test]
    fn non_involution_is_not_assumed() {
        // The adding machine has infinite order.
        let m = parse_machine("t = sigma*(1, t)").unwrap();
        let r = Reducer::detect(&m, 10_000).unwrap();
        assert!(!r.is_involution(0));
        let p = Prover::new(&m, &r, 10_000);
        let t = Letter::pos(0);
        assert!(!p.is_trivial(&[t, t]).unwrap());
        assert!(p.is_trivial(&[t, t.inv()]).unwrap());
    }

    #[test]
    fn cyclic_canonical_is_conjugation_invariant() {
        let m = parse_machine(crate::machines::G012).unwrap();
        let r = Reducer::detect(&m, 100_000).unwrap();
        let (a, b, c) = (Letter::pos(0), Letter::pos(1), Letter::pos(2));
        let w = r.cyclic_canonical(&[a, b, c, b]);
        assert_eq!(w, r.cyclic_canonical(&[b, a, b, c]));
        assert_eq!(w, r.cyclic_canonical(&[c, b, a, b]));
        assert_eq!(w, r.cyclic_canonical(&[c, a, b, c, b, c]));
        assert!(r.cyclic_canonical(&[a, b, b, a]).is_empty());
    }
}
