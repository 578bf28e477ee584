//! Bounded search for a tree automorphism conjugating `𝒟_{w1}` onto `𝒟_{w2}` generator-wise.

use std::collections::HashMap;

use serde::Serialize;

use crate::canonical::Reducer;
use crate::error::Result;
use crate::family::{build_dw, BinSeqEP};
use crate::tree::{Machine, Word};

/// Default bound on explored search nodes.
pub const DEFAULT_NODE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Obstruction {
    /// No `g` exists: every assignment of level permutations down to `level` is contradictory.
    Unsat { level: usize, nodes: usize },
    /// The search did not refute; `identity_witness` marks the case `w1 = w2`, where `g = 1` works.
    Unknown { reason: String, identity_witness: bool, nodes: usize },
}

impl Obstruction {
    pub fn is_unsat(&self) -> bool {
        matches!(self, Obstruction::Unsat { .. })
    }
}

/// `A · g|_u = g|_v · B`, with `A` over the machine of `w2` and `B` over that of `w1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Equation {
    a: Word,
    u: usize,
    v: usize,
    b: Word,
}

struct Search<'a> {
    m2: &'a Machine,
    m1: &'a Machine,
    r2: Reducer,
    r1: Reducer,
    depth: usize,
    nodes: usize,
    cap: usize,
}

/// Union-find with parities: `bit[x] ⊕ bit[y] = parity`.
struct ParityUf {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUf {
    fn new(n: usize) -> Self {
        ParityUf { parent: (0..n).collect(), parity: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (r, p) = self.find(self.parent[x]);
        self.parent[x] = r;
        self.parity[x] ^= p;
        (r, self.parity[x])
    }

    /// Returns false on contradiction.
    fn union(&mut self, x: usize, y: usize, parity: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == parity;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ parity;
        true
    }
}

enum Outcome {
    Refuted(usize),
    Open(String),
}

impl Search<'_> {
    /// Vertices of the current level are numbered `0..n`; children of `u` are `2u` and `2u + 1`.
    fn solve(&mut self, level: usize, eqs: Vec<Equation>, n: usize) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Outcome::Open(format!("node cap {} reached", self.cap));
        }
        let mut uf = ParityUf::new(n);
        for e in &eqs {
            let pa = self.m2.word_apply(&e.a, 0);
            let pb = self.m1.word_apply(&e.b, 0);
            // perm(A) ⊕ π_u = π_v ⊕ perm(B)
            if !uf.union(e.u, e.v, pa ^ pb) {
                return Outcome::Refuted(level);
            }
        }
        if level == self.depth {
            return Outcome::Open(format!("depth {} reached without contradiction", self.depth));
        }
        let mut roots: Vec<usize> = (0..n).filter(|&x| uf.find(x).0 == x).collect();
        // Only components that occur in some equation influence the children.
        let used: std::collections::HashSet<usize> = eqs.iter().flat_map(|e| [e.u, e.v]).map(|x| uf.find(x).0).collect();
        roots.retain(|r| used.contains(r));
        if roots.len() > 20 {
            return Outcome::Open(format!("{} free components at level {level}", roots.len()));
        }
        let mut deepest = level;
        for mask in 0u64..(1u64 << roots.len()) {
            let root_bit: HashMap<usize, u8> = roots.iter().enumerate().map(|(i, &r)| (r, ((mask >> i) & 1) as u8)).collect();
            let mut bit = |x: usize| {
                let (r, p) = uf.find(x);
                root_bit.get(&r).copied().unwrap_or(0) ^ p
            };
            let mut children = Vec::with_capacity(2 * eqs.len());
            for e in &eqs {
                let pu = bit(e.u);
                for x in 0..2u8 {
                    // (A g_u)|_x = A|_{π_u(x)} g_{ux};  (g_v B)|_x = g_{v B(x)} B|_x
                    let a = self.r2.reduce(&self.m2.word_section(&e.a, x ^ pu));
                    let bx = self.m1.word_apply(&e.b, x);
                    let b = self.r1.reduce(&self.m1.word_section(&e.b, x));
                    let (cu, cv) = (2 * e.u + x as usize, 2 * e.v + bx as usize);
                    if a.is_empty() && b.is_empty() && cu == cv {
                        continue;
                    }
                    children.push(Equation { a, u: cu, v: cv, b });
                }
            }
            children.sort_by(|p, q| (p.u, p.v, &p.a, &p.b).cmp(&(q.u, q.v, &q.a, &q.b)));
            children.dedup();
            match self.solve(level + 1, children, 2 * n) {
                Outcome::Refuted(l) => deepest = deepest.max(l),
                open => return open,
            }
        }
        Outcome::Refuted(deepest)
    }
}

/// Searches for `g ∈ Aut(X*)` with `g⁻¹ x_{w2} g = x_{w1}` for `x ∈ {alpha, beta, gamma}`.
///
/// The level-`k` permutations of the sections of `g` are unknown bits; each
/// level contributes parity constraints, and every consistent choice spawns
/// the section equations one level down. `Unsat` is returned only when all
/// branches contradict within `depth` levels.
pub fn conjugator_obstruction(w1: &BinSeqEP, w2: &BinSeqEP, depth: usize) -> Result<Obstruction> {
    conjugator_obstruction_with_cap(w1, w2, depth, DEFAULT_NODE_CAP)
}

pub fn conjugator_obstruction_with_cap(w1: &BinSeqEP, w2: &BinSeqEP, depth: usize, cap: usize) -> Result<Obstruction> {
    if w1 == w2 {
        return Ok(Obstruction::Unknown { reason: "equal sequences".into(), identity_witness: true, nodes: 0 });
    }
    search(w1, w2, depth, cap)
}

fn search(w1: &BinSeqEP, w2: &BinSeqEP, depth: usize, cap: usize) -> Result<Obstruction> {
    let c1 = build_dw(w1);
    let c2 = build_dw(w2);
    let (m1, m2) = (c1.machine().clone(), c2.machine().clone());
    let mut search = Search {
        m2: &m2,
        m1: &m1,
        r2: Reducer::detect(&m2, 100_000)?,
        r1: Reducer::detect(&m1, 100_000)?,
        depth,
        nodes: 0,
        cap,
    };
    let eqs: Vec<Equation> = (0..3)
        .map(|k| Equation {
            a: c2.generators()[k].word().to_vec(),
            u: 0,
            v: 0,
            b: c1.generators()[k].word().to_vec(),
        })
        .collect();
    Ok(match search.solve(0, eqs, 1) {
        Outcome::Refuted(level) => Obstruction::Unsat { level, nodes: search.nodes },
        Outcome::Open(reason) => Obstruction::Unknown { reason, identity_witness: false, nodes: search.nodes },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinSeqEP {
        s.parse().unwrap()
    }

    #[test]
    fn first_letters_differ() {
        assert!(conjugator_obstruction(&w(":0"), &w(":1"), 3).unwrap().is_unsat());
        assert!(conjugator_obstruction(&w("0:01"), &w("1:01"), 4).unwrap().is_unsat());
    }

    #[test]
    fn equal_sequences_are_never_refuted() {
        let r = conjugator_obstruction(&w(":01"), &w(":01"), 4).unwrap();
        assert_eq!(r, Obstruction::Unknown { reason: "equal sequences".into(), identity_witness: true, nodes: 0 });
    }

    #[test]
    fn search_does_not_refute_the_identity() {
        // Without the shortcut the identity is still a solution, so no branch set can be refuted.
        for s in [":0", ":01", "1:001"] {
            let r = search(&w(s), &w(s), 5, DEFAULT_NODE_CAP).unwrap();
            assert!(!r.is_unsat(), "{s}: {r:?}");
        }
    }
}
