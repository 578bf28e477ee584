use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::reduce::Reducer;
use crate::error::{Error, Result};
use crate::tree::{Element, LevelActions, LevelPerm, Letter, Machine, Word};

const NONE: u32 = u32::MAX;

/// Tuning for [`compute_nucleus`].
#[derive(Debug, Clone)]
pub struct NucleusConfig {
    /// Bound on the size of the nucleus candidate set.
    pub cap: usize,
    /// Bound on all elements explored (candidates plus their products).
    pub explore_cap: usize,
    /// Bound on the word/state pairs visited while certifying.
    pub certify_cap: usize,
    /// Bound on the coinductive involution proof.
    pub proof_cap: usize,
}

impl NucleusConfig {
    pub fn with_cap(cap: usize) -> Self {
        NucleusConfig {
            cap,
            explore_cap: 64 * cap * cap + 1024,
            certify_cap: 4_000_000,
            proof_cap: 200_000,
        }
    }
}

impl Default for NucleusConfig {
    fn default() -> Self {
        Self::with_cap(200)
    }
}

/// The nucleus of a contracting group as a finite automaton over its own elements.
#[derive(Debug, Clone)]
pub struct Nucleus {
    machine: Arc<Machine>,
    reducer: Reducer,
    words: Vec<Word>,
    perms: Vec<LevelPerm>,
    sect: Vec<Vec<u32>>,
    inv: Vec<u32>,
    mult: Vec<u32>,
    identity: u32,
    state_index: Vec<Option<u32>>,
}

impl Nucleus {
    pub fn machine(&self) -> &Arc<Machine> {
        &self.machine
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    /// A representative word of element `i`.
    pub fn word(&self, i: u32) -> &[Letter] {
        &self.words[i as usize]
    }

    pub fn element(&self, i: u32) -> Element {
        Element::from_word(&self.machine, self.words[i as usize].clone())
    }

    pub fn perm(&self, i: u32) -> &LevelPerm {
        &self.perms[i as usize]
    }

    pub fn section(&self, i: u32, x: u8) -> u32 {
        self.sect[i as usize][x as usize]
    }

    pub fn sections(&self, i: u32) -> &[u32] {
        &self.sect[i as usize]
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    /// `i · j` when the product is again a nucleus element.
    pub fn product(&self, i: u32, j: u32) -> Option<u32> {
        let k = self.mult[i as usize * self.words.len() + j as usize];
        (k != NONE).then_some(k)
    }

    /// Nucleus index of a machine state, if the state is a nucleus element.
    pub fn state_index(&self, state: u32) -> Option<u32> {
        self.state_index.get(state as usize).copied().flatten()
    }

    /// Action of element `i` on a vertex, using the nucleus automaton alone.
    pub fn act(&self, mut i: u32, v: &[u8]) -> Vec<u8> {
        v.iter()
            .map(|&x| {
                let y = self.perms[i as usize].apply(x);
                i = self.sect[i as usize][x as usize];
                y
            })
            .collect()
    }
}

/// Grading of the machine by "which states can occur at depth k".
///
/// Sections of words at depth k are words over the states of class k+1, so
/// products are only ever needed between elements sharing a class.
struct Classes {
    sets: Vec<HashSet<u32>>,
    next: Vec<usize>,
}

impl Classes {
    fn new(machine: &Machine, generators: &[Word]) -> Self {
        let first: HashSet<u32> = generators.iter().flatten().map(|l| l.state()).collect();
        let mut sets: Vec<HashSet<u32>> = vec![first];
        let mut next = Vec::new();
        loop {
            let cur = sets.last().unwrap();
            let succ: HashSet<u32> = cur
                .iter()
                .flat_map(|&s| machine.state(s).sections.iter().flatten().map(|l| l.state()))
                .collect();
            if let Some(pos) = sets.iter().position(|s| *s == succ) {
                next.push(pos);
                break;
            }
            next.push(sets.len());
            sets.push(succ);
            if sets.len() > 64 {
                // Too many classes for a u64 mask: fall back to a single class.
                let all: HashSet<u32> = (0..machine.len() as u32).collect();
                return Classes { sets: vec![all], next: vec![0] };
            }
        }
        Classes { sets, next }
    }

    fn all(&self) -> u64 {
        if self.sets.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.sets.len()) - 1
        }
    }

    fn of_word(&self, word: &[Letter]) -> u64 {
        let mut mask = 0;
        for (c, set) in self.sets.iter().enumerate() {
            if word.iter().all(|l| set.contains(&l.state())) {
                mask |= 1 << c;
            }
        }
        mask
    }

    fn succ(&self, mask: u64) -> u64 {
        let mut out = 0;
        for (c, &n) in self.next.iter().enumerate() {
            if mask & (1 << c) != 0 {
                out |= 1 << n;
            }
        }
        out
    }
}

struct Candidate {
    word: Word,
    perm: LevelPerm,
    sect: Vec<u32>,
    mask: u64,
}

struct Explorer<'a> {
    machine: &'a Machine,
    reducer: &'a Reducer,
    actions: LevelActions,
    classes: Classes,
    cands: Vec<Candidate>,
    by_fp: HashMap<Vec<u32>, u32>,
    claims: Vec<(Word, u32)>,
    pending: Vec<u32>,
    explore_cap: usize,
}

impl<'a> Explorer<'a> {
    fn insert(&mut self, word: &[Letter], mask: u64) -> Result<u32> {
        let w = self.reducer.reduce(word);
        let fp = self.actions.word_perm(&w);
        if let Some(&i) = self.by_fp.get(&fp) {
            let c = &mut self.cands[i as usize];
            c.mask |= mask;
            if w != c.word {
                if w.len() < c.word.len() {
                    let old = std::mem::replace(&mut c.word, w);
                    self.claims.push((old, i));
                } else {
                    self.claims.push((w, i));
                }
            }
            return Ok(i);
        }
        if self.cands.len() >= self.explore_cap {
            return Err(Error::NotContracting { cap: self.explore_cap });
        }
        let i = self.cands.len() as u32;
        let perm = self.machine.word_perm(&w);
        self.cands.push(Candidate { word: w, perm, sect: Vec::new(), mask });
        self.by_fp.insert(fp, i);
        self.pending.push(i);
        Ok(i)
    }

    fn close(&mut self) -> Result<()> {
        while let Some(i) = self.pending.pop() {
            let word = self.cands[i as usize].word.clone();
            let mask = self.classes.succ(self.cands[i as usize].mask);
            let mut sect = Vec::with_capacity(self.machine.arity());
            for x in 0..self.machine.arity() as u8 {
                let s = self.machine.word_section(&word, x);
                sect.push(self.insert(&s, mask)?);
            }
            self.cands[i as usize].sect = sect;
        }
        self.propagate_masks();
        Ok(())
    }

    fn propagate_masks(&mut self) {
        loop {
            let mut changed = false;
            for i in 0..self.cands.len() {
                let m = self.classes.succ(self.cands[i].mask);
                for k in 0..self.cands[i].sect.len() {
                    let j = self.cands[i].sect[k] as usize;
                    if self.cands[j].mask | m != self.cands[j].mask {
                        self.cands[j].mask |= m;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Candidates lying on a cycle of the section graph, plus everything reachable from them.
    fn cyclic_part(&self) -> Vec<u32> {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.cands.len(), 0);
        let nodes: Vec<_> = (0..self.cands.len()).map(|_| g.add_node(())).collect();
        for (i, c) in self.cands.iter().enumerate() {
            for &j in &c.sect {
                g.update_edge(nodes[i], nodes[j as usize], ());
            }
        }
        let mut keep = vec![false; self.cands.len()];
        let mut stack = Vec::new();
        for scc in tarjan_scc(&g) {
            let cyclic = scc.len() > 1 || g.contains_edge(scc[0], scc[0]);
            if cyclic {
                for n in scc {
                    if !keep[n.index()] {
                        keep[n.index()] = true;
                        stack.push(n.index());
                    }
                }
            }
        }
        while let Some(i) = stack.pop() {
            for &j in &self.cands[i].sect {
                if !keep[j as usize] {
                    keep[j as usize] = true;
                    stack.push(j as usize);
                }
            }
        }
        (0..self.cands.len() as u32).filter(|&i| keep[i as usize]).collect()
    }

    /// Checks every recorded identification `word = candidate` as one bisimulation
    /// between reduced words and the candidate automaton.
    fn certify(&self, cap: usize, depth: usize) -> Result<()> {
        let arity = self.machine.arity() as u8;
        let mut seen: HashSet<(Word, u32)> = HashSet::new();
        let mut stack: Vec<(Word, u32)> = Vec::new();
        let initial = self
            .cands
            .iter()
            .enumerate()
            .map(|(i, c)| (c.word.clone(), i as u32))
            .chain(self.claims.iter().cloned());
        for pair in initial {
            if seen.insert(pair.clone()) {
                stack.push(pair);
            }
        }
        while let Some((w, i)) = stack.pop() {
            let cand = &self.cands[i as usize];
            for x in 0..arity {
                if self.machine.word_apply(&w, x) != cand.perm.apply(x) {
                    return Err(Error::FingerprintCollision { depth });
                }
            }
            for x in 0..arity {
                let s = self.reducer.reduce(&self.machine.word_section(&w, x));
                let pair = (s, cand.sect[x as usize]);
                if !seen.contains(&pair) {
                    if seen.len() >= cap {
                        return Err(Error::ProofCap(cap));
                    }
                    seen.insert(pair.clone());
                    stack.push(pair);
                }
            }
        }
        Ok(())
    }
}

fn fingerprint_depth(arity: usize) -> usize {
    let mut d = 0;
    let mut size = 1usize;
    while size * arity <= 1024 {
        size *= arity;
        d += 1;
    }
    d.max(1)
}

/// Computes the nucleus of the group generated by `generators`.
///
/// Starting from the section closure of the generators, the candidate set is
/// the part of the section graph lying on or below a cycle; products of pairs
/// of candidates are added with their section closures until the cyclic part
/// stops growing. Elements are deduplicated by their action on a fixed level
/// and every identification made that way is certified exactly afterwards.
pub fn compute_nucleus(generators: &[Element], config: &NucleusConfig) -> Result<Nucleus> {
    let machine = match generators.first() {
        Some(g) => g.machine().clone(),
        None => return Err(Error::ResourceLimit("no generators given".into())),
    };
    if generators.iter().any(|g| !Arc::ptr_eq(g.machine(), &machine) && **g.machine() != *machine) {
        return Err(Error::IncompatibleMachines);
    }
    let reducer = Reducer::detect(&machine, config.proof_cap)?;
    let base = fingerprint_depth(machine.arity());
    let mut last_err = None;
    for extra in [0, 2, 4] {
        match build(&machine, &reducer, generators, config, base + extra) {
            Err(e @ Error::FingerprintCollision { .. }) => last_err = Some(e),
            other => return other,
        }
    }
    Err(last_err.unwrap())
}

fn build(
    machine: &Arc<Machine>,
    reducer: &Reducer,
    generators: &[Element],
    config: &NucleusConfig,
    depth: usize,
) -> Result<Nucleus> {
    let gen_words: Vec<Word> = generators.iter().map(|g| g.word().to_vec()).collect();
    let mut ex = Explorer {
        machine,
        reducer,
        actions: LevelActions::new(machine, depth, usize::MAX)?,
        classes: Classes::new(machine, &gen_words),
        cands: Vec::new(),
        by_fp: HashMap::new(),
        claims: Vec::new(),
        pending: Vec::new(),
        explore_cap: config.explore_cap,
    };
    let all = ex.classes.all();
    ex.insert(&[], all)?;
    for w in &gen_words {
        let mask = ex.classes.of_word(w);
        ex.insert(w, mask)?;
        let inv = reducer.inverse(w);
        ex.insert(&inv, mask)?;
    }
    ex.close()?;

    let mut nuc = ex.cyclic_part();
    let mut products: HashMap<(u32, u32), u32> = HashMap::new();
    loop {
        if nuc.len() > config.cap {
            return Err(Error::NotContracting { cap: config.cap });
        }
        let mut added = false;
        for &i in &nuc {
            for &j in &nuc {
                if products.contains_key(&(i, j)) {
                    continue;
                }
                let mask = ex.cands[i as usize].mask & ex.cands[j as usize].mask;
                if mask == 0 {
                    continue;
                }
                let mut w = ex.cands[i as usize].word.clone();
                w.extend_from_slice(&ex.cands[j as usize].word);
                let k = ex.insert(&w, mask)?;
                products.insert((i, j), k);
                added = true;
            }
        }
        ex.close()?;
        let next = ex.cyclic_part();
        if next == nuc && !added {
            break;
        }
        nuc = next;
    }

    let pos: HashMap<u32, u32> = nuc.iter().enumerate().map(|(k, &i)| (i, k as u32)).collect();
    let mut inv = Vec::with_capacity(nuc.len());
    for &i in &nuc {
        let w = reducer.inverse(&ex.cands[i as usize].word);
        let mask = ex.cands[i as usize].mask;
        let j = ex.insert(&w, mask)?;
        inv.push(j);
    }
    ex.close()?;
    ex.certify(config.certify_cap, depth)?;

    let inv = inv
        .into_iter()
        .map(|j| pos.get(&j).copied().ok_or(Error::NotContracting { cap: config.cap }))
        .collect::<Result<Vec<u32>>>()?;
    let n = nuc.len();
    let mut mult = vec![NONE; n * n];
    for (a, &i) in nuc.iter().enumerate() {
        for (b, &j) in nuc.iter().enumerate() {
            if let Some(k) = products.get(&(i, j)).and_then(|k| pos.get(k)) {
                mult[a * n + b] = *k;
            }
        }
    }
    let sect = nuc
        .iter()
        .map(|&i| ex.cands[i as usize].sect.iter().map(|j| pos[j]).collect())
        .collect();
    let identity = pos[&0];
    let mut state_index = vec![None; machine.len()];
    for (s, slot) in state_index.iter_mut().enumerate() {
        let fp = ex.actions.word_perm(&[Letter::pos(s as u32)]);
        if let Some(i) = ex.by_fp.get(&fp) {
            // Only trust the identification if it was certified as a claim or representative.
            let w = vec![Letter::pos(s as u32)];
            let certified = ex.cands[*i as usize].word == w || ex.claims.iter().any(|(c, j)| *c == w && j == i);
            if certified {
                *slot = pos.get(i).copied();
            }
        }
    }
    Ok(Nucleus {
        machine: machine.clone(),
        reducer: reducer.clone(),
        words: nuc.iter().map(|&i| ex.cands[i as usize].word.clone()).collect(),
        perms: nuc.iter().map(|&i| ex.cands[i as usize].perm.clone()).collect(),
        sect,
        inv,
        mult,
        identity,
        state_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_machine;

    #[test]
    fn identity_nucleus() {
        let m = Arc::new(parse_machine(crate::machines::G012).unwrap());
        let n = compute_nucleus(&[Element::identity(&m)], &NucleusConfig::with_cap(10)).unwrap();
        assert_eq!(n.len(), 1);
        assert_eq!(n.identity(), 0);
        assert_eq!(n.product(0, 0), Some(0));
    }

    #[test]
    fn adding_machine_nucleus() {
        // The binary odometer t = sigma(1, t) has nucleus {1, t, t^-1}.
        let m = Arc::new(parse_machine("t = sigma*(1, t)").unwrap());
        let t = Element::state(&m, 0);
        let n = compute_nucleus(&[t], &NucleusConfig::with_cap(20)).unwrap();
        assert_eq!(n.len(), 3);
        assert!(n.state_index(0).is_some());
    }

    #[test]
    fn cap_is_reported() {
        let m = Arc::new(parse_machine(crate::machines::TILDE_D).unwrap());
        let gens: Vec<Element> = ["alpha", "beta", "gamma"].iter().map(|s| Element::named(&m, s).unwrap()).collect();
        let err = compute_nucleus(&gens, &NucleusConfig::with_cap(3)).unwrap_err();
        assert!(matches!(err, Error::NotContracting { cap: 3 }));
    }
}
