use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::nucleus::{compute_nucleus, Nucleus, NucleusConfig};
use super::portrait::{Portrait, PortraitId, PortraitStore, DEFAULT_DEPTH_CAP};
use crate::error::{Error, Result};
use crate::tree::{Element, Letter, Machine, Word};

/// Longest generator word tried when naming nucleus elements.
const NAME_SEARCH_LEN: usize = 16;

/// A contracting group with a computed nucleus and a portrait store.
#[derive(Debug, Clone)]
pub struct Group {
    machine: Arc<Machine>,
    generators: Vec<Element>,
    store: PortraitStore,
    names: Option<Names>,
}

#[derive(Debug, Clone)]
struct Names {
    /// Rank of each nucleus element in the shortlex order of its name word.
    rank: Vec<usize>,
    /// Shortlex-least generator word, as indices into the generator alphabet.
    words: Vec<Option<Vec<usize>>>,
}

impl Group {
    /// Computes the nucleus of `⟨generators⟩` with candidate cap `cap`.
    pub fn new(generators: &[Element], cap: usize) -> Result<Self> {
        Self::with_config(generators, &NucleusConfig::with_cap(cap), DEFAULT_DEPTH_CAP)
    }

    pub fn with_config(generators: &[Element], config: &NucleusConfig, depth_cap: usize) -> Result<Self> {
        let nucleus = Arc::new(compute_nucleus(generators, config)?);
        Ok(Group {
            machine: nucleus.machine().clone(),
            generators: generators.to_vec(),
            store: PortraitStore::new(nucleus, depth_cap),
            names: None,
        })
    }

    pub fn machine(&self) -> &Arc<Machine> {
        &self.machine
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn nucleus(&self) -> &Arc<Nucleus> {
        self.store.nucleus()
    }

    pub fn store(&self) -> &PortraitStore {
        &self.store
    }

    fn check(&self, g: &Element) -> Result<()> {
        if Arc::ptr_eq(g.machine(), &self.machine) || **g.machine() == *self.machine {
            Ok(())
        } else {
            Err(Error::IncompatibleMachines)
        }
    }

    /// Canonical portrait handle of `g`.
    pub fn portrait(&mut self, g: &Element) -> Result<PortraitId> {
        self.check(g)?;
        self.store.word(g.word())
    }

    pub fn portrait_of_word(&mut self, word: &[Letter]) -> Result<PortraitId> {
        self.store.word(word)
    }

    pub fn portrait_tree(&mut self, g: &Element) -> Result<Portrait> {
        let p = self.portrait(g)?;
        Ok(self.store.tree(p))
    }

    pub fn mul(&mut self, p: PortraitId, q: PortraitId) -> Result<PortraitId> {
        self.store.mul(p, q)
    }

    pub fn identity_portrait(&self) -> PortraitId {
        self.store.identity()
    }

    pub fn is_trivial(&mut self, g: &Element) -> Result<bool> {
        Ok(self.portrait(g)? == self.store.identity())
    }

    pub fn equal(&mut self, g: &Element, h: &Element) -> Result<bool> {
        Ok(self.portrait(g)? == self.portrait(h)?)
    }

    /// Least `n` such that every section of `g` at depth `n` is a nucleus element.
    pub fn contraction_depth(&mut self, g: &Element) -> Result<usize> {
        let p = self.portrait(g)?;
        Ok(self.store.depth(p))
    }

    /// Least `k ≤ cap` with `g^k = 1`, or `None` if there is none.
    pub fn order_of(&mut self, g: &Element, cap: u64) -> Result<Option<u64>> {
        let p = self.portrait(g)?;
        let id = self.store.identity();
        let mut q = p;
        for k in 1..=cap {
            if q == id {
                return Ok(Some(k));
            }
            q = self.store.mul(q, p)?;
        }
        Ok(None)
    }

    /// Permutation of level `n` induced by `g`, read off its portrait.
    pub fn level_permutation(&mut self, g: &Element, n: usize) -> Result<Vec<u32>> {
        let p = self.portrait(g)?;
        Ok(self.store.level_permutation(p, n))
    }

    fn names(&mut self) -> Result<&Names> {
        if self.names.is_none() {
            let names = self.compute_names()?;
            self.names = Some(names);
        }
        Ok(self.names.as_ref().unwrap())
    }

    /// Breadth-first search over generator words in shortlex order, recording
    /// the first word that lands on each nucleus element.
    fn compute_names(&mut self) -> Result<Names> {
        let n = self.nucleus().len();
        let gens: Vec<Word> = self.generators.iter().map(|g| g.word().to_vec()).collect();
        let gen_portraits: Vec<PortraitId> =
            gens.iter().map(|w| self.store.word(w)).collect::<Result<_>>()?;
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut found = 0;
        let mut seen: HashMap<PortraitId, ()> = HashMap::new();
        let id = self.store.identity();
        let mut frontier: Vec<(Vec<usize>, PortraitId)> = vec![(Vec::new(), id)];
        seen.insert(id, ());
        words[self.nucleus().identity() as usize] = Some(Vec::new());
        found += 1;
        for _ in 0..NAME_SEARCH_LEN {
            if found == n || frontier.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for (w, p) in &frontier {
                for (k, &gp) in gen_portraits.iter().enumerate() {
                    let q = match self.store.mul(*p, gp) {
                        Ok(q) => q,
                        Err(Error::ContractionCap { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    if seen.insert(q, ()).is_some() {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(k);
                    if let Some(i) = self.store.as_leaf(q) {
                        if words[i as usize].is_none() {
                            words[i as usize] = Some(w2.clone());
                            found += 1;
                        }
                    }
                    next.push((w2, q));
                }
            }
            frontier = next;
            if seen.len() > 200_000 {
                break;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let key = |i: usize| match &words[i] {
                Some(w) => (0, w.len(), w.clone(), Vec::new()),
                None => (1, 0, Vec::new(), self.nucleus().word(i as u32).to_vec()),
            };
            key(a).cmp(&key(b))
        });
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        Ok(Names { rank, words })
    }

    /// Stable name `n<rank>` of a nucleus element.
    pub fn nucleus_name(&mut self, i: u32) -> Result<String> {
        Ok(format!("n{}", self.names()?.rank[i as usize]))
    }

    /// Shortlex-least generator word naming nucleus element `i`, when one was found.
    pub fn nucleus_word(&mut self, i: u32) -> Result<Option<String>> {
        let labels: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        Ok(self.names()?.words[i as usize].as_ref().map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|&k| labels[k].as_str()).collect::<Vec<_>>().join(" ")
            }
        }))
    }

    /// Text table `name | perm | sections | word`, one nucleus element per line in name order.
    pub fn nucleus_dump(&mut self) -> Result<String> {
        let n = self.nucleus().len();
        self.names()?;
        let mut rows: Vec<(usize, String)> = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let nucleus = self.nucleus().clone();
            let sects: Vec<String> =
                nucleus.sections(i).iter().map(|&j| self.nucleus_name(j)).collect::<Result<_>>()?;
            let word = match self.nucleus_word(i)? {
                Some(w) => w,
                None => format!("[{}]", self.machine.word_string(nucleus.word(i))),
            };
            let line = format!(
                "{} | {} | {} | {}",
                self.nucleus_name(i)?,
                nucleus.perm(i).cycle_string(),
                sects.join(" "),
                word
            );
            rows.push((self.names()?.rank[i as usize], line));
        }
        rows.sort();
        let mut out = String::from("name | perm | sections | word\n");
        for (_, line) in rows {
            writeln!(out, "{line}").unwrap();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_machine;

    fn d_group() -> (Arc<Machine>, Group) {
        let m = Arc::new(parse_machine(crate::machines::TILDE_D).unwrap());
        let gens: Vec<Element> =
            ["alpha", "beta", "gamma"].iter().map(|s| Element::named(&m, s).unwrap()).collect();
        let g = Group::new(&gens, 200).unwrap();
        (m, g)
    }

    #[test]
    fn generator_portraits_are_leaves() {
        let (m, mut g) = d_group();
        for s in ["alpha", "beta", "gamma"] {
            let e = Element::named(&m, s).unwrap();
            let p = g.portrait(&e).unwrap();
            assert!(g.store().as_leaf(p).is_some());
            assert_eq!(g.contraction_depth(&e).unwrap(), 0);
        }
    }

    #[test]
    fn dihedral_orders() {
        let (m, mut g) = d_group();
        let e = |s: &str| Element::parse(&m, s).unwrap();
        assert_eq!(g.order_of(&e("alpha beta"), 64).unwrap(), Some(8));
        assert_eq!(g.order_of(&e("alpha gamma"), 64).unwrap(), Some(4));
        assert_eq!(g.order_of(&e("beta gamma"), 64).unwrap(), Some(8));
        assert_eq!(g.order_of(&e("1"), 4).unwrap(), Some(1));
        assert!(g.is_trivial(&e("beta gamma").pow(8)).unwrap());
        assert!(!g.equal(&e("alpha beta"), &e("beta alpha")).unwrap());
    }

    #[test]
    fn dump_names_generators_first() {
        let (_, mut g) = d_group();
        let dump = g.nucleus_dump().unwrap();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines[1], "n0 | 1 | n0 n0 n0 n0 | 1");
        assert!(lines[2].starts_with("n1 | (1 2)(3 4) | n0 n0 n0 n0 | alpha"));
        assert_eq!(lines.len(), 1 + g.nucleus().len());
    }
}
