use std::collections::HashMap;
use std::sync::Arc;

use super::nucleus::Nucleus;
use crate::error::{Error, Result};
use crate::tree::{LevelPerm, Letter};

/// Default bound on portrait depth.
pub const DEFAULT_DEPTH_CAP: usize = 64;

/// Handle to an interned portrait. Equal handles from one store mean equal elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortraitId(u32);

impl PortraitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Leaf(u32),
    Inner { perm: LevelPerm, children: Box<[PortraitId]> },
}

/// An owned portrait tree, for inspection and reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Portrait {
    Leaf(u32),
    Node { perm: LevelPerm, children: Vec<Portrait> },
}

impl Portrait {
    pub fn depth(&self) -> usize {
        match self {
            Portrait::Leaf(_) => 0,
            Portrait::Node { children, .. } => 1 + children.iter().map(Portrait::depth).max().unwrap_or(0),
        }
    }
}

/// Hash-consed canonical portraits over a fixed nucleus.
///
/// A node whose permutation and children coincide with the recursion of a
/// nucleus element is always replaced by that element's leaf, so two
/// portraits built here are equal exactly when their handles are.
#[derive(Debug, Clone)]
pub struct PortraitStore {
    nucleus: Arc<Nucleus>,
    nodes: Vec<Node>,
    depth: Vec<u32>,
    index: HashMap<Node, PortraitId>,
    collapse: HashMap<(LevelPerm, Box<[u32]>), u32>,
    mul_memo: HashMap<(PortraitId, PortraitId), PortraitId>,
    inv_memo: HashMap<PortraitId, PortraitId>,
    letters: HashMap<Letter, PortraitId>,
    in_progress: Vec<Letter>,
    depth_cap: usize,
}

impl PortraitStore {
    pub fn new(nucleus: Arc<Nucleus>, depth_cap: usize) -> Self {
        let n = nucleus.len() as u32;
        let mut collapse = HashMap::new();
        for i in 0..n {
            collapse.insert((nucleus.perm(i).clone(), nucleus.sections(i).into()), i);
        }
        let mut store = PortraitStore {
            nucleus,
            nodes: Vec::new(),
            depth: Vec::new(),
            index: HashMap::new(),
            collapse,
            mul_memo: HashMap::new(),
            inv_memo: HashMap::new(),
            letters: HashMap::new(),
            in_progress: Vec::new(),
            depth_cap,
        };
        for i in 0..n {
            store.intern(Node::Leaf(i), 0);
        }
        store
    }

    pub fn nucleus(&self) -> &Arc<Nucleus> {
        &self.nucleus
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    /// Number of interned portraits (leaves included).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, node: Node, depth: u32) -> PortraitId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = PortraitId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.depth.push(depth);
        self.index.insert(node, id);
        id
    }

    pub fn leaf(&self, i: u32) -> PortraitId {
        PortraitId(i)
    }

    pub fn identity(&self) -> PortraitId {
        self.leaf(self.nucleus.identity())
    }

    /// The nucleus element of a leaf portrait.
    pub fn as_leaf(&self, p: PortraitId) -> Option<u32> {
        match self.nodes[p.index()] {
            Node::Leaf(i) => Some(i),
            Node::Inner { .. } => None,
        }
    }

    /// Length of the longest root-to-leaf path: the contraction depth of the element.
    pub fn depth(&self, p: PortraitId) -> usize {
        self.depth[p.index()] as usize
    }

    fn make_node(&mut self, perm: LevelPerm, children: Vec<PortraitId>) -> Result<PortraitId> {
        let leaves: Option<Box<[u32]>> = children.iter().map(|&c| self.as_leaf(c)).collect();
        if let Some(leaves) = leaves {
            if let Some(&i) = self.collapse.get(&(perm.clone(), leaves)) {
                return Ok(self.leaf(i));
            }
        }
        let depth = 1 + children.iter().map(|c| self.depth[c.index()]).max().unwrap_or(0);
        if depth as usize > self.depth_cap {
            return Err(Error::ContractionCap { depth: self.depth_cap });
        }
        Ok(self.intern(Node::Inner { perm, children: children.into() }, depth))
    }

    /// Root permutation and children of any portrait, expanding leaves one level.
    fn expand(&self, p: PortraitId) -> (LevelPerm, Vec<PortraitId>) {
        match &self.nodes[p.index()] {
            Node::Leaf(i) => (
                self.nucleus.perm(*i).clone(),
                self.nucleus.sections(*i).iter().map(|&j| self.leaf(j)).collect(),
            ),
            Node::Inner { perm, children } => (perm.clone(), children.to_vec()),
        }
    }

    pub fn root_perm(&self, p: PortraitId) -> LevelPerm {
        match &self.nodes[p.index()] {
            Node::Leaf(i) => self.nucleus.perm(*i).clone(),
            Node::Inner { perm, .. } => perm.clone(),
        }
    }

    pub fn child(&self, p: PortraitId, x: u8) -> PortraitId {
        match &self.nodes[p.index()] {
            Node::Leaf(i) => self.leaf(self.nucleus.section(*i, x)),
            Node::Inner { children, .. } => children[x as usize],
        }
    }

    /// `p · q`, where `q` acts first.
    pub fn mul(&mut self, p: PortraitId, q: PortraitId) -> Result<PortraitId> {
        self.mul_at(p, q, 0)
    }

    fn mul_at(&mut self, p: PortraitId, q: PortraitId, level: usize) -> Result<PortraitId> {
        if let Some(&r) = self.mul_memo.get(&(p, q)) {
            return Ok(r);
        }
        if let (Some(i), Some(j)) = (self.as_leaf(p), self.as_leaf(q)) {
            if let Some(k) = self.nucleus.product(i, j) {
                let r = self.leaf(k);
                self.mul_memo.insert((p, q), r);
                return Ok(r);
            }
        }
        if level > self.depth_cap {
            return Err(Error::ContractionCap { depth: self.depth_cap });
        }
        let (pp, pc) = self.expand(p);
        let (qp, qc) = self.expand(q);
        let perm = pp.compose(&qp);
        let mut children = Vec::with_capacity(qc.len());
        for (x, &c) in qc.iter().enumerate() {
            let y = qp.apply(x as u8) as usize;
            children.push(self.mul_at(pc[y], c, level + 1)?);
        }
        let r = self.make_node(perm, children)?;
        self.mul_memo.insert((p, q), r);
        Ok(r)
    }

    pub fn inverse(&mut self, p: PortraitId) -> Result<PortraitId> {
        if let Some(i) = self.as_leaf(p) {
            return Ok(self.leaf(self.nucleus.inverse(i)));
        }
        if let Some(&r) = self.inv_memo.get(&p) {
            return Ok(r);
        }
        let (perm, children) = self.expand(p);
        let inv = perm.inverse();
        let mut out = Vec::with_capacity(children.len());
        for y in 0..children.len() as u8 {
            out.push(self.inverse(children[inv.apply(y) as usize])?);
        }
        let r = self.make_node(inv, out)?;
        self.inv_memo.insert(p, r);
        Ok(r)
    }

    pub fn letter(&mut self, l: Letter) -> Result<PortraitId> {
        if let Some(&p) = self.letters.get(&l) {
            return Ok(p);
        }
        if let Some(i) = self.nucleus.state_index(l.state()) {
            let i = if l.is_inverse() { self.nucleus.inverse(i) } else { i };
            return Ok(self.leaf(i));
        }
        if self.in_progress.contains(&l) || self.in_progress.len() > self.depth_cap {
            // A state outside the nucleus reachable from itself: not contracting onto this nucleus.
            return Err(Error::ContractionCap { depth: self.depth_cap });
        }
        self.in_progress.push(l);
        let result = self.letter_node(l);
        self.in_progress.pop();
        let p = result?;
        self.letters.insert(l, p);
        Ok(p)
    }

    fn letter_node(&mut self, l: Letter) -> Result<PortraitId> {
        let machine = self.nucleus.machine().clone();
        let arity = machine.arity() as u8;
        let perm = machine.word_perm(&[l]);
        let mut children = Vec::with_capacity(arity as usize);
        for x in 0..arity {
            let s = machine.word_section(&[l], x);
            children.push(self.word(&s)?);
        }
        self.make_node(perm, children)
    }

    /// Canonical portrait of a word over the nucleus machine.
    pub fn word(&mut self, word: &[Letter]) -> Result<PortraitId> {
        let mut p = self.identity();
        for &l in word {
            let q = self.letter(l)?;
            p = self.mul(p, q)?;
        }
        Ok(p)
    }

    /// `g(v)` read off the portrait.
    pub fn act(&self, mut p: PortraitId, v: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(v.len());
        for (k, &x) in v.iter().enumerate() {
            if let Some(i) = self.as_leaf(p) {
                out.extend(self.nucleus.act(i, &v[k..]));
                return out;
            }
            out.push(self.root_perm(p).apply(x));
            p = self.child(p, x);
        }
        out
    }

    /// Permutation of level `n` in lexicographic order.
    pub fn level_permutation(&self, p: PortraitId, n: usize) -> Vec<u32> {
        let arity = self.nucleus.machine().arity() as u32;
        let size = (arity as usize).pow(n as u32);
        let mut out = vec![0u32; size];
        let mut v = vec![0u8; n];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut t = idx;
            for k in (0..n).rev() {
                v[k] = (t % arity as usize) as u8;
                t /= arity as usize;
            }
            *slot = self.act(p, &v).iter().fold(0u32, |acc, &y| acc * arity + y as u32);
        }
        out
    }

    pub fn tree(&self, p: PortraitId) -> Portrait {
        match &self.nodes[p.index()] {
            Node::Leaf(i) => Portrait::Leaf(*i),
            Node::Inner { perm, children } => Portrait::Node {
                perm: perm.clone(),
                children: children.iter().map(|&c| self.tree(c)).collect(),
            },
        }
    }
}
