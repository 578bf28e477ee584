use std::fmt;
use std::sync::Arc;

use super::alphabet::{LevelPerm, Vertex};
use super::level::LevelActions;
use super::machine::{free_reduce, inverse_word, Letter, Machine, StateId, Word};
use crate::error::{Error, Result};

/// Default cap on the number of vertices of an explicitly stored level (4^10).
pub const DEFAULT_LEVEL_CAP: usize = 1 << 20;

/// A group element given as a freely reduced word over the states of a machine.
///
/// Words compose as functions: in `s₁ s₂ … s_k` the letter `s_k` acts first.
#[derive(Clone)]
pub struct Element {
    machine: Arc<Machine>,
    word: Word,
}

impl Element {
    pub fn identity(machine: &Arc<Machine>) -> Self {
        Element { machine: machine.clone(), word: Vec::new() }
    }

    pub fn from_word(machine: &Arc<Machine>, mut word: Word) -> Self {
        free_reduce(&mut word);
        Element { machine: machine.clone(), word }
    }

    pub fn state(machine: &Arc<Machine>, id: StateId) -> Self {
        Element { machine: machine.clone(), word: vec![Letter::pos(id)] }
    }

    /// Looks up a state by name.
    pub fn named(machine: &Arc<Machine>, name: &str) -> Result<Self> {
        let id = machine
            .id(name)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown state `{name}`") })?;
        Ok(Self::state(machine, id))
    }

    /// Parses a whitespace-separated word of state names; `x^-1` is an inverse, `1` the identity.
    pub fn parse(machine: &Arc<Machine>, text: &str) -> Result<Self> {
        let mut word = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            let (name, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let id = machine
                .id(name)
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown state `{name}`") })?;
            word.push(Letter::new(id, inv));
        }
        Ok(Self::from_word(machine, word))
    }

    pub fn machine(&self) -> &Arc<Machine> {
        &self.machine
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty_word(&self) -> bool {
        self.word.is_empty()
    }

    fn same_machine(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.machine, &other.machine) || *self.machine == *other.machine {
            Ok(())
        } else {
            Err(Error::IncompatibleMachines)
        }
    }

    /// `self · other`, where `other` acts first.
    pub fn product(&self, other: &Element) -> Result<Element> {
        self.same_machine(other)?;
        let mut word = Vec::with_capacity(self.word.len() + other.word.len());
        word.extend_from_slice(&self.word);
        word.extend_from_slice(&other.word);
        Ok(Element::from_word(&self.machine, word))
    }

    pub fn inverse(&self) -> Element {
        Element { machine: self.machine.clone(), word: inverse_word(&self.word) }
    }

    pub fn pow(&self, k: usize) -> Element {
        let mut word = Vec::with_capacity(self.word.len() * k);
        for _ in 0..k {
            word.extend_from_slice(&self.word);
        }
        Element::from_word(&self.machine, word)
    }

    /// `self⁻¹ · h⁻¹ · self · h`.
    pub fn commutator(&self, h: &Element) -> Result<Element> {
        self.inverse().product(&h.inverse())?.product(self)?.product(h)
    }

    /// `h⁻¹ · self · h`.
    pub fn conjugate_by(&self, h: &Element) -> Result<Element> {
        h.inverse().product(self)?.product(h)
    }

    pub fn root_perm(&self) -> LevelPerm {
        self.machine.word_perm(&self.word)
    }

    /// `g(v)`, computed letter by letter via `g(xu) = g(x) g|_x(u)`.
    pub fn act(&self, v: &Vertex) -> Result<Vertex> {
        v.validate(self.machine.alphabet())?;
        let mut cur = self.word.clone();
        let mut out = Vec::with_capacity(v.len());
        for &x in v.letters() {
            out.push(self.machine.word_apply(&cur, x));
            if cur.is_empty() {
                out.extend_from_slice(&v.letters()[out.len()..]);
                break;
            }
            cur = self.machine.word_section(&cur, x);
        }
        Ok(Vertex(out))
    }

    /// `g|_v`, satisfying `g(vu) = g(v) · g|_v(u)`.
    pub fn section(&self, v: &Vertex) -> Result<Element> {
        v.validate(self.machine.alphabet())?;
        let mut cur = self.word.clone();
        for &x in v.letters() {
            if cur.is_empty() {
                break;
            }
            cur = self.machine.word_section(&cur, x);
        }
        Ok(Element { machine: self.machine.clone(), word: cur })
    }

    pub fn section_at(&self, x: u8) -> Element {
        Element { machine: self.machine.clone(), word: self.machine.word_section(&self.word, x) }
    }

    /// Permutation induced on level `n` in lexicographic vertex order.
    pub fn level_permutation(&self, n: usize) -> Result<Vec<u32>> {
        let actions = LevelActions::new(&self.machine, n, DEFAULT_LEVEL_CAP)?;
        Ok(actions.word_perm(&self.word))
    }

    /// Reads the same word in another machine through a state map.
    pub fn map_states(
        &self,
        target: &Arc<Machine>,
        mut f: impl FnMut(StateId) -> Option<StateId>,
    ) -> Option<Element> {
        let word = self
            .word
            .iter()
            .map(|l| f(l.state()).map(|s| Letter::new(s, l.is_inverse())))
            .collect::<Option<Word>>()?;
        Some(Element::from_word(target, word))
    }
}

impl PartialEq for Element {
    /// Syntactic equality of reduced words; group equality lives in `canonical`.
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word && self.same_machine(other).is_ok()
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.machine.word_string(&self.word))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.machine.word_string(&self.word))
    }
}
