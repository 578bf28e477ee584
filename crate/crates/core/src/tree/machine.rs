use std::collections::HashMap;
use std::fmt;

use super::alphabet::{Alphabet, LevelPerm};
use crate::error::{Error, Result};

pub type StateId = u32;

/// A state of a machine or its formal inverse, packed as `state << 1 | inverse`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    #[inline]
    pub fn new(state: StateId, inverse: bool) -> Self {
        Letter(state << 1 | inverse as u32)
    }

    #[inline]
    pub fn pos(state: StateId) -> Self {
        Letter(state << 1)
    }

    #[inline]
    pub fn state(self) -> StateId {
        self.0 >> 1
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inv(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Sign convention: `+1` for a state, `-1` for its inverse.
    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "s{}⁻", self.state())
        } else {
            write!(f, "s{}", self.state())
        }
    }
}

pub type Word = Vec<Letter>;

/// Cancels adjacent `s s⁻¹` and `s⁻¹ s` pairs.
pub fn free_reduce(word: &mut Word) {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word.iter() {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *word = out;
}

pub fn inverse_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inv()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub perm: LevelPerm,
    /// One word of (positive or inverse) letters per alphabet letter; empty means identity.
    pub sections: Vec<Word>,
}

/// A finite-state wreath recursion: every state has a root permutation and a
/// section word for each letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    alphabet: Alphabet,
    states: Vec<State>,
    inv_perms: Vec<LevelPerm>,
    by_name: HashMap<String, StateId>,
}

impl Machine {
    pub fn new(alphabet: Alphabet, states: Vec<State>) -> Result<Self> {
        let mut by_name = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if s.perm.arity() != alphabet.arity() {
                return Err(Error::ArityMismatch { expected: alphabet.arity(), got: s.perm.arity() });
            }
            if s.sections.len() != alphabet.arity() {
                return Err(Error::ArityMismatch { expected: alphabet.arity(), got: s.sections.len() });
            }
            for sec in &s.sections {
                if let Some(bad) = sec.iter().find(|l| l.state() as usize >= states.len()) {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("state `{}` refers to missing state #{}", s.name, bad.state()),
                    });
                }
            }
            if by_name.insert(s.name.clone(), i as StateId).is_some() {
                return Err(Error::Parse { line: 0, msg: format!("duplicate state `{}`", s.name) });
            }
        }
        let inv_perms = states.iter().map(|s| s.perm.inverse()).collect();
        Ok(Self { alphabet, states, inv_perms, by_name })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &State {
        &self.states[id as usize]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.states[id as usize].name
    }

    #[inline]
    pub fn letter_apply(&self, l: Letter, x: u8) -> u8 {
        if l.is_inverse() {
            self.inv_perms[l.state() as usize].apply(x)
        } else {
            self.states[l.state() as usize].perm.apply(x)
        }
    }

    /// Appends `l|_x` to `out`.
    fn push_letter_section(&self, l: Letter, x: u8, out: &mut Word) {
        let s = &self.states[l.state() as usize];
        if l.is_inverse() {
            // (s⁻¹)|_x = (s|_{s⁻¹(x)})⁻¹
            let y = self.letter_apply(l, x);
            out.extend(s.sections[y as usize].iter().rev().map(|m| m.inv()));
        } else {
            out.extend_from_slice(&s.sections[x as usize]);
        }
    }

    /// Image of letter `x` under the word, read as a composition of functions
    /// (rightmost letter acts first).
    pub fn word_apply(&self, word: &[Letter], mut x: u8) -> u8 {
        for &l in word.iter().rev() {
            x = self.letter_apply(l, x);
        }
        x
    }

    pub fn word_perm(&self, word: &[Letter]) -> LevelPerm {
        let images = (0..self.arity() as u8).map(|x| self.word_apply(word, x)).collect();
        LevelPerm::from_images(images).expect("composition of permutations")
    }

    /// Section of a word at a letter: `(g·h)|_x = g|_{h(x)} · h|_x`.
    /// The result is freely reduced.
    pub fn word_section(&self, word: &[Letter], x: u8) -> Word {
        let mut ys = Vec::with_capacity(word.len());
        let mut y = x;
        for &l in word.iter().rev() {
            ys.push(y);
            y = self.letter_apply(l, y);
        }
        let mut out = Vec::with_capacity(word.len() * 2);
        for (&l, &y) in word.iter().zip(ys.iter().rev()) {
            self.push_letter_section(l, y, &mut out);
        }
        free_reduce(&mut out);
        out
    }

    /// Maximum section-word length over all states and letters.
    pub fn max_section_len(&self) -> usize {
        self.states
            .iter()
            .flat_map(|s| s.sections.iter().map(|w| w.len()))
            .max()
            .unwrap_or(0)
    }

    pub fn word_string(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|l| {
                if l.is_inverse() {
                    format!("{}^-1", self.name(l.state()))
                } else {
                    self.name(l.state()).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}
