use std::fmt;

use crate::error::{Error, Result};

/// A finite alphabet `{0, .., arity-1}`.
///
/// Letters are always 0-based internally. For display and parsing, binary
/// alphabets use `0`/`1` while larger alphabets use `1..=arity`, so the
/// four-letter tree prints as `{1,2,3,4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    arity: usize,
}

impl Alphabet {
    pub fn new(arity: usize) -> Result<Self> {
        if !(2..=255).contains(&arity) {
            return Err(Error::InvalidPermutation(format!(
                "alphabet arity must be between 2 and 255, got {arity}"
            )));
        }
        Ok(Self { arity })
    }

    pub const BINARY: Alphabet = Alphabet { arity: 2 };
    pub const QUATERNARY: Alphabet = Alphabet { arity: 4 };

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Offset added to a letter when it is displayed.
    pub fn display_offset(&self) -> usize {
        if self.arity == 2 {
            0
        } else {
            1
        }
    }

    pub fn check(&self, letter: usize) -> Result<u8> {
        if letter < self.arity {
            Ok(letter as u8)
        } else {
            Err(Error::InvalidVertex { letter, arity: self.arity })
        }
    }

    /// Number of vertices on level `n`, if it fits in `usize`.
    pub fn level_size(&self, n: usize) -> Option<usize> {
        self.arity.checked_pow(n as u32)
    }
}

/// A vertex of the rooted tree, i.e. a finite word over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex(pub Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(alphabet: Alphabet, letters: &[usize]) -> Result<Self> {
        letters
            .iter()
            .map(|&l| alphabet.check(l))
            .collect::<Result<Vec<_>>>()
            .map(Vertex)
    }

    /// Parses a digit string using the alphabet's display convention.
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let offset = alphabet.display_offset();
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            let d = c.to_digit(10).ok_or(Error::InvalidVertex {
                letter: usize::MAX,
                arity: alphabet.arity(),
            })? as usize;
            if d < offset {
                return Err(Error::InvalidVertex { letter: d, arity: alphabet.arity() });
            }
            letters.push(alphabet.check(d - offset)?);
        }
        Ok(Vertex(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn validate(&self, alphabet: Alphabet) -> Result<()> {
        for &l in &self.0 {
            alphabet.check(l as usize)?;
        }
        Ok(())
    }

    /// Lexicographic index of this vertex on its level (first letter most significant).
    pub fn index(&self, alphabet: Alphabet) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * alphabet.arity() + l as usize)
    }

    pub fn from_index(alphabet: Alphabet, level: usize, mut index: usize) -> Self {
        let mut letters = vec![0u8; level];
        for slot in letters.iter_mut().rev() {
            *slot = (index % alphabet.arity()) as u8;
            index /= alphabet.arity();
        }
        Vertex(letters)
    }

    /// All vertices of level `n` in lexicographic order.
    pub fn level(alphabet: Alphabet, n: usize) -> impl Iterator<Item = Vertex> {
        let count = alphabet.level_size(n).unwrap_or(0);
        (0..count).map(move |i| Vertex::from_index(alphabet, n, i))
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Vertex(v)
    }

    pub fn display(&self, alphabet: Alphabet) -> String {
        let offset = alphabet.display_offset();
        if self.0.is_empty() {
            return "∅".to_string();
        }
        self.0.iter().map(|&l| (l as usize + offset).to_string()).collect()
    }
}

/// A permutation of the letters of an alphabet, stored as an image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelPerm(Box<[u8]>);

impl LevelPerm {
    pub fn identity(arity: usize) -> Self {
        LevelPerm((0..arity as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(LevelPerm(images.into_boxed_slice()))
    }

    /// Builds a permutation from disjoint or overlapping cycles of 0-based letters.
    /// Cycles are composed left to right as functions, so `(0 1)(1 2)` applies `(1 2)` first.
    pub fn from_cycles(arity: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut perm = LevelPerm::identity(arity);
        for cycle in cycles.iter().rev() {
            let mut images: Vec<u8> = (0..arity as u8).collect();
            let mut seen = vec![false; arity];
            for &x in cycle {
                if x >= arity {
                    return Err(Error::InvalidPermutation(format!(
                        "letter {} out of range for arity {arity}",
                        x + 1
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "letter {} repeated within a cycle",
                        x + 1
                    )));
                }
                seen[x] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(k + 1) % cycle.len()] as u8;
            }
            perm = LevelPerm(images.into_boxed_slice()).compose(&perm);
        }
        Ok(perm)
    }

    /// The transposition of the two letters of a binary alphabet.
    pub fn sigma() -> Self {
        LevelPerm(Box::new([1, 0]))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, other: &LevelPerm) -> LevelPerm {
        LevelPerm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> LevelPerm {
        let mut inv = vec![0u8; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        LevelPerm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Disjoint cycles of length ≥ 2, 0-based, each starting at its least letter.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle notation with 1-based letters, or `1` for the identity.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "1".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", body.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for LevelPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for LevelPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_index_round_trip() {
        let a = Alphabet::QUATERNARY;
        for (i, v) in Vertex::level(a, 3).enumerate() {
            assert_eq!(v.index(a), i);
        }
        assert_eq!(Vertex::parse(a, "14").unwrap().letters(), &[0, 3]);
        assert_eq!(Vertex::parse(Alphabet::BINARY, "01").unwrap().letters(), &[0, 1]);
        assert!(Vertex::parse(Alphabet::BINARY, "2").is_err());
        assert!(Vertex::parse(a, "5").is_err());
    }

    #[test]
    fn cycles_match_display() {
        let p = LevelPerm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2]);
        assert_eq!(p.cycle_string(), "(1 2)(3 4)");
        let q = LevelPerm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(q.compose(&q.inverse()), LevelPerm::identity(4));
        assert!(LevelPerm::from_images(vec![0, 0]).is_err());
        assert_eq!(LevelPerm::identity(3).cycle_string(), "1");
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = LevelPerm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = LevelPerm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // (a ∘ b)(1) = a(2) = 2
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(LevelPerm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).unwrap(), a.compose(&b));
    }
}
