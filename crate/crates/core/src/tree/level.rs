use super::machine::{Letter, Machine};
use crate::error::{Error, Result};

/// Explicit permutations of level `n` for every state of a machine and its inverse.
///
/// Built bottom-up from the wreath recursion:
/// `P_n(s)[x·m + v] = s(x)·m + P_{n-1}(s|_x)[v]` with `m = arity^{n-1}`.
#[derive(Debug, Clone)]
pub struct LevelActions {
    level: usize,
    size: usize,
    /// Indexed by the packed letter value: `2·state` and `2·state + 1`.
    perms: Vec<Vec<u32>>,
}

impl LevelActions {
    pub fn new(machine: &Machine, level: usize, cap: usize) -> Result<Self> {
        let arity = machine.arity();
        let size = machine
            .alphabet()
            .level_size(level)
            .filter(|&s| s <= cap)
            .ok_or_else(|| {
                Error::ResourceLimit(format!("level {level} of a {arity}-ary tree exceeds cap {cap}"))
            })?;
        let k = machine.len();
        let mut prev: Vec<Vec<u32>> = vec![vec![0]; 2 * k];
        let mut prev_size = 1usize;
        for _ in 1..=level {
            let cur_size = prev_size * arity;
            let mut cur = Vec::with_capacity(2 * k);
            for s in 0..k as u32 {
                let state = machine.state(s);
                let mut images = vec![0u32; cur_size];
                for x in 0..arity {
                    let section = &state.sections[x];
                    let y = state.perm.apply(x as u8) as usize;
                    for v in 0..prev_size {
                        let mut t = v as u32;
                        for l in section.iter().rev() {
                            t = prev[packed(*l)][t as usize];
                        }
                        images[x * prev_size + v] = (y * prev_size) as u32 + t;
                    }
                }
                let inv = invert(&images);
                cur.push(images);
                cur.push(inv);
            }
            prev = cur;
            prev_size = cur_size;
        }
        if level == 0 {
            prev = vec![vec![0]; 2 * k];
        }
        Ok(Self { level, size, perms: prev })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn letter_perm(&self, l: Letter) -> &[u32] {
        &self.perms[packed(l)]
    }

    pub fn apply(&self, word: &[Letter], v: u32) -> u32 {
        word.iter().rev().fold(v, |t, l| self.perms[packed(*l)][t as usize])
    }

    pub fn word_perm(&self, word: &[Letter]) -> Vec<u32> {
        let mut out: Vec<u32> = (0..self.size as u32).collect();
        for l in word.iter().rev() {
            let p = &self.perms[packed(*l)];
            for t in out.iter_mut() {
                *t = p[*t as usize];
            }
        }
        out
    }
}

#[inline]
fn packed(l: Letter) -> usize {
    (l.state() as usize) << 1 | l.is_inverse() as usize
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}
