use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An eventually periodic binary sequence `prefix · period^ω`, kept in canonical form:
/// the period is primitive and the prefix is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BinSeqEP {
    prefix: Vec<u8>,
    period: Vec<u8>,
}

impl BinSeqEP {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() || prefix.iter().chain(&period).any(|&x| x > 1) {
            let s = format!("{}:{}", digits(&prefix), digits(&period));
            return Err(Error::InvalidSequence(s));
        }
        Ok(Self::canonical(prefix, period))
    }

    /// The constant sequence `x^ω`.
    pub fn constant(x: u8) -> Self {
        Self::canonical(Vec::new(), vec![x & 1])
    }

    fn canonical(mut prefix: Vec<u8>, mut period: Vec<u8>) -> Self {
        let n = period.len();
        if let Some(d) = (1..=n).find(|&d| n % d == 0 && (d..n).all(|i| period[i] == period[i - d])) {
            period.truncate(d);
        }
        while let Some(&last) = prefix.last() {
            if last != *period.last().unwrap() {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        BinSeqEP { prefix, period }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Number of distinct shifts `s^k(w)`, i.e. `|prefix| + |period|`.
    pub fn shift_count(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Index of `s^{k+1}(w)` among the distinct shifts.
    pub fn next_shift(&self, k: usize) -> usize {
        if k + 1 < self.shift_count() {
            k + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn letter(&self, k: usize) -> u8 {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.period[(k - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<u8> {
        (0..n).map(|k| self.letter(k)).collect()
    }

    /// True when the sequence has infinitely many zeros.
    pub fn in_omega_zero(&self) -> bool {
        self.period.contains(&0)
    }

    /// `s(x₁x₂…) = x₂x₃…`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn shift_by(&self, k: usize) -> Self {
        if k <= self.prefix.len() {
            return Self::canonical(self.prefix[k..].to_vec(), self.period.clone());
        }
        let mut period = self.period.clone();
        period.rotate_left((k - self.prefix.len()) % self.period.len());
        Self::canonical(Vec::new(), period)
    }

    /// `u · self`.
    pub fn prepend(&self, u: &[u8]) -> Self {
        let mut prefix = u.iter().map(|x| x & 1).collect::<Vec<_>>();
        prefix.extend_from_slice(&self.prefix);
        Self::canonical(prefix, self.period.clone())
    }

    /// Length of the longest common beginning, if the sequences differ.
    pub fn common_prefix_len(&self, other: &Self) -> Option<usize> {
        if self == other {
            return None;
        }
        // Two eventually periodic sequences that agree this far agree forever.
        let bound = self.prefix.len().max(other.prefix.len()) + self.period.len() * other.period.len();
        (0..=bound).find(|&k| self.letter(k) != other.letter(k))
    }
}

fn digits(xs: &[u8]) -> String {
    xs.iter().map(|x| char::from(b'0' + x.min(&9))).collect()
}

impl fmt::Display for BinSeqEP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", digits(&self.prefix), digits(&self.period))
    }
}

impl FromStr for BinSeqEP {
    type Err = Error;

    /// Parses `PREFIX:PERIOD`, e.g. `:0` or `10:01`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSequence(s.to_string());
        let (pre, per) = s.trim().split_once(':').ok_or_else(bad)?;
        let parse = |t: &str| -> Result<Vec<u8>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect()
        };
        let (pre, per) = (parse(pre)?, parse(per)?);
        if per.is_empty() {
            return Err(bad());
        }
        BinSeqEP::new(pre, per)
    }
}

impl TryFrom<String> for BinSeqEP {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BinSeqEP> for String {
    fn from(w: BinSeqEP) -> String {
        w.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinSeqEP {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(w("0:0"), w(":0"));
        assert_eq!(w(":0101"), w(":01"));
        assert_eq!(w("1:01"), w(":10"));
        assert_eq!(w("00:1").to_string(), "00:1");
        assert_eq!(w("011:011").to_string(), ":011");
    }

    #[test]
    fn parse_rejects_bad_input() {
        for s in ["", "01", "0:", "2:0", "0:a"] {
            assert!(s.parse::<BinSeqEP>().is_err(), "{s}");
        }
    }

    #[test]
    fn shifts() {
        assert_eq!(w("0:01").shift(), w(":01"));
        assert_eq!(w(":1").shift(), w(":1"));
        assert_eq!(w(":011").shift(), w(":110"));
        assert_eq!(w("1:0").shift_by(5), w(":0"));
    }

    #[test]
    fn omega_zero_flag() {
        assert!(w(":0").in_omega_zero());
        assert!(!w("0:1").in_omega_zero());
        assert!(!w(":1").in_omega_zero());
        assert!(w("1:10").in_omega_zero());
    }

    #[test]
    fn common_prefix() {
        assert_eq!(w(":0").common_prefix_len(&w(":1")), Some(0));
        assert_eq!(w(":0").common_prefix_len(&w("000:1")), Some(3));
        assert_eq!(w(":01").common_prefix_len(&w("0:10")), None);
    }
}
