//! Text format for machines.
//!
//! One state per statement, statements separated by newlines or `;`:
//!
//! ```text
//! # comment
//! @arity 4
//! alpha = (1 2)(3 4)
//! beta  = (alpha, gamma, alpha, gamma)
//! b     = (a alpha, a alpha, c, c)
//! ```
//!
//! The root permutation is `sigma` (binary swap), `1`, `pi<images>` with
//! 0-based images such as `pi10`, or cycles over 1-based letters. It is joined
//! to the section tuple by `*`; either part may be omitted. A section is `1`
//! or a word of state names (`x^-1` for an inverse).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::alphabet::{Alphabet, LevelPerm};
use super::machine::{Letter, Machine, State};
use crate::error::{Error, Result};

#[derive(Debug)]
enum PermSpec {
    Identity,
    Sigma,
    Images(Vec<u8>),
    Cycles(Vec<Vec<usize>>),
}

impl PermSpec {
    fn exact_arity(&self) -> Option<usize> {
        match self {
            PermSpec::Sigma => Some(2),
            PermSpec::Images(v) => Some(v.len()),
            _ => None,
        }
    }

    fn min_arity(&self) -> usize {
        match self {
            PermSpec::Cycles(cs) => cs.iter().flatten().map(|&x| x + 1).max().unwrap_or(2),
            _ => 2,
        }
    }

    fn build(&self, arity: usize) -> std::result::Result<LevelPerm, String> {
        match self {
            PermSpec::Identity => Ok(LevelPerm::identity(arity)),
            PermSpec::Sigma if arity == 2 => Ok(LevelPerm::sigma()),
            PermSpec::Sigma => Err(format!("`sigma` needs arity 2, machine has arity {arity}")),
            PermSpec::Images(v) if v.len() != arity => {
                Err(format!("permutation has {} images, machine has arity {arity}", v.len()))
            }
            PermSpec::Images(v) => LevelPerm::from_images(v.clone()).map_err(|e| e.to_string()),
            PermSpec::Cycles(cs) => LevelPerm::from_cycles(arity, cs).map_err(|e| e.to_string()),
        }
    }
}

type SectionSpec = Vec<(String, bool)>;

#[derive(Debug)]
struct Statement {
    line: usize,
    name: String,
    perm: PermSpec,
    sections: Option<Vec<SectionSpec>>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Splits at the first `*` outside parentheses.
fn split_top_star(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn parse_perm(line: usize, s: &str) -> Result<PermSpec> {
    let s = s.trim();
    match s {
        "1" | "id" | "" => return Ok(PermSpec::Identity),
        "sigma" => return Ok(PermSpec::Sigma),
        _ => {}
    }
    if let Some(digits) = s.strip_prefix("pi") {
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let images = digits.bytes().map(|b| b - b'0').collect();
            return Ok(PermSpec::Images(images));
        }
    }
    if !s.starts_with('(') {
        return Err(perr(line, format!("cannot read permutation `{s}`")));
    }
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')').map(|end| (&r[..end], &r[end + 1..])))
            .ok_or_else(|| perr(line, format!("malformed cycle list `{s}`")))?;
        let mut cycle = Vec::new();
        for tok in body.0.split_whitespace() {
            let x: usize = tok
                .parse()
                .map_err(|_| perr(line, format!("bad letter `{tok}` in cycle `{s}`")))?;
            if x == 0 {
                return Err(perr(line, "cycle letters are 1-based"));
            }
            cycle.push(x - 1);
        }
        cycles.push(cycle);
        rest = body.1.trim_start();
    }
    Ok(PermSpec::Cycles(cycles))
}

fn parse_tuple(line: usize, s: &str) -> Result<Vec<SectionSpec>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr(line, format!("expected a section tuple, found `{s}`")))?;
    let mut out = Vec::new();
    for part in inner.split(',') {
        let mut word = Vec::new();
        for tok in part.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            let (name, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            if !valid_name(name) {
                return Err(perr(line, format!("invalid state name `{name}`")));
            }
            word.push((name.to_string(), inv));
        }
        if part.trim().is_empty() {
            return Err(perr(line, "empty section slot"));
        }
        out.push(word);
    }
    Ok(out)
}

fn looks_like_tuple(s: &str) -> bool {
    let s = s.trim();
    s.starts_with('(') && s.contains(',')
}

/// Parses the machine text format.
pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut declared_arity: Option<usize> = None;
    let mut stmts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        for stmt in content.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("@arity") {
                let k: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| perr(line, format!("bad arity directive `{stmt}`")))?;
                if k < 2 {
                    return Err(perr(line, "arity must be at least 2"));
                }
                declared_arity = Some(k);
                continue;
            }
            let (name, rhs) = stmt
                .split_once('=')
                .ok_or_else(|| perr(line, format!("expected `name = ...`, found `{stmt}`")))?;
            let name = name.trim();
            if !valid_name(name) {
                return Err(perr(line, format!("invalid state name `{name}`")));
            }
            let rhs = rhs.trim();
            let (perm, sections) = match split_top_star(rhs) {
                Some((p, t)) => (parse_perm(line, p)?, Some(parse_tuple(line, t)?)),
                None if looks_like_tuple(rhs) => (PermSpec::Identity, Some(parse_tuple(line, rhs)?)),
                None => (parse_perm(line, rhs)?, None),
            };
            stmts.push(Statement { line, name: name.to_string(), perm, sections });
        }
    }
    if stmts.is_empty() {
        return Err(perr(1, "no states defined"));
    }

    // Arity: directive, else the first exact witness, else the largest cycle letter.
    let mut arity = declared_arity;
    for st in &stmts {
        let exact = st
            .perm
            .exact_arity()
            .or_else(|| st.sections.as_ref().map(|s| s.len()));
        if let (None, Some(k)) = (arity, exact) {
            arity = Some(k);
        }
    }
    let arity = arity.unwrap_or_else(|| stmts.iter().map(|s| s.perm.min_arity()).max().unwrap_or(2));
    let alphabet = Alphabet::new(arity).map_err(|e| perr(1, e.to_string()))?;

    let mut ids = HashMap::new();
    for (i, st) in stmts.iter().enumerate() {
        if ids.insert(st.name.clone(), i as u32).is_some() {
            return Err(perr(st.line, format!("state `{}` defined twice", st.name)));
        }
    }

    let mut states = Vec::with_capacity(stmts.len());
    for st in &stmts {
        let sections = match &st.sections {
            Some(secs) => {
                if secs.len() != arity {
                    return Err(perr(
                        st.line,
                        format!("state `{}` has {} sections, machine has arity {arity}", st.name, secs.len()),
                    ));
                }
                let mut out = Vec::with_capacity(arity);
                for sec in secs {
                    let mut word = Vec::with_capacity(sec.len());
                    for (name, inv) in sec {
                        let id = ids.get(name).ok_or_else(|| {
                            perr(st.line, format!("unknown state `{name}` in the definition of `{}`", st.name))
                        })?;
                        word.push(Letter::new(*id, *inv));
                    }
                    out.push(word);
                }
                out
            }
            None => vec![Vec::new(); arity],
        };
        let perm = st.perm.build(arity).map_err(|m| perr(st.line, m))?;
        states.push(State { name: st.name.clone(), perm, sections });
    }
    Machine::new(alphabet, states)
}

/// Serializes a machine so that [`parse_machine`] reproduces it exactly.
pub fn write_machine(m: &Machine) -> String {
    let mut out = String::new();
    writeln!(out, "@arity {}", m.arity()).unwrap();
    for s in m.states() {
        let trivial_sections = s.sections.iter().all(|w| w.is_empty());
        let perm = s.perm.cycle_string();
        let tuple = || {
            let parts: Vec<String> = s.sections.iter().map(|w| m.word_string(w)).collect();
            format!("({})", parts.join(", "))
        };
        let rhs = match (s.perm.is_identity(), trivial_sections) {
            (_, true) => perm,
            (true, false) => tuple(),
            (false, false) => format!("{perm}*{}", tuple()),
        };
        writeln!(out, "{} = {rhs}", s.name).unwrap();
    }
    out
}
