use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::dw::{build_dw, restrict_to_tw};
use super::seq::BinSeqEP;
use crate::canonical::Reducer;
use crate::error::{Error, Result};
use crate::tree::{free_reduce, parse_machine, Element, Letter, Machine, Vertex, Word, DEFAULT_LEVEL_CAP};

/// The six-generator group on the four-letter tree: `alpha, beta, gamma, a, b, c`.
pub fn build_tilde_d() -> Arc<Machine> {
    Arc::new(parse_machine(crate::machines::TILDE_D).expect("bundled machine parses"))
}

/// The binary action of `a, b, c` induced through the letter map `P`.
pub fn build_h() -> Arc<Machine> {
    Arc::new(parse_machine(crate::machines::H).expect("bundled machine parses"))
}

/// The relation table of the six-generator group: `x^s = x^t` with `t = 1` when `None`.
pub const RELATIONS: [(&str, &str, Option<&str>); 9] = [
    ("alpha", "a", None),
    ("alpha", "b", None),
    ("alpha", "c", None),
    ("beta", "a", None),
    ("beta", "b", None),
    ("beta", "c", Some("gamma")),
    ("gamma", "a", Some("alpha")),
    ("gamma", "b", Some("beta")),
    ("gamma", "c", None),
];

fn check_arity(v: &Vertex, arity: usize) -> Result<()> {
    match v.letters().iter().find(|&&x| x as usize >= arity) {
        Some(&x) => Err(Error::InvalidVertex { letter: x as usize, arity }),
        None => Ok(()),
    }
}

/// `P`: letterwise `1,2 ↦ 0` and `3,4 ↦ 1` (0-based: `0,1 ↦ 0`, `2,3 ↦ 1`).
pub fn project_p(v: &Vertex) -> Result<Vertex> {
    check_arity(v, 4)?;
    Ok(Vertex(v.letters().iter().map(|x| x / 2).collect()))
}

/// Identification of `T_w` with the binary tree: `1,3 ↦ 0` and `2,4 ↦ 1`.
pub fn iota(v: &Vertex) -> Result<Vertex> {
    check_arity(v, 4)?;
    Ok(Vertex(v.letters().iter().map(|x| x % 2).collect()))
}

/// The vertex of `T_w` identified with the binary vertex `u`.
pub fn iota_inv(u: &Vertex, w: &BinSeqEP) -> Result<Vertex> {
    check_arity(u, 2)?;
    Ok(Vertex(u.letters().iter().enumerate().map(|(k, &x)| x + 2 * w.letter(k)).collect()))
}

/// Image in `H` of an element of the six-generator group: `alpha, beta, gamma ↦ 1`.
/// Elements already over a binary machine are returned unchanged.
pub fn to_h(g: &Element, h: &Arc<Machine>) -> Result<Element> {
    if g.machine().arity() == 2 {
        return Ok(g.clone());
    }
    let src = g.machine();
    let mut word = Vec::new();
    for l in g.word() {
        match src.name(l.state()) {
            "alpha" | "beta" | "gamma" => {}
            name => {
                let id = h.id(name).ok_or_else(|| Error::Parse { line: 0, msg: format!("no state `{name}` in H") })?;
                word.push(Letter::new(id, l.is_inverse()));
            }
        }
    }
    Ok(Element::from_word(h, word))
}

/// Lifts a word over `a, b, c` (or any states present by name) into the six-generator machine.
pub fn lift_to_tilde(g: &Element, tilde: &Arc<Machine>) -> Result<Element> {
    if Arc::ptr_eq(g.machine(), tilde) || **g.machine() == **tilde {
        return Ok(g.clone());
    }
    let src = g.machine().clone();
    let mut missing = None;
    let lifted = g.map_states(tilde, |s| {
        let id = tilde.id(src.name(s));
        if id.is_none() {
            missing.get_or_insert_with(|| src.name(s).to_string());
        }
        id
    });
    lifted.ok_or_else(|| Error::Parse { line: 0, msg: format!("no state `{}` in the four-letter machine", missing.unwrap_or_default()) })
}

/// The exact image `g(w)` of an eventually periodic sequence.
///
/// The automaton is walked along `w`; once past the prefix, the pair
/// (current section, position in the period) must repeat, and the output
/// between the two visits is the period of the image.
pub fn act_on_sequence(g: &Element, w: &BinSeqEP) -> Result<BinSeqEP> {
    let h = build_h();
    let g = to_h(g, &h)?;
    let machine = g.machine().clone();
    let reducer = Reducer::detect(&machine, 100_000)?;
    let pre = w.prefix().len();
    let per = w.period().len();
    let pos = |k: usize| if k < pre { k } else { pre + (k - pre) % per };
    let mut seen: HashMap<(Word, usize), usize> = HashMap::new();
    let mut cur = reducer.reduce(g.word());
    let mut out = Vec::new();
    for k in 0..1_000_000usize {
        if k >= pre {
            if let Some(&i) = seen.get(&(cur.clone(), pos(k))) {
                return BinSeqEP::new(out[..i].to_vec(), out[i..].to_vec());
            }
            seen.insert((cur.clone(), pos(k)), k);
        }
        let x = w.letter(k);
        out.push(machine.word_apply(&cur, x));
        cur = reducer.reduce(&machine.word_section(&cur, x));
    }
    Err(Error::ResourceLimit("sequence action did not become periodic".into()))
}

/// `x^s` for a letter `x` over `alpha, beta, gamma` and a letter `s` of the six-generator group,
/// as a word over `alpha, beta, gamma`.
fn conjugate_letter(tilde: &Machine, x: Letter, s: Letter) -> Word {
    let name = tilde.name(s.state());
    let base: Word = match name {
        "alpha" | "beta" | "gamma" => vec![s.inv(), Letter::pos(x.state()), s],
        _ => {
            let (_, _, t) = RELATIONS
                .iter()
                .find(|(xn, sn, _)| *xn == tilde.name(x.state()) && *sn == name)
                .expect("relation table covers alpha, beta, gamma against a, b, c");
            match t {
                None => vec![Letter::pos(x.state())],
                Some(t) => {
                    // Every generator is an involution, so t^-1 = t.
                    let t = Letter::pos(tilde.id(t).unwrap());
                    vec![t, Letter::pos(x.state()), t]
                }
            }
        }
    };
    if x.is_inverse() {
        base.iter().rev().map(|l| l.inv()).collect()
    } else {
        base
    }
}

/// Rewrites `g · x · g⁻¹` as a word over `alpha, beta, gamma` using the relation table.
pub fn conjugate_into_d(tilde: &Machine, x: &[Letter], g: &[Letter]) -> Word {
    // g x g^-1 = x^{g^-1}, and conjugation by g^-1 = s_k^-1 … s_1^-1 applies s_k first.
    let mut word = x.to_vec();
    for &s in g.iter().rev() {
        word = word.iter().flat_map(|&y| conjugate_letter(tilde, y, s.inv())).collect();
    }
    free_reduce(&mut word);
    word
}

/// Outcome of checking the conjugation `g: T_w → T_{g(w)}` on one generator.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugationRow {
    pub generator: String,
    /// `g x g⁻¹` rewritten over `alpha, beta, gamma`.
    pub conjugate: String,
    /// `φ x_w φ⁻¹ = P_{g(w)}(g x g⁻¹)` on every vertex up to the depth.
    pub pass: bool,
    /// Whether `φ x_w φ⁻¹` is moreover the same-named generator of `𝒟_{g(w)}`.
    pub literal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationReport {
    pub w: BinSeqEP,
    pub target: BinSeqEP,
    pub depth: usize,
    pub rows: Vec<ConjugationRow>,
}

impl ConjugationReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Checks that the map `φ` induced by `g` from `T_w` to `T_{g(w)}` conjugates
/// `𝒟_w` onto `𝒟_{g(w)}`: for each generator `x`, `φ x_w φ⁻¹` acts on the
/// first `depth` levels exactly as `P_{g(w)}(g x g⁻¹)`.
pub fn verify_conjugation_lemma(w: &BinSeqEP, g: &Element, depth: usize) -> Result<ConjugationReport> {
    if 2usize.checked_pow(depth as u32).is_none_or(|n| n > DEFAULT_LEVEL_CAP) {
        return Err(Error::ResourceLimit(format!("depth {depth} exceeds the level cap")));
    }
    let tilde = build_tilde_d();
    let g4 = lift_to_tilde(g, &tilde)?;
    let g4_inv = g4.inverse();
    let target = act_on_sequence(&g4, w)?;
    let ctx_w = build_dw(w);
    let ctx_t = build_dw(&target);
    let w_prefix = Vertex(w.take(depth));
    let t_prefix = Vertex(target.take(depth));
    let mut rows = Vec::new();
    for (k, name) in ["alpha", "beta", "gamma"].into_iter().enumerate() {
        let x = Letter::pos(tilde.id(name).unwrap());
        let conj = Element::from_word(&tilde, conjugate_into_d(&tilde, &[x], g4.word()));
        let image = restrict_to_tw(&conj, &ctx_t)?;
        let x_w = ctx_w.generators()[k].clone();
        let x_t = ctx_t.generators()[k].clone();
        let mut pass = true;
        let mut literal = true;
        for u in Vertex::level(crate::tree::Alphabet::BINARY, depth) {
            let v = g4_inv.act(&iota_inv(&u, &target)?)?;
            if project_p(&v)? != w_prefix {
                pass = false;
                break;
            }
            let moved = x_w.act(&iota(&v)?)?;
            let back = g4.act(&iota_inv(&moved, w)?)?;
            if project_p(&back)? != t_prefix {
                pass = false;
                break;
            }
            let lhs = iota(&back)?;
            pass &= lhs == image.act(&u)?;
            literal &= lhs == x_t.act(&u)?;
        }
        rows.push(ConjugationRow { generator: name.to_string(), conjugate: conj.to_string(), pass, literal });
    }
    Ok(ConjugationReport { w: w.clone(), target, depth, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinSeqEP {
        s.parse().unwrap()
    }

    #[test]
    fn projection_examples() {
        let a = crate::tree::Alphabet::QUATERNARY;
        let p = |s: &str| project_p(&Vertex::parse(a, s).unwrap()).unwrap().display(crate::tree::Alphabet::BINARY);
        assert_eq!(p("14"), "01");
        assert_eq!(p(""), "∅");
        assert_eq!(p("2331"), "0110");
        assert!(project_p(&Vertex(vec![4])).is_err());
    }

    #[test]
    fn sequence_action_examples() {
        let h = build_h();
        let a = Element::named(&h, "a").unwrap();
        let b = Element::named(&h, "b").unwrap();
        assert_eq!(act_on_sequence(&a, &w(":0")).unwrap(), w("1:0"));
        assert_eq!(act_on_sequence(&b, &w(":0")).unwrap(), w("01:0"));
        assert_eq!(act_on_sequence(&Element::identity(&h), &w("10:01")).unwrap(), w("10:01"));
    }

    #[test]
    fn sequence_action_matches_prefix_action() {
        let h = build_h();
        for text in ["a", "b", "c", "a b c", "c b a b"] {
            let g = Element::parse(&h, text).unwrap();
            for s in [":0", ":01", "1:011", "00:1"] {
                let img = act_on_sequence(&g, &w(s)).unwrap();
                let prefix = Vertex(w(s).take(12));
                assert_eq!(g.act(&prefix).unwrap().letters(), img.take(12).as_slice(), "{text} on {s}");
            }
        }
    }

    #[test]
    fn conjugation_lemma_examples() {
        let h = build_h();
        let cases = [(":0", "1"), (":0", "a"), (":01", "b"), ("1:0", "c a b")];
        for (s, g) in cases {
            let g = Element::parse(&h, g).unwrap();
            let report = verify_conjugation_lemma(&w(s), &g, 6).unwrap();
            assert!(report.pass(), "{report:?}");
        }
    }

    #[test]
    fn rewritten_conjugates_stay_in_d() {
        let t = build_tilde_d();
        let g = Element::parse(&t, "a b c").unwrap();
        for x in ["alpha", "beta", "gamma"] {
            let x = Element::named(&t, x).unwrap();
            let word = conjugate_into_d(&t, x.word(), g.word());
            assert!(word.iter().all(|l| l.state() < 3));
        }
    }
}
