use std::sync::Arc;

use super::seq::BinSeqEP;
use crate::error::{Error, Result};
use crate::tree::{Alphabet, Element, LevelPerm, Letter, Machine, State, StateId};

/// The machine of `𝒟_w` for an eventually periodic `w`.
///
/// For every distinct shift `s^k(w)` there are states `alpha{k}`, `beta{k}`,
/// `gamma{k}`; the group itself is generated by the three states at shift 0.
#[derive(Debug, Clone)]
pub struct FamilyContext {
    w: BinSeqEP,
    machine: Arc<Machine>,
}

impl FamilyContext {
    pub fn w(&self) -> &BinSeqEP {
        &self.w
    }

    pub fn machine(&self) -> &Arc<Machine> {
        &self.machine
    }

    pub fn alpha_id(k: usize) -> StateId {
        3 * k as StateId
    }

    pub fn beta_id(k: usize) -> StateId {
        3 * k as StateId + 1
    }

    pub fn gamma_id(k: usize) -> StateId {
        3 * k as StateId + 2
    }

    pub fn alpha(&self) -> Element {
        Element::state(&self.machine, Self::alpha_id(0))
    }

    pub fn beta(&self) -> Element {
        Element::state(&self.machine, Self::beta_id(0))
    }

    pub fn gamma(&self) -> Element {
        Element::state(&self.machine, Self::gamma_id(0))
    }

    /// `[alpha_w, beta_w, gamma_w]`.
    pub fn generators(&self) -> Vec<Element> {
        vec![self.alpha(), self.beta(), self.gamma()]
    }

    /// Generators of `𝒟_{s^k(w)}` read inside this machine.
    pub fn generators_at_shift(&self, k: usize) -> Vec<Element> {
        let k = self.shift_index(k);
        vec![
            Element::state(&self.machine, Self::alpha_id(k)),
            Element::state(&self.machine, Self::beta_id(k)),
            Element::state(&self.machine, Self::gamma_id(k)),
        ]
    }

    fn shift_index(&self, k: usize) -> usize {
        let mut i = 0;
        for _ in 0..k {
            i = self.w.next_shift(i);
        }
        i
    }

    /// Reads a word over the letters `{0: alpha, 1: beta, 2: gamma}` in the shift-0 generators.
    pub fn word(&self, letters: &[usize]) -> Element {
        let word = letters.iter().map(|&x| Letter::pos(x as StateId)).collect();
        Element::from_word(&self.machine, word)
    }
}

/// Builds the machine of `𝒟_w`:
/// `alpha_w = σ`, `beta_w = (alpha_{s(w)}, gamma_{s(w)})`, and
/// `gamma_w = (beta_{s(w)}, 1)` if `w` starts with 0, `(1, beta_{s(w)})` otherwise.
pub fn build_dw(w: &BinSeqEP) -> FamilyContext {
    let mut states = Vec::with_capacity(3 * w.shift_count());
    for k in 0..w.shift_count() {
        let n = w.next_shift(k);
        let a = Letter::pos(FamilyContext::alpha_id(n));
        let b = Letter::pos(FamilyContext::beta_id(n));
        let g = Letter::pos(FamilyContext::gamma_id(n));
        states.push(State { name: format!("alpha{k}"), perm: LevelPerm::sigma(), sections: vec![vec![], vec![]] });
        states.push(State { name: format!("beta{k}"), perm: LevelPerm::identity(2), sections: vec![vec![a], vec![g]] });
        let gamma_sections = if w.letter(k) == 0 { vec![vec![b], vec![]] } else { vec![vec![], vec![b]] };
        states.push(State { name: format!("gamma{k}"), perm: LevelPerm::identity(2), sections: gamma_sections });
    }
    let machine = Machine::new(Alphabet::BINARY, states).expect("family machine is well formed");
    FamilyContext { w: w.clone(), machine: Arc::new(machine) }
}

/// `P_w`: reads a word over `alpha, beta, gamma` of `𝒟` in the generators of `𝒟_w`.
pub fn restrict_to_tw(g: &Element, ctx: &FamilyContext) -> Result<Element> {
    let source = g.machine();
    let mut bad = None;
    let image = g.map_states(ctx.machine(), |s| match source.name(s) {
        "alpha" => Some(FamilyContext::alpha_id(0)),
        "beta" => Some(FamilyContext::beta_id(0)),
        "gamma" => Some(FamilyContext::gamma_id(0)),
        other => {
            bad.get_or_insert_with(|| other.to_string());
            None
        }
    });
    image.ok_or_else(|| Error::NotInD(bad.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_machine, write_machine};

    #[test]
    fn zero_sequence_gives_three_states() {
        let ctx = build_dw(&":0".parse().unwrap());
        assert_eq!(ctx.machine().len(), 3);
        let expected = parse_machine("alpha0 = sigma\nbeta0 = (alpha0, gamma0)\ngamma0 = (beta0, 1)").unwrap();
        assert_eq!(write_machine(ctx.machine()), write_machine(&expected));
    }

    #[test]
    fn one_sequence_mirrors_gamma() {
        let ctx = build_dw(&":1".parse().unwrap());
        let gamma = ctx.machine().state(2);
        assert!(gamma.sections[0].is_empty());
        assert_eq!(gamma.sections[1], vec![Letter::pos(1)]);
    }

    #[test]
    fn state_count_follows_shifts() {
        assert_eq!(build_dw(&":01".parse().unwrap()).machine().len(), 6);
        assert_eq!(build_dw(&"0:01".parse().unwrap()).machine().len(), 9);
        assert_eq!(build_dw(&"1:0".parse().unwrap()).machine().len(), 6);
    }

    #[test]
    fn restriction_rejects_outer_states() {
        let m = Arc::new(parse_machine(crate::machines::TILDE_D).unwrap());
        let ctx = build_dw(&":0".parse().unwrap());
        let g = Element::parse(&m, "alpha beta gamma").unwrap();
        assert_eq!(restrict_to_tw(&g, &ctx).unwrap().to_string(), "alpha0 beta0 gamma0");
        let bad = Element::parse(&m, "alpha a").unwrap();
        assert_eq!(restrict_to_tw(&bad, &ctx), Err(Error::NotInD("a".into())));
    }
}
