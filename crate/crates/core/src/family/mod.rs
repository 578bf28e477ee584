//! The family `𝒟_w` and the four-letter groups around it.
//!
//! Only eventually periodic sequences are constructible: they are exactly the
//! ones whose shifts form a finite set, hence a finite machine.
//!
//! `𝒟` acts trivially on the binary tree through `P`; that it is the whole
//! kernel of the `𝒟̃`-action there is not checked.

mod dw;
mod seq;
mod tilde;

pub use dw::{build_dw, restrict_to_tw, FamilyContext};
pub use seq::BinSeqEP;
pub use tilde::{
    act_on_sequence, build_h, build_tilde_d, conjugate_into_d, iota, iota_inv, lift_to_tilde, project_p, to_h,
    verify_conjugation_lemma, ConjugationReport, ConjugationRow, RELATIONS,
};
