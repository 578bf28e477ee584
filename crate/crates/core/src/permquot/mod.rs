//! Finite level quotients and permutation-group algorithms.

mod chain;
mod group;
mod perm;

pub use chain::StabChain;
pub use group::{level_quotient, GroupSummary, PermGroup};
pub use perm::Perm;
