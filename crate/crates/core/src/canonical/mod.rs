//! Exact word problem for contracting groups.
//!
//! [`compute_nucleus`] finds the finite set every long section falls into;
//! a [`PortraitStore`] then gives each element a canonical, hash-consed
//! portrait whose leaves are nucleus elements, so equality is handle equality.

mod group;
mod nucleus;
mod portrait;
mod reduce;

pub use group::Group;
pub use nucleus::{compute_nucleus, Nucleus, NucleusConfig};
pub use portrait::{Portrait, PortraitId, PortraitStore, DEFAULT_DEPTH_CAP};
pub use reduce::{Prover, Reducer};
