//! Machine definitions shipped with the crate.

/// `alpha, beta, gamma, a, b, c` over the four-letter alphabet.
pub const TILDE_D: &str = include_str!("../machines/tilde_d.machine");
/// `g0 = sigma, g1 = (g0, g2), g2 = (1, g1)`.
pub const G012: &str = include_str!("../machines/g012.machine");
/// `a = sigma, b = (a, c), c = (b, b)`.
pub const H: &str = include_str!("../machines/h.machine");
