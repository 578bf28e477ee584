//! Verification suites, structured reports, and the rational map utility.

mod conjugator;
mod ratmap;
mod report;
mod suites;

pub use conjugator::{conjugator_obstruction, conjugator_obstruction_with_cap, Obstruction, DEFAULT_NODE_CAP};
pub use ratmap::{backward_orbit, backward_step, forward_p, iterate_f, iterate_f_projective, rel_err, ParamPoint};
pub use report::{Check, Observation, Report, Status, SCHEMA_VERSION};
pub use suites::{
    conjugator_suite, d_generators, growth_suite, l_subgroup_experiment, naive_ball_sizes, naive_order, nucleus_injectivity,
    prefix_continuity, prefix_suite, quotient_comparison, ratmap_suite, run_suite, subgroup_elements, subtree_copy,
    verify_dihedral, verify_nucleus, verify_relations, PrefixOutcome, SuiteParams, SuiteRun, DEFAULT_SEED, NUCLEUS_CAP, SUITES,
    TILDE_NUCLEUS_CAP,
};
