use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {letter} out of range for an alphabet of arity {arity}")]
    InvalidVertex { letter: usize, arity: usize },

    #[error("elements belong to different machines")]
    IncompatibleMachines,

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("nucleus search did not close within cap {cap} (not a disproof of contraction)")]
    NotContracting { cap: usize },

    #[error("portrait did not reach nucleus leaves within depth {depth}")]
    ContractionCap { depth: usize },

    #[error("coinductive check exceeded {0} explored words")]
    ProofCap(usize),

    #[error("fingerprint collision: depth-{depth} level actions agree but elements differ")]
    FingerprintCollision { depth: usize },

    #[error("state `{0}` is not one of the generators alpha, beta, gamma of D")]
    NotInD(String),

    #[error("not a subgroup: generator {0} is not a member of the ambient group")]
    NotASubgroup(usize),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("invalid sequence `{0}`: expected PREFIX:PERIOD over {{0,1}} with a nonempty period")]
    InvalidSequence(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}
