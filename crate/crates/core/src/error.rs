use thiserror::Error;

/// Everything that can go wrong while building schemes, computing initial
/// degrees or checking certificates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("linear forms are dependent (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("zero linear form")]
    ZeroForm,

    #[error("could not draw general hyperplanes after {attempts} attempts")]
    GenericityFailure { attempts: usize },

    #[error("scheme validation failed: {0}")]
    InvalidScheme(String),

    #[error("duplicate points at positions {0} and {1}")]
    DuplicatePoints(usize, usize),

    #[error("multiplicity {multiplicity} exceeds the cap {cap}")]
    MultiplicityCap { multiplicity: u32, cap: u32 },

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("subspace is not contained in any of the hyperplanes")]
    NotInHyperplaneUnion,

    #[error("cannot mix {0} and {1} scalars")]
    FieldMismatch(String, String),

    #[error("prime {0} is unusable for this input")]
    BadPrime(u64),

    #[error("invalid component: {0}")]
    InvalidComponent(String),

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("reduced input is outside the classifier's scope (all multiplicities are 1)")]
    ReducedInput,

    #[error("not a subscheme: {0}")]
    NotSubscheme(String),

    #[error("alpha table has a gap at k = {0}")]
    TableGap(u32),

    #[error("initial degree unresolved up to degree cap {cap} (k = {k})")]
    Unresolved { k: u32, cap: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
