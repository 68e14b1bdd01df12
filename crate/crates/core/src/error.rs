use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid protograph: {0}")]
    InvalidProtograph(String),

    #[error("({j},{k})-regular protograph requires 1 <= J < K")]
    InvalidRegular { j: usize, k: usize },

    #[error("base entry {entry} at ({row},{col}) exceeds lift degree {lift_degree}")]
    LiftTooSmall {
        row: usize,
        col: usize,
        entry: u32,
        lift_degree: usize,
    },

    #[error("could not draw {entry} disjoint permutations for entry ({row},{col}) after {attempts} attempts")]
    LiftDisjointness {
        row: usize,
        col: usize,
        entry: u32,
        attempts: usize,
    },

    #[error("uniform cut needs gcd(n_c, n_v) > 1, got gcd({n_c},{n_v}) = 1; use a nonuniform cut (xi) or an M-cover")]
    NoUniformCut { n_c: usize, n_v: usize },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("segment length {len} is not a positive multiple of window length {window}")]
    SegmentLength { len: usize, window: usize },

    #[error("delta {0} outside [0, 1]")]
    DeltaOutOfRange(f64),

    #[error("exact enumeration needs {needed} node-weight assignments, guard limit is {limit}")]
    GuardLimit { needed: u128, limit: u128 },

    #[error("no zero crossing of r(delta) in (0, {upper}] at grid step {step}: not asymptotically good at this resolution")]
    NoCrossing { upper: f64, step: f64 },

    #[error("solver failure at delta = {delta}: {reason}")]
    Solver { delta: f64, reason: String },

    #[error("lambda = {lambda}: {source}")]
    AtLambda {
        lambda: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("could only draw {found} distinct M-cover members, {requested} requested")]
    InsufficientMembers { requested: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Strips `AtLambda` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLambda { source, .. } => source.root(),
            other => other,
        }
    }
}
