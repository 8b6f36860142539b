use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are grouped roughly by the module that raises them; the CLI maps
/// them onto process exit codes via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // multiplex validation
    #[error("multiplex has no channels")]
    NoChannels,
    #[error("label {label} out of range 1..={n_total} in channel {channel}")]
    LabelOutOfRange {
        channel: usize,
        label: usize,
        n_total: usize,
    },
    #[error("channel vertex sets do not cover all {n_total} labels (label {missing} is absent)")]
    UnionIncomplete { n_total: usize, missing: usize },
    #[error("channel vertex sets have an empty intersection")]
    EmptyChannelIntersection,
    #[error("self-loop on label {label} in channel {channel}")]
    SelfLoop { channel: usize, label: usize },

    // shapes
    #[error("target order {target} is smaller than current order {current}")]
    TargetOrderTooSmall { current: usize, target: usize },
    #[error("channel count mismatch: template has {template}, background has {background}")]
    ChannelCountMismatch { template: usize, background: usize },
    #[error("order mismatch: template order {template} exceeds background order {background}")]
    OrderMismatch { template: usize, background: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid channel weights: {0}")]
    InvalidWeights(String),
    #[error("invalid padding parameter w = {0}; must lie in [0, 1]")]
    InvalidPadding(f64),

    // assignment
    #[error("cost matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("cost matrix has a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("infeasible fixing: {0}")]
    InfeasibleFixing(String),
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    // solver
    #[error("initial matrix is inconsistent with the hard seeds: {0}")]
    InfeasibleSeedInitialization(String),
    #[error("soft seed rows must be nonnegative and sum to 1: {0}")]
    NonStochasticRows(String),
    #[error("matrix balancing did not converge after {sweeps} sweeps (residual {residual:e})")]
    BalancingFailed { sweeps: usize, residual: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    // matched filter
    #[error("match is not injective: background label {0} used twice")]
    NonInjectiveMatch(usize),

    // generators
    #[error("infeasible correlation rho = {rho} at p = {p}")]
    InfeasibleRho { rho: f64, p: f64 },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),

    // matchability lab
    #[error("ME delta counts require the source graphs")]
    MissingSources,
    #[error("order {0} is too large for exhaustive enumeration (max 8)")]
    OrderTooLargeForEnumeration(usize),

    // io
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code used by the CLI: 2 for input/validation problems,
    /// 3 for dimension or channel mismatches, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            NoChannels
            | LabelOutOfRange { .. }
            | UnionIncomplete { .. }
            | EmptyChannelIntersection
            | SelfLoop { .. }
            | Parse { .. }
            | InvalidPadding(_)
            | InvalidWeights(_)
            | NonStochasticRows(_)
            | InvalidParameter(_)
            | InvalidConfig(_)
            | InfeasibleRho { .. }
            | InfeasibleFixing(_)
            | OrderTooLargeForEnumeration(_) => 2,
            ChannelCountMismatch { .. }
            | OrderMismatch { .. }
            | DimensionMismatch(_)
            | TargetOrderTooSmall { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
