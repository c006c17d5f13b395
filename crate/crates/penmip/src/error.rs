use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("entry {index} = {value} lies outside [0,1] beyond tolerance")]
    OutOfUnitRange { index: usize, value: f64 },

    #[error("start point violates the region by {violation:.3e} (tolerance {tolerance:.3e})")]
    InfeasibleStart { violation: f64, tolerance: f64 },

    #[error("objective is non-finite at {point:?}")]
    NonFiniteObjective { point: Vec<f64> },

    #[error(
        "projection stalled after {cycles} cycles (residual {residual:.3e}); region may be empty"
    )]
    ProjectionStalled { cycles: usize, residual: f64 },

    #[error("slice fixed all variables of a constraint left violated by {0:.3e}; slice is empty")]
    EmptySlice(f64),

    #[error("penalty schedule requires rho > 1, got {0}")]
    InvalidRho(f64),

    #[error("penalty schedule requires lambda0 > 0, got {0}")]
    InvalidLambda(f64),

    #[error(
        "lambda reached the overflow cap {cap:.3e} at iteration {iteration} \
         without a binary solution; the problem may not admit one"
    )]
    LambdaOverflow { iteration: usize, cap: f64 },

    #[error("subproblem failed at outer iteration {iteration}: {source}")]
    Subproblem {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("anchor point is infeasible in the original region (violation {0:.3e})")]
    InfeasibleAnchor(f64),

    #[error("initial point is infeasible (violation {0:.3e})")]
    InfeasibleInitial(f64),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("assignment violates {constraint}: {detail}")]
    ConstraintViolated { constraint: String, detail: String },

    #[error(
        "exhaustive search would enumerate {combinations:.3e} assignments (limit {limit:.3e}); \
         use sampling-based bounds instead"
    )]
    OracleTooLarge { combinations: f64, limit: f64 },

    #[error(
        "Lipschitz formula denominator I - N_max^(1) = {0} is not positive; \
         use N_max^(m) = I - 1 or pass larger I"
    )]
    LipschitzDenominator(i64),

    #[error("division guard tripped: {0}")]
    ZeroDenominator(String),

    #[error("relative error undefined: {0}")]
    DegenerateRelativeError(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("instance file is malformed: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
