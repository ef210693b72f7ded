use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by the series kernel, the reduction stages and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("center mismatch: {left} vs {right} (recentering must be explicit)")]
    CenterMismatch { left: f64, right: f64 },

    #[error("singular denominator: all retained coefficients are zero")]
    SingularDenominator,

    #[error("jet depth exhausted: derivative of a jet with no coefficients left above order {order}")]
    DepthExhausted { order: i32 },

    #[error("pole at center {center}: jet has valuation {valuation}")]
    PoleAtCenter { center: f64, valuation: i32 },

    #[error("recursion depth exhausted while building coefficient row n = {n}; increase the jet depth")]
    RecursionDepth { n: usize },

    #[error(
        "stage {stage_order} singular: leading Q coefficient vanishes identically \
         (condition point {condition_point}, N_trunc {n_trunc})"
    )]
    StageSingular {
        stage_order: usize,
        condition_point: f64,
        n_trunc: usize,
    },

    #[error(
        "series not converged at stage {stage_order}, entry {entry}: \
         tail {tail:e} exceeds {limit:e} (N_trunc {n_trunc})"
    )]
    TailNotConverged {
        stage_order: usize,
        entry: usize,
        tail: f64,
        limit: f64,
        n_trunc: usize,
    },

    #[error("derivative of order {order} not available at x = {x}")]
    MissingDerivative { order: usize, x: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}] within {max_intervals} subintervals (worst error estimate {estimate:e})")]
    Quadrature {
        lo: f64,
        hi: f64,
        max_intervals: usize,
        estimate: f64,
    },

    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("oracle matching matrix is singular for these condition points")]
    OracleSingular,
}
