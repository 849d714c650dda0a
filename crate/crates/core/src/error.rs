use thiserror::Error;

/// Errors raised by the inference library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("degenerate 2x2 table: {0}")]
    DegenerateTable(String),

    /// The assigned post-data probability for the one-sided event is smaller
    /// than lambda / (1 + lambda), which would make the interval probability negative.
    #[error(
        "assigned probability {gamma} is below the consistency floor {floor:.6} \
         (gamma must be at least lambda / (1 + lambda))"
    )]
    BelowFloor { gamma: f64, floor: f64 },

    /// Neither one-sided test applies: the estimate lies strictly between the
    /// points where the two one-sided cdfs cross 0.5.
    #[error(
        "no one-sided P value applies (estimate gives no evidence against the interval); \
         carry the prior probability over instead"
    )]
    NoOneSidedTest,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("quadrature did not converge on [{a}, {b}]")]
    NoConvergence { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_open_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}
