use thiserror::Error;

/// A violated structural invariant of a [`Design`](crate::Design).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("entry ({row}, {col}) is {value}, expected -1 or +1")]
    EntryDomain { row: usize, col: usize, value: i8 },
    #[error("row {row} has {plus_count} entries at +1, constraint allows {c}")]
    RowConstraint { row: usize, plus_count: usize, c: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error(transparent)]
    Violation(#[from] Violation),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no estimable factors: every design column is constant")]
    NoEstimableFactors,
    #[error("bound inconsistency: Q = {q} is below the lower bound {q_lb}")]
    BoundInconsistency { q: i64, q_lb: i64 },
    #[error("data format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by malformed input data rather than bad parameters.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Format(_) | Error::Csv(_) | Error::Io(_) | Error::InvalidDesign(_) | Error::Violation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
