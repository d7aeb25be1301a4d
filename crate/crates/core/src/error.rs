use thiserror::Error;

/// Errors raised when an operation is called outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit reversal is undefined for 0")]
    ReverseZero,
    #[error("the discrepancy oracle needs at least one point (N = 0)")]
    EmptyPointSet,
    #[error("matrix evaluation needs an odd index n >= 3, got {0}")]
    MatrixDomain(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("level {level} is outside the supported range {min}..={max}")]
    Level { level: u32, min: u32, max: u32 },
    #[error("argument out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
