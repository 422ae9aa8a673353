use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("no rewriting rule applies: {0}")]
    NoRule(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedMap(String),
    #[error("expression is not concrete: {0}")]
    NotConcrete(String),
    #[error("rule does not fit its endpoints: {0}")]
    ShapeMismatch(String),
    #[error("d∘d ≠ 0 at {0}")]
    DifferentialMismatch(String),
    #[error("slice weights are not strictly increasing: {0}")]
    NonMonotoneWeights(String),
    #[error("differential leaves the window: {0}")]
    WindowTooSmall(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("outside the configured window: {0}")]
    OutOfWindow(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("parse error: {0}")]
    Parse(String),
}
