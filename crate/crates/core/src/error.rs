use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid domain, grid or solver configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// A value outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// No admissible ε-choice exists for the requested bound.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The operation does not apply to the given regime or ledger.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("positivity lost at t = {time}: {detail}")]
    Positivity { time: f64, detail: String },
    #[error("blow-up time estimation failed: {0}")]
    Estimation(String),
}
