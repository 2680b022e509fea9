use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("weight file does not match the graph: {0}")]
    WeightMismatch(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("brute force is limited to n <= {limit} vertices, got n = {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("budget T = {budget} is too small for n = {n}; the minimum feasible budget is {min_feasible}")]
    BudgetTooSmall {
        budget: u64,
        n: usize,
        min_feasible: u64,
    },

    #[error("budget exceeded: {used} queries issued against a budget of {budget}")]
    BudgetExceeded { used: u64, budget: u64 },

    #[error("degenerate intervals: the lower-bound densest subgraph has zero density")]
    DegenerateIntervals,

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
