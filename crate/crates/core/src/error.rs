use thiserror::Error;

/// Errors raised by the geometric, topological and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("radius {value} lies below the admissible minimum {min}")]
    Range { value: f64, min: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("{stage} did not converge: {message} (residual {residual:e})")]
    Solver {
        stage: &'static str,
        message: String,
        residual: f64,
    },

    #[error("evaluation at a singular point: {0}")]
    Singularity(String),

    #[error("no minimal sphere found: {0}")]
    HorizonNotFound(String),

    #[error("decay fit failed: {0}")]
    DecayFit(String),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    #[error("{what} has {size} items, enumeration is limited to {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("symmetry error: {0}")]
    Symmetry(String),

    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("integrand not integrable: {0}")]
    Integrability(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("boundary error: {0}")]
    Boundary(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
