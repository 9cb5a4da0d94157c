use thiserror::Error;

/// Malformed problem data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("agent {agent}: {what}")]
    Agent { agent: usize, what: String },
    #[error("{0}")]
    Shape(String),
    #[error("invalid value: {0}")]
    Value(String),
}

/// Failures of the simplex solver and of basis linear algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("problem is infeasible (phase-1 residual {residual:e})")]
    Infeasible { residual: f64 },
    #[error("problem is unbounded along column {column}")]
    Unbounded { column: usize },
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("budget matrix is rank deficient ({redundant} redundant rows)")]
    RankDeficient { redundant: usize },
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failures of the confidence-bound engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no sign change found for k = {k} (m = {m}, beta = {beta:e})")]
    BracketFailure { m: usize, k: usize, beta: f64 },
    #[error("epsilon table was built for m = {table} but the solution has {solution} agents")]
    MismatchedSampleSize { table: usize, solution: usize },
}

/// Failures of the new-agent certificate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrivalError {
    #[error("base solution is degenerate or not unique; the certificate is unreliable")]
    DegenerateBase,
    #[error("newcomer has {got} resource rows, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("reduced-cost and dual-form tests disagree")]
    FormMismatch,
    #[error("at least one arrival must be drawn")]
    NoDraws,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Top-level error used by the experiment harness and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Arrival(#[from] ArrivalError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag for the error JSON emitted by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Model(_) => "model",
            Error::Solve(SolveError::Infeasible { .. }) => "infeasible",
            Error::Solve(SolveError::Unbounded { .. }) => "unbounded",
            Error::Solve(_) => "solve",
            Error::Bounds(_) => "bounds",
            Error::Arrival(_) => "arrival",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
