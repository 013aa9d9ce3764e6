use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex pair ({i}, {j}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("value {value} is not in the {alphabet} alphabet")]
    AlphabetViolation { value: i8, alphabet: &'static str },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate edge ({i}, {j}) on line {line}")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver failed (info = {0})")]
    Eigensolver(i32),
    #[error("infeasible problem: {0}")]
    InfeasibleProblem(String),
    #[error("top eigenvalue is not simple (gap {gap:e})")]
    DegenerateSpectrum { gap: f64 },
    #[error("thresholded relation is not an equivalence")]
    InconsistentRelation,
    #[error("recovered cluster sizes {found:?} do not match {expected:?}")]
    SizeMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("brute force limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible regime: {0}")]
    InfeasibleRegime(String),
    #[error("invalid constants: {0}")]
    InvalidShift(String),
    #[error("distance search exceeded its time budget after {evaluated} evaluations")]
    BudgetExceeded { evaluated: usize },
    #[error("degenerate parameter estimate (rho_hat = {rho_hat})")]
    DegenerateEstimate { rho_hat: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
