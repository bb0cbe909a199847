use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("malformed number `{0}`")]
    Number(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("factor {index}: {series}{rank} is not an admissible Cartan type")]
    Inadmissible { index: usize, series: char, rank: usize },
    #[error("rank {0} is odd; no Samelson complex structure exists")]
    OddRank(usize),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },
    #[error("invalid Hermitian structure: {0}")]
    Hermitian(String),
    #[error("form is not of type (1,1): F(I e_{0}, I e_{1}) != F(e_{0}, e_{1})")]
    NotOneOne(usize, usize),
    #[error("form of degree {degree} on dimension {dim} exceeds dense storage limits")]
    TooLarge { degree: usize, dim: usize },
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("fixture: {0}")]
    Fixture(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
