use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimension(String),

    /// The elimination met a (numerically) zero pivot: the matrix is not
    /// strongly regular. `step` is 1-based.
    #[error("zero pivot at elimination step {step} (matrix is not strongly regular)")]
    ZeroPivot { step: usize },

    #[error("diagonal entry {index} is zero")]
    ZeroDiagonal { index: usize },

    /// The strong dominance condition fails; `column` is the 1-based column
    /// attaining the smallest admissible `mu`.
    #[error("dominance condition not satisfied: mu = {mu} (column {column})")]
    DominanceViolated { mu: f64, column: usize },

    #[error("entry ({i}, {j}) lies outside the region encoded by the Green generators")]
    NotRepresented { i: usize, j: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid spectral interval [{a}, {b}]: need 0 < a <= b")]
    InvalidSpectrum { a: f64, b: f64 },

    #[error("QR bound hypotheses not satisfied: {0}")]
    QrHypothesis(String),

    #[error("decay rate {gamma} is not below 1")]
    RateDegenerate { gamma: f64 },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("experiment {0}: {1}")]
    Experiment(String, String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
