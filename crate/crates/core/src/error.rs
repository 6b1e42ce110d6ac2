use thiserror::Error;

use crate::scalar::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("order {n} exceeds the limit {limit} for this route")]
    OrderTooLarge { n: usize, limit: usize },

    #[error("unsupported dimension {0}; polytopes live in dimension 1 to 4")]
    UnsupportedDimension(usize),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("negative dilation factor {0}")]
    NegativeScale(Rat),

    #[error("intermediate point budget exceeded: {points} candidate points, budget {budget}")]
    BudgetExceeded { points: usize, budget: usize },

    #[error("{what} is not positive semi-definite")]
    NotPsd { what: String },

    #[error("{what} is not positive definite")]
    NotPd { what: String },

    #[error("class {index} is not nef and big (determinant is zero)")]
    NotBig { index: usize },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("degenerate pairing: d00 = 0, no proportionality constant")]
    DegeneratePairing,

    #[error("table is not symmetric at ({i}, {j})")]
    AsymmetricTable { i: usize, j: usize },

    #[error("negative pairing d[{i}][{j}] = {value} from positive semi-definite inputs")]
    NegativePairing { i: usize, j: usize, value: Rat },

    #[error("{inequality} violated: {detail}")]
    Violated {
        inequality: &'static str,
        detail: String,
    },

    #[error("json: {0}")]
    Json(String),

    #[error("configuration: {0}")]
    Config(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
