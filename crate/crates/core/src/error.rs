use crate::parser::ParseError;
use crate::scalar_expr::EvalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree error: {0}")]
    Degree(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("could not draw {wanted} valid sample points in {attempts} attempts")]
    SamplingExhausted { wanted: usize, attempts: usize },
    #[error("metric is not symmetric in entries ({0}, {1})")]
    AsymmetricMetric(usize, usize),
    #[error("metric is singular at {point:?} (determinant {determinant:e})")]
    SingularMetric { point: Vec<f64>, determinant: f64 },
    #[error("form is not antiexact: {0}")]
    NotAntiexact(String),
    #[error("reconstruction failed: max error {max_error:e} at {witness:?}")]
    ReconstructionFailure { max_error: f64, witness: Vec<f64> },
    #[error("torsion is nonzero; the recursive solution does not apply")]
    NonzeroTorsion,
    #[error("invalid gamma choice: {0}")]
    InvalidGammaChoice(String),
    #[error("no regular homotopy center found in the chart box for {0}")]
    SingularCenter(String),
}
