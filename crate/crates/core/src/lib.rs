pub mod chart;
pub mod decompose;
pub mod error;
pub mod forms;
pub mod frobenius;
pub mod homotopy;
pub mod parser;
pub mod quadrature;
pub mod random;
pub mod scalar_expr;
pub mod suites;
pub mod verify;

pub use chart::Chart;
pub use error::{Error, Result};
pub use scalar_expr::{rational, Rational, ScalarExpr};
