//! Scalar special functions, Gaussian rules and tridiagonal line solves.

mod gamma;
mod quadrature;
mod tridiag;

pub use gamma::gamma;
pub use quadrature::{gauss_jacobi, gauss_legendre, QuadratureKind, QuadratureRule};
pub use tridiag::{thomas_solve, Tridiagonal, TridiagonalLu};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("quadrature construction failed: {0}")]
    Construction(String),
    #[error("zero pivot at row {row} of tridiagonal system")]
    SingularPivot { row: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
}
