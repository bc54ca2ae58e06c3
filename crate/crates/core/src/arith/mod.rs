//! Exact integer linear algebra: square matrices over `Z`, Smith normal form,
//! linear congruences and torsion vectors in `(1/N)Z^k / Z^k`.

mod matrix;
mod snf;
mod torsion;

pub use matrix::IntMatrix;
pub use snf::{matrix_order, smith_normal_form, solve_linear_mod, SnfDecomposition};
pub use torsion::TorsionVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows} rows, a row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("torsion modulus must be positive")]
    ZeroModulus,
    #[error("cannot rewrite a point of modulus {from} over modulus {to}")]
    IncompatibleModulus { from: u64, to: u64 },
    #[error("cannot parse torsion coordinates {0:?} (expected e.g. `1/4,0`)")]
    Parse(String),
}
