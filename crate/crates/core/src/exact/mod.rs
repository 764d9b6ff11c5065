//! Exact linear algebra over the rationals.
//!
//! Everything downstream (connections, Lie closures, envelopes, graded
//! dimensions) reduces to rank and span computations here. Matrices are dense
//! and row-major; subspaces are kept as sparse reduced echelon bases so that
//! spans compare by equality.

mod echelon;
mod jordan;
mod matrix;
mod poly;
mod scalar;

use thiserror::Error;

pub use echelon::{
    closure_with, subspace_closure, to_dense, to_sparse, EchelonBasis, ProductSymmetry, SparseVec,
};
pub use jordan::{jordan_chevalley, semisimple_polynomial, JordanPair};
pub use matrix::{Matrix, RowEchelon};
pub use poly::Poly;
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("malformed rational {0:?}: expected \"p\" or \"p/q\"")]
    BadScalar(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector of length {found} where length {expected} was expected")]
    DimensionMismatch { expected: usize, found: usize },
}
