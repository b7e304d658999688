//! Fraction-free exact linear algebra over Q.

mod matrix;
mod unipoly;

pub use matrix::{
    canonical_vector, nullspace, rank, solve_affine, solve_square, span_basis, AffineResult,
    AffineSolution, QMatrix,
};
pub use unipoly::{char_poly, rational_roots, rational_roots_with_multiplicity, RootMultiplicity, UniPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}
