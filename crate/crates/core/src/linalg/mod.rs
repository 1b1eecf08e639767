//! Exact rational linear algebra: matrices, reduced row-echelon forms,
//! kernels, affine solves and canonical subspaces.

mod elim;
mod matrix;
pub mod poly;
pub mod rational;
mod subspace;

use thiserror::Error;

pub use elim::{rank, rref};
pub use matrix::{RatMatrix, SPARSE_FILL_RATIO};
pub use poly::{minimal_polynomial, Poly};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use subspace::{affine_solve, nullspace, SubspaceBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}
