//! Matrix Lie algebras over Q.

mod algebra;
pub mod catalog;
mod decorated;
mod ops;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::quadratic::QuadraticError;

pub use algebra::{bracket, commutant_within, gl_basis, so_basis, solve_within, MatrixLieAlgebra};
pub use catalog::{catalog, catalog_entry, families, CatalogEntry, CatalogFamily};
pub use decorated::{
    decorated_algebra, decorated_bracket, decorated_dim, decorated_frame_algebra,
    decorated_generators, decorated_project, DecoratedElement, DecoratedFrame,
};
pub use ops::{centralizer, generated_ideal, invariant_subspace_probe, subspace_algebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("{0}")]
    Shape(String),
    #[error("{name}: bracket of basis elements {i} and {j} leaves the span")]
    NotClosed { name: String, i: usize, j: usize },
    #[error("{name}: basis element {index} is not skew for the metric")]
    NotSkew { name: String, index: usize },
    #[error("not in the parabolic algebra: {0}")]
    NotDecorated(String),
    #[error("unknown catalog family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cannot read algebra: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
}
