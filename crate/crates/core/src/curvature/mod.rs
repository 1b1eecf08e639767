//! Algebraic curvature tensors of a metric Lie algebra `g ⊂ so(p,q)`.
//!
//! Ricci convention: `Ric(X, Y) = tr(Z ↦ R(Z, X)Y)`, so the constant
//! curvature tensor `R(X,Y)Z = g(Y,Z)X − g(X,Z)Y` has `Ric = (n − 1)g`.

mod prolong;
mod report;
mod space;
mod tensor;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use prolong::{nn_block_structure, nn_linear_part, prolongation, NnDiagnostics, Prolongation};
pub use report::{analyze, CurvatureReport};
pub use space::{
    bianchi_system, curvature_space, einstein_space, is_berger, is_einstein_berger,
    is_symmetric_berger, l_span, l_span_affine, nabla_space, ricci_flat_space,
    AffineCurvatureSpace, CurvatureSpace,
};
pub use tensor::{pair_index, pairs, ricci, CurvatureTensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvatureError {
    #[error("algebra has no metric; curvature spaces need g ⊂ so(p,q)")]
    NoMetric,
    #[error("R(e_{a}, e_{b}) does not lie in the algebra")]
    NotInAlgebra { a: usize, b: usize },
    #[error("prolongation order {0} is not supported (use 1 or 2)")]
    UnsupportedOrder(usize),
    #[error("algebra is not of the form diag(A, -A^t) in so(n,n)")]
    NotNnType,
    #[error("block structure violated: {0}")]
    BlockViolation(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
