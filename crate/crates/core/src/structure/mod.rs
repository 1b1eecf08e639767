//! Structured subalgebras of the isotropic parabolic algebra: assembly from
//! block data, weak irreducibility, Wu decomposition and the index-2
//! enumeration.

mod enumerate;
mod reducibility;
mod spec;
mod wu;

use thiserror::Error;

use crate::curvature::CurvatureError;
use crate::lie::{DecoratedElement, LieError};

pub use enumerate::{
    einstein_factor, enumerate_index2, family4_without_c, validate_all, validate_einstein_candidate,
    EinsteinCandidateReport, HFactor,
};
pub use reducibility::{
    associative_envelope, is_irreducible, is_weakly_irreducible, orthogonal_complement, radical,
    weak_irreducibility, Decision,
};
pub use spec::{assemble, LBlock, SpanBlock, StructuredAlgebra, StructuredAlgebraSpec};
pub use wu::{wu_decompose, WuDecomposition, WuFactor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error("cannot read spec: {0}")]
    Parse(String),
    #[error("[{left}, {right}] has a {component}-component outside the algebra")]
    NotClosed {
        left: String,
        right: String,
        component: String,
        witness: Box<DecoratedElement>,
    },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}
