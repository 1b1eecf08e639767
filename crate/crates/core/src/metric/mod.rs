//! Coordinate metrics: Levi-Civita curvature from symbolic derivatives,
//! Einstein and Laplace checks, the Walker-type constructions, parallel
//! transport and numerical holonomy.

mod builders;
mod chart;
mod checks;
mod expr;
mod geometry;
mod holonomy;
mod transport;

use thiserror::Error;

pub use builders::{
    build_conclusion_metric, build_example1, build_index2_metric, flat_chart, harmonic_library,
    pp_wave_2d, unit_sphere, walker_block, ConclusionIngredients, CorrectionTerm, HarmonicFunction,
    Index2Ingredients,
};
pub use chart::MetricChart;
pub use checks::{einstein_check, laplace_check, laplacian_at, EinsteinReport, LaplaceReport};
pub use expr::{parse_expr, Expr, Func};
pub use geometry::{christoffel, curvature_at, metric_at, ricci_at, Christoffel, NumericCurvature};
pub use holonomy::{
    candidate_in_frame, holonomy_estimate, projection_residuals, span_dimension, CollectedElement,
    ElementKind, HolonomyConfig, HolonomyEstimate, SpanReport,
};
pub use transport::{parallel_transport, Path, Piece, TransportResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid chart: {0}")]
    Invalid(String),
    #[error("metric is singular at {point:?}")]
    Singular { point: Vec<f64> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("transport did not converge after {steps} steps (drift {drift:e})")]
    NonConvergence { steps: usize, drift: f64 },
    #[error("ill-conditioned frame: {0}")]
    IllConditioned(String),
}
