pub mod linalg;
pub mod quadratic;
pub mod lie;
pub mod curvature;
pub mod structure;
pub mod metric;
pub mod cli;
