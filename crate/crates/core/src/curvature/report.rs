use serde::{Deserialize, Serialize};

use super::prolong::{nn_linear_part, prolongation};
use super::space::{curvature_space, einstein_space, l_span, l_span_affine, nabla_space};
use super::CurvatureError;
use crate::lie::MatrixLieAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CurvatureReport {
    pub algebra: String,
    pub dim_g: usize,
    pub dim_R: usize,
    pub dim_R0: usize,
    pub R1_nonempty: bool,
    pub dim_LR: usize,
    pub dim_LR1: usize,
    pub is_berger: bool,
    pub is_einstein_berger: bool,
    pub dim_nabla: usize,
    pub is_symmetric_berger: bool,
    /// Only for algebras of the form `diag(A, −Aᵗ) ⊂ so(n,n)`.
    pub dim_prolongation_1: Option<usize>,
    pub dim_prolongation_2: Option<usize>,
}

/// Every curvature-space quantity for one algebra.
pub fn analyze(g: &MatrixLieAlgebra) -> Result<CurvatureReport, CurvatureError> {
    let space = curvature_space(g)?;
    let r1 = einstein_space(g, &space)?;
    let lr = l_span(g, &space.basis);
    let lr1 = l_span_affine(g, &r1);
    let is_berger = g.dim() > 0 && lr == *g.subspace();
    let is_einstein_berger = g.dim() > 0 && lr1 == *g.subspace();
    let dim_nabla = nabla_space(g, &space).dim();
    let (p1, p2) = match nn_linear_part(g) {
        Some(lin) => {
            let n = g.ambient_dim() / 2;
            (
                Some(prolongation(&lin, n, 1)?.dim()),
                Some(prolongation(&lin, n, 2)?.dim()),
            )
        }
        None => (None, None),
    };
    let dim_r0 = if r1.particular.is_some() {
        r1.directions.len()
    } else {
        // R₀ is still a vector space when R₁ is empty.
        ricci_kernel_dim(g, &space)?
    };
    Ok(CurvatureReport {
        algebra: g.name().to_string(),
        dim_g: g.dim(),
        dim_R: space.dim(),
        dim_R0: dim_r0,
        R1_nonempty: r1.particular.is_some(),
        dim_LR: lr.dim(),
        dim_LR1: lr1.dim(),
        is_berger,
        is_einstein_berger,
        dim_nabla,
        is_symmetric_berger: is_berger && dim_nabla == 0,
        dim_prolongation_1: p1,
        dim_prolongation_2: p2,
    })
}

fn ricci_kernel_dim(
    g: &MatrixLieAlgebra,
    space: &super::space::CurvatureSpace,
) -> Result<usize, CurvatureError> {
    Ok(super::space::ricci_flat_space(g, space)?.len())
}
