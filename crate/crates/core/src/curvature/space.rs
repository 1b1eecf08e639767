use num_traits::Zero;
use rayon::prelude::*;

use super::tensor::{pair_index, pairs, ricci, CurvatureTensor};
use super::CurvatureError;
use crate::lie::MatrixLieAlgebra;
use crate::linalg::{affine_solve, nullspace, RatMatrix, Rational, SubspaceBasis};

/// Basis of `R(g)`: tensors in `Λ²V* ⊗ g` satisfying the first Bianchi identity.
#[derive(Clone, Debug)]
pub struct CurvatureSpace {
    pub basis: Vec<CurvatureTensor>,
}

impl CurvatureSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combine(&self, coeffs: &[Rational]) -> CurvatureTensor {
        assert_eq!(coeffs.len(), self.dim());
        let first = &self.basis[0];
        let mut acc = CurvatureTensor::zero(first.ambient_dim(), first.dim_g());
        for (c, t) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&t.scale(c));
            }
        }
        acc
    }
}

/// `R₁(g) = particular + span(directions)`; `directions` span `R₀(g)`.
#[derive(Clone, Debug)]
pub struct AffineCurvatureSpace {
    pub particular: Option<CurvatureTensor>,
    pub directions: Vec<CurvatureTensor>,
}

impl AffineCurvatureSpace {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }
}

fn require_metric(g: &MatrixLieAlgebra) -> Result<&RatMatrix, CurvatureError> {
    Ok(g.metric().ok_or(CurvatureError::NoMetric)?.gram())
}

/// Dense entries `(B_k)_{dc}` indexed `[k][d][c]`.
fn dense_basis(g: &MatrixLieAlgebra) -> Vec<Vec<Vec<Rational>>> {
    g.basis().iter().map(RatMatrix::to_rows).collect()
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Rows ordered by triple `a < b < c` (lexicographic), then output coordinate.
pub fn bianchi_system(g: &MatrixLieAlgebra) -> RatMatrix {
    let n = g.ambient_dim();
    let d = g.dim();
    let dense = dense_basis(g);
    let ts = triples(n);
    let blocks: Vec<Vec<(usize, usize, Rational)>> = ts
        .par_iter()
        .enumerate()
        .map(|(t, &(a, b, c))| {
            let mut entries = Vec::new();
            let ab = pair_index(n, a, b);
            let bc = pair_index(n, b, c);
            let ac = pair_index(n, a, c);
            for out in 0..n {
                let row = t * n + out;
                for k in 0..d {
                    let bk = &dense[k][out];
                    if !bk[c].is_zero() {
                        entries.push((row, ab * d + k, bk[c].clone()));
                    }
                    if !bk[a].is_zero() {
                        entries.push((row, bc * d + k, bk[a].clone()));
                    }
                    // R(e_c, e_a) = −R(e_a, e_c)
                    if !bk[b].is_zero() {
                        entries.push((row, ac * d + k, -bk[b].clone()));
                    }
                }
            }
            entries
        })
        .collect();
    RatMatrix::from_triplets(ts.len() * n, pairs(n).len() * d, blocks.into_iter().flatten())
}

pub fn curvature_space(g: &MatrixLieAlgebra) -> Result<CurvatureSpace, CurvatureError> {
    require_metric(g)?;
    let n = g.ambient_dim();
    let d = g.dim();
    if d == 0 || n < 2 {
        return Ok(CurvatureSpace { basis: Vec::new() });
    }
    let ker = nullspace(&bianchi_system(g));
    let basis = ker
        .vectors()
        .into_iter()
        .map(|v| CurvatureTensor::from_coeffs(n, d, v))
        .collect();
    Ok(CurvatureSpace { basis })
}

/// `Ric(R) = G` solved over coordinates in `R(g)`.
pub fn einstein_space(
    g: &MatrixLieAlgebra,
    space: &CurvatureSpace,
) -> Result<AffineCurvatureSpace, CurvatureError> {
    let gram = require_metric(g)?;
    let n = g.ambient_dim();
    let ricci_cols: Vec<RatMatrix> = space.basis.par_iter().map(|t| ricci(g, t)).collect();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let m = RatMatrix::from_fn(idx.len(), space.dim(), |r, c| ricci_cols[c].get(idx[r].0, idx[r].1));
    let rhs: Vec<Rational> = idx.iter().map(|&(x, y)| gram.get(x, y)).collect();
    if space.dim() == 0 {
        // Only the zero tensor is available; Ric = 0 ≠ G whenever n ≥ 1.
        return Ok(AffineCurvatureSpace {
            particular: None,
            directions: Vec::new(),
        });
    }
    let (x, ker) = affine_solve(&m, &rhs)?;
    Ok(AffineCurvatureSpace {
        particular: x.map(|c| space.combine(&c)),
        directions: ker.vectors().iter().map(|c| space.combine(c)).collect(),
    })
}

/// Basis of `R₀(g)`, the Ricci-flat tensors in `R(g)`.
pub fn ricci_flat_space(
    g: &MatrixLieAlgebra,
    space: &CurvatureSpace,
) -> Result<Vec<CurvatureTensor>, CurvatureError> {
    require_metric(g)?;
    if space.dim() == 0 {
        return Ok(Vec::new());
    }
    let n = g.ambient_dim();
    let ricci_cols: Vec<RatMatrix> = space.basis.par_iter().map(|t| ricci(g, t)).collect();
    let m = RatMatrix::from_fn(n * n, space.dim(), |r, c| ricci_cols[c].get(r / n, r % n));
    Ok(nullspace(&m).vectors().iter().map(|c| space.combine(c)).collect())
}

/// Span of all values `R(e_a, e_b)` of the given tensors, as a subspace of
/// flattened `N x N` matrices.
pub fn l_span<'a>(
    g: &MatrixLieAlgebra,
    tensors: impl IntoIterator<Item = &'a CurvatureTensor>,
) -> SubspaceBasis {
    let d = g.dim();
    let n = g.ambient_dim();
    let mut coords = Vec::new();
    for t in tensors {
        for chunk in t.coeffs().chunks(d.max(1)) {
            if chunk.iter().any(|x| !x.is_zero()) {
                coords.push(chunk.to_vec());
            }
        }
    }
    let in_g = SubspaceBasis::span(d, &coords);
    let mats: Vec<Vec<Rational>> = in_g.vectors().iter().map(|c| g.combine(c).flatten()).collect();
    SubspaceBasis::span(n * n, &mats)
}

pub fn l_span_affine(g: &MatrixLieAlgebra, r1: &AffineCurvatureSpace) -> SubspaceBasis {
    match &r1.particular {
        None => SubspaceBasis::zero(g.ambient_dim() * g.ambient_dim()),
        Some(p) => l_span(g, std::iter::once(p).chain(&r1.directions)),
    }
}

pub fn is_berger(g: &MatrixLieAlgebra) -> Result<bool, CurvatureError> {
    let space = curvature_space(g)?;
    Ok(g.dim() > 0 && l_span(g, &space.basis) == *g.subspace())
}

pub fn is_einstein_berger(g: &MatrixLieAlgebra) -> Result<bool, CurvatureError> {
    let space = curvature_space(g)?;
    let r1 = einstein_space(g, &space)?;
    Ok(g.dim() > 0 && l_span_affine(g, &r1) == *g.subspace())
}

/// `R^∇(g)`: maps `S : V → R(g)` with `S_X(Y,Z) + S_Y(Z,X) + S_Z(X,Y) = 0`.
/// Each basis vector lists, for `x = 0..N`, the coordinates of `S(e_x)`
/// against `space.basis`.
pub fn nabla_space(g: &MatrixLieAlgebra, space: &CurvatureSpace) -> SubspaceBasis {
    let n = g.ambient_dim();
    let d = g.dim();
    let r = space.dim();
    if r == 0 {
        return SubspaceBasis::zero(0);
    }
    let ts = triples(n);
    // Unknown (x, j) sits at column x * r + j.
    let blocks: Vec<Vec<(usize, usize, Rational)>> = ts
        .par_iter()
        .enumerate()
        .map(|(t, &(a, b, c))| {
            let mut entries = Vec::new();
            for (j, tensor) in space.basis.iter().enumerate() {
                let terms = [(a, b, c), (b, c, a), (c, a, b)];
                for &(x, y, z) in &terms {
                    let comp = tensor.component(y, z);
                    for (k, v) in comp.into_iter().enumerate() {
                        if !v.is_zero() {
                            entries.push((t * d + k, x * r + j, v));
                        }
                    }
                }
            }
            entries
        })
        .collect();
    let m = RatMatrix::from_triplets(ts.len() * d, n * r, blocks.into_iter().flatten());
    nullspace(&m)
}

pub fn is_symmetric_berger(g: &MatrixLieAlgebra) -> Result<bool, CurvatureError> {
    let space = curvature_space(g)?;
    let berger = g.dim() > 0 && l_span(g, &space.basis) == *g.subspace();
    Ok(berger && nabla_space(g, &space).dim() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;
    use crate::linalg::int;

    #[test]
    fn orthogonal_dimensions() {
        for (n, dim) in [(2, 1), (3, 6), (4, 20)] {
            let g = catalog(&format!("so:{n}")).unwrap();
            let s = curvature_space(&g).unwrap();
            assert_eq!(s.dim(), dim);
            for t in &s.basis {
                assert!(t.satisfies_bianchi(&g));
            }
        }
    }

    #[test]
    fn constant_curvature_ricci() {
        for n in 2..5 {
            let g = catalog(&format!("so:{n}")).unwrap();
            let r = CurvatureTensor::constant_curvature(&g).unwrap();
            assert!(r.satisfies_bianchi(&g));
            let expected = g.metric().unwrap().gram().scale(&int(n as i64 - 1));
            assert_eq!(ricci(&g, &r), expected);
            let r1 = einstein_space(&g, &curvature_space(&g).unwrap()).unwrap();
            let p = r1.particular.unwrap();
            assert_eq!(ricci(&g, &p), *g.metric().unwrap().gram());
        }
    }

    #[test]
    fn trivial_algebra() {
        let g = MatrixLieAlgebra::zero(3, catalog("so:3").unwrap().metric().cloned());
        let s = curvature_space(&g).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(einstein_space(&g, &s).unwrap().is_empty());
        assert!(!is_berger(&g).unwrap());
        assert!(!is_symmetric_berger(&g).unwrap());
    }

    #[test]
    fn rejects_missing_metric() {
        let g = catalog("so:3").unwrap().with_metric(None).unwrap();
        assert!(matches!(curvature_space(&g), Err(CurvatureError::NoMetric)));
    }
}
