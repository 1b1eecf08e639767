use num_traits::Zero;
use serde::Serialize;

use super::tensor::{ricci, CurvatureTensor};
use super::CurvatureError;
use crate::lie::catalog::nn_gl_part;
use crate::lie::MatrixLieAlgebra;
use crate::linalg::{nullspace, RatMatrix, Rational, SubspaceBasis};
use crate::quadratic::witt_gram;

/// Basis of `g^{(k)}` for `g ⊂ gl(n)`.
///
/// Order 1: unknown `(i, l)` is the `l`-th coordinate of `S(e_i)`.
/// Order 2: unknown `(pair(i,j), l)` with `i <= j` is the `l`-th coordinate of `S(e_i, e_j)`.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub order: usize,
    pub n: usize,
    pub space: SubspaceBasis,
}

impl Prolongation {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// `g ⊂ gl(n)` given by a basis of `n x n` matrices (need not be a metric algebra).
pub fn prolongation(basis: &[RatMatrix], n: usize, order: usize) -> Result<Prolongation, CurvatureError> {
    let d = basis.len();
    let dense: Vec<Vec<Vec<Rational>>> = basis.iter().map(RatMatrix::to_rows).collect();
    let mut entries = Vec::new();
    let mut row = 0;
    let cols = match order {
        1 => {
            // S(e_i) e_j − S(e_j) e_i = 0
            for i in 0..n {
                for j in i + 1..n {
                    for out in 0..n {
                        for l in 0..d {
                            let x = &dense[l][out][j];
                            if !x.is_zero() {
                                entries.push((row, i * d + l, x.clone()));
                            }
                            let y = &dense[l][out][i];
                            if !y.is_zero() {
                                entries.push((row, j * d + l, -y.clone()));
                            }
                        }
                        row += 1;
                    }
                }
            }
            n * d
        }
        2 => {
            // S(e_i, e_j) e_k − S(e_i, e_k) e_j = 0
            for i in 0..n {
                for j in 0..n {
                    for k in j + 1..n {
                        for out in 0..n {
                            for l in 0..d {
                                let x = &dense[l][out][k];
                                if !x.is_zero() {
                                    entries.push((row, sym_index(n, i, j) * d + l, x.clone()));
                                }
                                let y = &dense[l][out][j];
                                if !y.is_zero() {
                                    entries.push((row, sym_index(n, i, k) * d + l, -y.clone()));
                                }
                            }
                            row += 1;
                        }
                    }
                }
            }
            n * (n + 1) / 2 * d
        }
        k => return Err(CurvatureError::UnsupportedOrder(k)),
    };
    let m = RatMatrix::from_triplets(row, cols, entries);
    Ok(Prolongation {
        order,
        n,
        space: nullspace(&m),
    })
}

/// For `g = diag(A, −Aᵗ) ⊂ so(n,n)` in the pairing basis, the linear part
/// `{A} ⊂ gl(n)`; `None` when `g` does not have that shape.
pub fn nn_linear_part(g: &MatrixLieAlgebra) -> Option<Vec<RatMatrix>> {
    let big = g.ambient_dim();
    if big % 2 == 1 || big == 0 {
        return None;
    }
    let n = big / 2;
    if g.metric()?.gram() != &witt_gram(n, &[]) {
        return None;
    }
    let mut out = Vec::new();
    for b in g.basis() {
        let a = nn_gl_part(b);
        if RatMatrix::block_diag(&[&a, &a.transpose().neg()]) != *b {
            return None;
        }
        out.push(a);
    }
    Some(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct NnDiagnostics {
    /// Prolongation coordinates of `X ↦ pr_gl R(X, q_j)`, one vector per `j`.
    pub prolongation_coords: Vec<Vec<String>>,
    pub ricci_trace_formula_holds: bool,
    pub ricci_flat: bool,
}

/// Checks `R(V,V) = R(V*,V*) = 0`, that `X ↦ R(X,Y)` lies in `g^{(1)}` for
/// `Y ∈ V*`, and `Ric(X,Y) = tr pr_gl R(X,Y)`.
pub fn nn_block_structure(g: &MatrixLieAlgebra, r: &CurvatureTensor) -> Result<NnDiagnostics, CurvatureError> {
    let lin = nn_linear_part(g).ok_or(CurvatureError::NotNnType)?;
    let n = g.ambient_dim() / 2;
    for a in 0..n {
        for b in a + 1..n {
            if !r.value(g, a, b).is_zero() {
                return Err(CurvatureError::BlockViolation(format!("R(p_{a}, p_{b}) ≠ 0")));
            }
            if !r.value(g, n + a, n + b).is_zero() {
                return Err(CurvatureError::BlockViolation(format!("R(q_{a}, q_{b}) ≠ 0")));
            }
        }
    }
    let prol = prolongation(&lin, n, 1)?;
    let d = g.dim();
    let ric = ricci(g, r);
    let mut coords = Vec::new();
    let mut trace_ok = true;
    for j in 0..n {
        // S_j(e_i) = pr_gl R(p_i, q_j); coordinates against `lin` equal those against `g`.
        let mut v = Vec::with_capacity(n * d);
        for i in 0..n {
            let comp = r.component(i, n + j);
            let value = r.value(g, i, n + j);
            if nn_gl_part(&value).trace() != ric.get(i, n + j) {
                trace_ok = false;
            }
            v.extend(comp);
        }
        let c = prol.space.coordinates(&v).ok_or_else(|| {
            CurvatureError::BlockViolation(format!("X ↦ R(X, q_{j}) is not in the first prolongation"))
        })?;
        coords.push(c.iter().map(crate::linalg::format_rational).collect());
    }
    Ok(NnDiagnostics {
        prolongation_coords: coords,
        ricci_trace_formula_holds: trace_ok,
        ricci_flat: ric.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{catalog, gl_basis, so_basis};

    #[test]
    fn prolongation_dimensions() {
        for n in 2..4 {
            assert_eq!(prolongation(&gl_basis(n), n, 1).unwrap().dim(), n * n * (n + 1) / 2);
            assert_eq!(prolongation(&so_basis(&RatMatrix::identity(n)), n, 1).unwrap().dim(), 0);
        }
        assert_eq!(prolongation(&so_basis(&RatMatrix::identity(4)), 4, 1).unwrap().dim(), 0);
        // gl(2)^{(2)} = S³V* ⊗ V has dimension 4 · 2 = 8.
        assert_eq!(prolongation(&gl_basis(2), 2, 2).unwrap().dim(), 8);
        assert_eq!(prolongation(&[], 3, 2).unwrap().dim(), 0);
        assert!(prolongation(&gl_basis(2), 2, 3).is_err());
    }

    #[test]
    fn linear_part_detection() {
        assert!(nn_linear_part(&catalog("gl:2:R@so(2,2)").unwrap()).is_some());
        assert!(nn_linear_part(&catalog("so:2,2").unwrap()).is_none());
    }
}
