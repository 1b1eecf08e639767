use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::LieError;
use crate::linalg::{nullspace, RatMatrix, Rational, SubspaceBasis};
use crate::quadratic::QuadraticSpace;

pub fn bracket(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.commutator(b)
}

/// A subalgebra of `gl(N, Q)`, optionally inside `so(G)` for a Gram matrix `G`.
#[derive(Clone, Debug)]
pub struct MatrixLieAlgebra {
    name: String,
    ambient_dim: usize,
    basis: Vec<RatMatrix>,
    metric: Option<QuadraticSpace>,
    span: SubspaceBasis,
    /// `(P^t)^{-1}` where `P_ik` is basis element `i` at pivot `k` of `span`.
    pivot_inv: RatMatrix,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<RatMatrix>,
    basis: Vec<RatMatrix>,
}

impl MatrixLieAlgebra {
    /// Builds the algebra spanned by `generators`. Dependent generators are
    /// dropped (first occurrence wins); closure and skewness are checked
    /// exactly.
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        generators: Vec<RatMatrix>,
        metric: Option<QuadraticSpace>,
    ) -> Result<Self, LieError> {
        let alg = Self::unchecked(name, ambient_dim, generators, metric)?;
        alg.check_closure()?;
        alg.check_metric()?;
        Ok(alg)
    }

    /// Same as [`MatrixLieAlgebra::new`] without the closure check, for
    /// callers that need to report closure failures themselves.
    pub fn unchecked(
        name: impl Into<String>,
        ambient_dim: usize,
        generators: Vec<RatMatrix>,
        metric: Option<QuadraticSpace>,
    ) -> Result<Self, LieError> {
        for g in &generators {
            if g.nrows() != ambient_dim || g.ncols() != ambient_dim {
                return Err(LieError::Shape(format!(
                    "generator is {}x{}, expected {ambient_dim}x{ambient_dim}",
                    g.nrows(),
                    g.ncols()
                )));
            }
        }
        if let Some(m) = &metric {
            if m.dim() != ambient_dim {
                return Err(LieError::Shape("metric dimension differs from ambient".into()));
            }
        }
        let flat = ambient_dim * ambient_dim;
        let mut basis = Vec::new();
        let mut span = SubspaceBasis::zero(flat);
        for g in generators {
            let v = g.flatten();
            if span.contains_vector(&v) {
                continue;
            }
            span = span
                .span_union(&SubspaceBasis::span(flat, &[v]))
                .expect("same ambient");
            basis.push(g);
        }
        let pivots = span.pivots().to_vec();
        let p = RatMatrix::from_fn(basis.len(), pivots.len(), |i, k| {
            basis[i].get(pivots[k] / ambient_dim, pivots[k] % ambient_dim)
        });
        let pivot_inv = p.transpose().inverse().expect("independent basis");
        Ok(Self {
            name: name.into(),
            ambient_dim,
            basis,
            metric,
            span,
            pivot_inv,
        })
    }

    pub fn zero(ambient_dim: usize, metric: Option<QuadraticSpace>) -> Self {
        Self::unchecked("0", ambient_dim, Vec::new(), metric).expect("empty basis")
    }

    /// Lie algebra generated by `generators` (iterated brackets to a fixpoint).
    pub fn generated_by(
        name: impl Into<String>,
        ambient_dim: usize,
        generators: Vec<RatMatrix>,
        metric: Option<QuadraticSpace>,
    ) -> Result<Self, LieError> {
        let mut alg = Self::unchecked(name, ambient_dim, generators, metric)?;
        loop {
            let mut extra = Vec::new();
            for i in 0..alg.dim() {
                for j in i + 1..alg.dim() {
                    let c = bracket(&alg.basis[i], &alg.basis[j]);
                    if !alg.contains(&c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                break;
            }
            let mut gens = alg.basis.clone();
            gens.extend(extra);
            alg = Self::unchecked(alg.name.clone(), ambient_dim, gens, alg.metric.clone())?;
        }
        alg.check_metric()?;
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    pub fn metric(&self) -> Option<&QuadraticSpace> {
        self.metric.as_ref()
    }

    pub fn with_metric(self, metric: Option<QuadraticSpace>) -> Result<Self, LieError> {
        let alg = Self { metric, ..self };
        alg.check_metric()?;
        Ok(alg)
    }

    /// The algebra as a subspace of flattened `N x N` matrices.
    pub fn subspace(&self) -> &SubspaceBasis {
        &self.span
    }

    pub fn contains(&self, x: &RatMatrix) -> bool {
        self.span.contains_vector(&x.flatten())
    }

    /// Coordinates of `x` against [`MatrixLieAlgebra::basis`].
    pub fn coordinates(&self, x: &RatMatrix) -> Option<Vec<Rational>> {
        let v = x.flatten();
        if !self.span.contains_vector(&v) {
            return None;
        }
        let at_pivots: Vec<Rational> = self.span.pivots().iter().map(|&p| v[p].clone()).collect();
        Some(self.pivot_inv.mul_vec(&at_pivots))
    }

    pub fn combine(&self, coeffs: &[Rational]) -> RatMatrix {
        assert_eq!(coeffs.len(), self.dim());
        let mut entries = Vec::new();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for i in 0..self.ambient_dim {
                for (j, q) in b.row_entries(i) {
                    entries.push((i, j, c * q));
                }
            }
        }
        RatMatrix::from_triplets(self.ambient_dim, self.ambient_dim, entries)
    }

    /// Structure constants `[b_i, b_j] = Σ_k c[i][j][k] b_k`.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<Rational>>>, LieError> {
        let n = self.dim();
        let mut out = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = self
                    .coordinates(&bracket(&self.basis[i], &self.basis[j]))
                    .ok_or(LieError::NotClosed {
                        name: self.name.clone(),
                        i,
                        j,
                    })?;
            }
        }
        Ok(out)
    }

    pub fn check_closure(&self) -> Result<(), LieError> {
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !self.contains(&bracket(&self.basis[i], &self.basis[j])) {
                    return Err(LieError::NotClosed {
                        name: self.name.clone(),
                        i,
                        j,
                    });
                }
            }
        }
        Ok(())
    }

    fn check_metric(&self) -> Result<(), LieError> {
        if let Some(m) = &self.metric {
            if let Some(index) = self.basis.iter().position(|b| !m.is_skew(b)) {
                return Err(LieError::NotSkew {
                    name: self.name.clone(),
                    index,
                });
            }
        }
        Ok(())
    }

    /// Jacobi identity on every basis triple.
    pub fn jacobi_holds(&self) -> bool {
        let b = &self.basis;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                for k in j + 1..b.len() {
                    let s = bracket(&b[i], &bracket(&b[j], &b[k]))
                        .add(&bracket(&b[j], &bracket(&b[k], &b[i])))
                        .add(&bracket(&b[k], &bracket(&b[i], &b[j])));
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `[g, g]`.
    pub fn derived(&self) -> Self {
        let mut gens = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                gens.push(bracket(&self.basis[i], &self.basis[j]));
            }
        }
        Self::unchecked(format!("[{0},{0}]", self.name), self.ambient_dim, gens, self.metric.clone())
            .expect("shapes agree")
    }

    /// `self ⊆ other` as subspaces of `gl(N)`.
    pub fn is_subalgebra_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn same_subspace(&self, other: &Self) -> bool {
        self.span == other.span
    }

    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| LieError::Parse(e.to_string()))?;
        let metric = match file.metric {
            Some(g) => Some(QuadraticSpace::new(g)?),
            None => None,
        };
        Self::new(file.name, file.ambient_dim, file.basis, metric)
    }

    pub fn to_json(&self) -> String {
        let file = AlgebraFile {
            name: self.name.clone(),
            ambient_dim: self.ambient_dim,
            metric: self.metric.as_ref().map(|m| m.gram().clone()),
            basis: self.basis.clone(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

/// Elements `Σ c_i b_i` of `span(basis)` with `constraint(Σ c_i b_i) = 0`,
/// for a linear `constraint`.
pub fn solve_within(
    basis: &[RatMatrix],
    constraint: impl Fn(&RatMatrix) -> Vec<Rational>,
) -> Vec<RatMatrix> {
    if basis.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<Rational>> = basis.iter().map(&constraint).collect();
    let rows = images[0].len();
    let m = RatMatrix::from_fn(rows, basis.len(), |r, c| images[c][r].clone());
    let n = basis[0].nrows();
    nullspace(&m)
        .vectors()
        .iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(basis)
                .filter(|(c, _)| !c.is_zero())
                .fold(RatMatrix::zeros(n, n), |acc, (c, b)| acc.add(&b.scale(c)))
        })
        .collect()
}

/// Elements of `span(basis)` commuting with every matrix in `with`.
pub fn commutant_within(basis: &[RatMatrix], with: &[RatMatrix]) -> Vec<RatMatrix> {
    solve_within(basis, |x| {
        with.iter().flat_map(|w| bracket(x, w).flatten()).collect()
    })
}

/// Matrix units `E_ij` of `gl(n)`.
pub fn gl_basis(n: usize) -> Vec<RatMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(RatMatrix::from_triplets(n, n, [(i, j, Rational::from_integer(1.into()))]));
        }
    }
    out
}

/// Basis `G^{-1}(E_ij − E_ji)` of `so(G)`.
pub fn so_basis(gram: &RatMatrix) -> Vec<RatMatrix> {
    let n = gram.nrows();
    let ginv = gram.inverse().expect("non-degenerate Gram");
    let one = Rational::from_integer(1.into());
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let s = RatMatrix::from_triplets(n, n, [(i, j, one.clone()), (j, i, -one.clone())]);
            out.push(ginv.mul(&s));
        }
    }
    out
}
