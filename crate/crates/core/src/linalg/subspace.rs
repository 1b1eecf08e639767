use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::elim;
use super::matrix::RatMatrix;
use super::rational::Rational;
use super::LinalgError;

/// A subspace of `Q^n` in canonical form: the nonzero rows of the reduced
/// row-echelon form of any generating set. Two bases of the same subspace
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    rows: RatMatrix,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            rows: RatMatrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            rows: RatMatrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors (which need not be independent).
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "generator length mismatch");
        }
        let gens = RatMatrix::from_fn(vectors.len(), ambient_dim, |i, j| vectors[i][j].clone());
        Self::row_space(&gens)
    }

    pub fn row_space(m: &RatMatrix) -> Self {
        let (rows, pivots) = elim::rref_rows(m);
        Self {
            ambient_dim: m.ncols(),
            rows,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical basis vectors.
    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.dim()).map(|i| self.rows.row(i)).collect()
    }

    /// Basis vectors as the rows of a `dim x ambient` matrix.
    pub fn as_rows(&self) -> &RatMatrix {
        &self.rows
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in
    /// the subspace.
    fn reduce(&self, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = rest[p].clone();
            if !c.is_zero() {
                for (j, q) in self.rows.row_entries(i) {
                    rest[j] -= &c * &q;
                }
            }
            coords.push(c);
        }
        (coords, rest)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        self.reduce(v).1.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` against the canonical basis, if `v` is a member.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let (coords, rest) = self.reduce(v);
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    fn check(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn span_union(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        Ok(Self::row_space(&RatMatrix::vstack(&[&self.rows, &other.rows])))
    }

    /// Linear equations cutting out this subspace, as matrix rows.
    pub fn annihilator(&self) -> RatMatrix {
        let k = elim::kernel_vectors(&self.rows);
        RatMatrix::from_fn(k.len(), self.ambient_dim, |i, j| k[i][j].clone())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        let eqs = RatMatrix::vstack(&[&self.annihilator(), &other.annihilator()]);
        Ok(nullspace(&eqs))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(other.vectors().iter().all(|v| self.contains_vector(v)))
    }

    pub fn equal(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(self == other)
    }
}

/// Basis of `{v : m v = 0}` in canonical form.
pub fn nullspace(m: &RatMatrix) -> SubspaceBasis {
    SubspaceBasis::span(m.ncols(), &elim::kernel_vectors(m))
}

/// Solution set of `m x = b`: a particular solution when one exists, and the
/// kernel of `m` either way.
pub fn affine_solve(
    m: &RatMatrix,
    b: &[Rational],
) -> Result<(Option<Vec<Rational>>, SubspaceBasis), LinalgError> {
    if b.len() != m.nrows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.nrows(),
            found: b.len(),
        });
    }
    let n = m.ncols();
    let mut entries = Vec::with_capacity(m.nnz() + b.len());
    for i in 0..m.nrows() {
        for (j, q) in m.row_entries(i) {
            entries.push((i, j, q));
        }
        if !b[i].is_zero() {
            entries.push((i, n, b[i].clone()));
        }
    }
    let aug = RatMatrix::from_triplets(m.nrows(), n + 1, entries);
    let (r, pivots) = elim::rref(&aug);
    let kernel = nullspace(m);
    if pivots.last() == Some(&n) {
        return Ok((None, kernel));
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, n);
    }
    Ok((Some(x), kernel))
}
