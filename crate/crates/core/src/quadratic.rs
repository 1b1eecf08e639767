//! Pseudo-Euclidean spaces, Witt bases and the Witt basis change that
//! normalises an element `(id, 0, X, C)` of the isotropic-parabolic algebra.
//!
//! Conventions: `standard_space(p, q)` has Gram `diag(+1 × p, −1 × q)` and
//! `E_{r,s} = diag(+1 × r, −1 × s)`. A Witt basis is ordered
//! `p_1..p_m, e_1..e_n, q_1..q_m`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{int, rat, RatMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadraticError {
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("rebase data has wrong shape: {0}")]
    Shape(String),
    #[error("rebase parameter C is not skew-symmetric")]
    NotSkew,
    #[error("rebase data violates the Witt equalities: {0}")]
    WittEqualities(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }
}

/// Ambient signature `(m + r, m + s)` with an `m`-dimensional isotropic
/// subspace singled out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSignature {
    pub m: usize,
    pub r: usize,
    pub s: usize,
}

impl SplitSignature {
    pub fn new(m: usize, r: usize, s: usize) -> Self {
        Self { m, r, s }
    }

    pub fn n(&self) -> usize {
        self.r + self.s
    }

    pub fn ambient(&self) -> Signature {
        Signature::new(self.m + self.r, self.m + self.s)
    }

    /// Diagonal of `E_{r,s}`.
    pub fn middle_signs(&self) -> Vec<i64> {
        let mut signs = vec![1; self.r];
        signs.resize(self.r + self.s, -1);
        signs
    }
}

/// `R^N` with a non-degenerate symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSpace {
    gram: RatMatrix,
    signature: Signature,
}

impl QuadraticSpace {
    pub fn new(gram: RatMatrix) -> Result<Self, QuadraticError> {
        if !gram.is_symmetric() {
            return Err(QuadraticError::NotSymmetric);
        }
        let (p, q, z) = inertia(&gram);
        if z > 0 {
            return Err(QuadraticError::Degenerate);
        }
        Ok(Self {
            gram,
            signature: Signature::new(p, q),
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `true` iff `a^t G + G a = 0`.
    pub fn is_skew(&self, a: &RatMatrix) -> bool {
        let ga = self.gram.mul(a);
        ga.transpose().add(&ga).is_zero()
    }

    /// Metric adjoint `G^{-1} a^t G`.
    pub fn adjoint(&self, a: &RatMatrix) -> RatMatrix {
        let ginv = self.gram.inverse().expect("non-degenerate by construction");
        ginv.mul(&a.transpose()).mul(&self.gram)
    }

    /// Gram matrix of the span of the given columns.
    pub fn restricted_gram(&self, columns: &RatMatrix) -> RatMatrix {
        columns.transpose().mul(&self.gram).mul(columns)
    }
}

/// Sylvester inertia `(positive, negative, zero)` by exact congruence
/// diagonalisation.
pub fn inertia(sym: &RatMatrix) -> (usize, usize, usize) {
    let n = sym.nrows();
    let mut a = sym.to_rows();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let k = match pivot {
            Some(k) => k,
            None => {
                // Zero diagonal: x_i <- x_i + x_j for some coupled pair.
                let pair = active.iter().find_map(|&i| {
                    active
                        .iter()
                        .find(|&&j| j != i && !a[i][j].is_zero())
                        .map(|&j| (i, j))
                });
                let Some((i, j)) = pair else {
                    break;
                };
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                i
            }
        };
        let _ = first;
        let d = a[k][k].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for &i in &active {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &d;
            for &j in &active {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        for &i in &active {
            if i != k {
                a[k][i] = Rational::zero();
                a[i][k] = Rational::zero();
            }
        }
        active.retain(|&i| i != k);
    }
    (pos, neg, n - pos - neg)
}

pub fn standard_space(sig: Signature) -> QuadraticSpace {
    let n = sig.dim();
    let gram = RatMatrix::from_fn(n, n, |i, j| {
        if i != j {
            int(0)
        } else if i < sig.p {
            int(1)
        } else {
            int(-1)
        }
    });
    QuadraticSpace {
        gram,
        signature: sig,
    }
}

/// Witt basis as the columns of an invertible matrix in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittBasis {
    m: usize,
    /// `g(e_a, e_a)` for each middle vector.
    e_signs: Vec<i64>,
    vectors: RatMatrix,
}

impl WittBasis {
    pub fn new(m: usize, e_signs: Vec<i64>, vectors: RatMatrix) -> Self {
        assert_eq!(vectors.ncols(), 2 * m + e_signs.len());
        Self {
            m,
            e_signs,
            vectors,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.e_signs.len()
    }

    pub fn e_signs(&self) -> &[i64] {
        &self.e_signs
    }

    pub fn vectors(&self) -> &RatMatrix {
        &self.vectors
    }

    pub fn p(&self, i: usize) -> Vec<Rational> {
        self.vectors.column(i)
    }

    pub fn e(&self, a: usize) -> Vec<Rational> {
        self.vectors.column(self.m + a)
    }

    pub fn q(&self, i: usize) -> Vec<Rational> {
        self.vectors.column(self.m + self.n() + i)
    }

    /// The Gram matrix every Witt basis with these parameters must produce.
    pub fn target_gram(m: usize, e_signs: &[i64]) -> RatMatrix {
        witt_gram(m, e_signs)
    }
}

/// Block Gram `[[0,0,I],[0,E,0],[I,0,0]]`.
pub fn witt_gram(m: usize, e_signs: &[i64]) -> RatMatrix {
    let n = e_signs.len();
    let dim = 2 * m + n;
    let mut entries = Vec::new();
    for i in 0..m {
        entries.push((i, m + n + i, int(1)));
        entries.push((m + n + i, i, int(1)));
    }
    for (a, &s) in e_signs.iter().enumerate() {
        entries.push((m + a, m + a, int(s)));
    }
    RatMatrix::from_triplets(dim, dim, entries)
}

/// `R^{m+r,m+s}` in Witt coordinates: the Gram matrix is the block form and
/// the Witt basis is the coordinate basis.
pub fn standard_witt(split: SplitSignature) -> (QuadraticSpace, WittBasis) {
    let signs = split.middle_signs();
    let gram = witt_gram(split.m, &signs);
    let dim = gram.nrows();
    let space = QuadraticSpace {
        gram,
        signature: split.ambient(),
    };
    (space, WittBasis::new(split.m, signs, RatMatrix::identity(dim)))
}

/// Checks every Witt-basis relation exactly.
pub fn verify_witt(basis: &WittBasis, space: &QuadraticSpace) -> bool {
    if basis.vectors.nrows() != space.dim() || basis.vectors.ncols() != space.dim() {
        return false;
    }
    if basis.e_signs.iter().any(|&s| s != 1 && s != -1) {
        return false;
    }
    space.restricted_gram(&basis.vectors) == witt_gram(basis.m, &basis.e_signs)
}

/// Parameters of the basis change `p'_i = p_i`,
/// `e'_a = e_a + Σ_i D_ia p_i`, `q'_i = q_i + X_i + Σ_j (B + C)_ji p_j`.
///
/// `x` is `n × m`; column `i` holds the components of `X_i` against the
/// `e`-basis. `B` and `D` are determined by `X`; when supplied explicitly
/// they must agree with `B_ij = −½ g(X_i, X_j)` and `D_ia = −g(X_i, e_a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RebaseData {
    pub x: RatMatrix,
    pub c: RatMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<RatMatrix>,
}

impl RebaseData {
    pub fn new(x: RatMatrix, c: RatMatrix) -> Self {
        Self {
            x,
            c,
            b: None,
            d: None,
        }
    }

    /// Parameters that turn `(id, 0, x_block, c_block)` into `(id, 0, 0, 0)`.
    pub fn cleaning(x_block: &RatMatrix, c_block: &RatMatrix) -> Self {
        Self::new(x_block.neg(), c_block.scale(&rat(-1, 2)))
    }

    /// `B_ij = −½ g(X_i, X_j)`.
    pub fn derived_b(&self, e_signs: &[i64]) -> RatMatrix {
        let m = self.x.ncols();
        RatMatrix::from_fn(m, m, |i, j| {
            let g = e_signs.iter().enumerate().fold(Rational::zero(), |acc, (a, &s)| {
                acc + int(s) * self.x.get(a, i) * self.x.get(a, j)
            });
            g * rat(-1, 2)
        })
    }

    /// `D_ia = −g(X_i, e_a)`, as an `m × n` matrix.
    pub fn derived_d(&self, e_signs: &[i64]) -> RatMatrix {
        RatMatrix::from_fn(self.x.ncols(), e_signs.len(), |i, a| {
            -(int(e_signs[a]) * self.x.get(a, i))
        })
    }
}

pub fn witt_rebase(basis: &WittBasis, data: &RebaseData) -> Result<WittBasis, QuadraticError> {
    let (m, n) = (basis.m, basis.n());
    if data.x.nrows() != n || data.x.ncols() != m {
        return Err(QuadraticError::Shape(format!(
            "X is {}x{}, expected {n}x{m}",
            data.x.nrows(),
            data.x.ncols()
        )));
    }
    if data.c.nrows() != m || data.c.ncols() != m {
        return Err(QuadraticError::Shape(format!("C must be {m}x{m}")));
    }
    if !data.c.add(&data.c.transpose()).is_zero() {
        return Err(QuadraticError::NotSkew);
    }
    let b = data.derived_b(&basis.e_signs);
    let d = data.derived_d(&basis.e_signs);
    if data.b.as_ref().is_some_and(|given| *given != b) {
        return Err(QuadraticError::WittEqualities("B ≠ −½ g(X_i, X_j)".into()));
    }
    if data.d.as_ref().is_some_and(|given| *given != d) {
        return Err(QuadraticError::WittEqualities("D ≠ −g(X_i, e_a)".into()));
    }
    let a = b.add(&data.c);
    let dim = 2 * m + n;
    let old = &basis.vectors;
    // Coefficients of the new basis in the old one, as columns.
    let coeffs = RatMatrix::from_fn(dim, dim, |row, col| {
        if col < m {
            return if row == col { int(1) } else { int(0) };
        }
        if col < m + n {
            let a_idx = col - m;
            return if row == col {
                int(1)
            } else if row < m {
                d.get(row, a_idx)
            } else {
                int(0)
            };
        }
        let i = col - m - n;
        if row == col {
            int(1)
        } else if row < m {
            a.get(row, i)
        } else if row < m + n {
            data.x.get(row - m, i)
        } else {
            int(0)
        }
    });
    Ok(WittBasis::new(m, basis.e_signs.clone(), old.mul(&coeffs)))
}

/// Matrix of an endomorphism in the `to` basis, given its matrix in the
/// `from` basis (both bases as ambient columns).
pub fn change_basis(matrix: &RatMatrix, from: &WittBasis, to: &WittBasis) -> RatMatrix {
    let p = from
        .vectors
        .inverse()
        .expect("Witt basis is invertible")
        .mul(&to.vectors);
    p.inverse().expect("Witt basis is invertible").mul(matrix).mul(&p)
}
