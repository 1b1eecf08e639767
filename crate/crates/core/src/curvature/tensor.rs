use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::CurvatureError;
use crate::lie::MatrixLieAlgebra;
use crate::linalg::{RatMatrix, Rational};

/// Index of the pair `a < b` among all pairs of `0..n`, lexicographic.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// `R(e_a, e_b)` for `a < b`, each stored as coordinates against the basis
/// of the algebra. Entry `pair_index(a, b) * dim g + k` is the `k`-th
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureTensor {
    n: usize,
    dim_g: usize,
    #[serde(with = "coeff_strings")]
    coeffs: Vec<Rational>,
}

mod coeff_strings {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl CurvatureTensor {
    pub fn zero(n: usize, dim_g: usize) -> Self {
        Self {
            n,
            dim_g,
            coeffs: vec![Rational::zero(); n * n.saturating_sub(1) / 2 * dim_g],
        }
    }

    pub fn from_coeffs(n: usize, dim_g: usize, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), n * n.saturating_sub(1) / 2 * dim_g);
        Self { n, dim_g, coeffs }
    }

    /// Tensor with `R(e_a, e_b) = f(a, b)` for `a < b`; every value must lie in `g`.
    pub fn from_fn(
        g: &MatrixLieAlgebra,
        mut f: impl FnMut(usize, usize) -> RatMatrix,
    ) -> Result<Self, CurvatureError> {
        let n = g.ambient_dim();
        let mut coeffs = Vec::new();
        for (a, b) in pairs(n) {
            let c = g
                .coordinates(&f(a, b))
                .ok_or(CurvatureError::NotInAlgebra { a, b })?;
            coeffs.extend(c);
        }
        Ok(Self::from_coeffs(n, g.dim(), coeffs))
    }

    /// `R(X,Y)Z = g(Y,Z)X − g(X,Z)Y`.
    pub fn constant_curvature(g: &MatrixLieAlgebra) -> Result<Self, CurvatureError> {
        let gram = g.metric().ok_or(CurvatureError::NoMetric)?.gram().clone();
        let n = g.ambient_dim();
        Self::from_fn(g, |a, b| {
            RatMatrix::from_fn(n, n, |d, c| {
                let mut v = Rational::zero();
                if d == a {
                    v += gram.get(b, c);
                }
                if d == b {
                    v -= gram.get(a, c);
                }
                v
            })
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coordinates of `R(e_a, e_b)` against the algebra basis, any `a, b`.
    pub fn component(&self, a: usize, b: usize) -> Vec<Rational> {
        if a == b {
            return vec![Rational::zero(); self.dim_g];
        }
        let (lo, hi, sign) = if a < b { (a, b, false) } else { (b, a, true) };
        let start = pair_index(self.n, lo, hi) * self.dim_g;
        let slice = &self.coeffs[start..start + self.dim_g];
        if sign {
            slice.iter().map(|x| -x.clone()).collect()
        } else {
            slice.to_vec()
        }
    }

    /// `R(e_a, e_b)` as an endomorphism.
    pub fn value(&self, g: &MatrixLieAlgebra, a: usize, b: usize) -> RatMatrix {
        g.combine(&self.component(a, b))
    }

    pub fn values(&self, g: &MatrixLieAlgebra) -> Vec<RatMatrix> {
        pairs(self.n).into_iter().map(|(a, b)| self.value(g, a, b)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect();
        Self { coeffs, ..self.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self { coeffs, ..self.clone() }
    }

    /// `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0` for all basis triples.
    pub fn satisfies_bianchi(&self, g: &MatrixLieAlgebra) -> bool {
        let vals: Vec<Vec<RatMatrix>> = (0..self.n)
            .map(|a| (0..self.n).map(|b| self.value(g, a, b)).collect())
            .collect();
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    for d in 0..self.n {
                        let s = vals[a][b].get(d, c) + vals[b][c].get(d, a) + vals[c][a].get(d, b);
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `Ric(X, Y) = tr(Z ↦ R(Z, X)Y)`.
pub fn ricci(g: &MatrixLieAlgebra, r: &CurvatureTensor) -> RatMatrix {
    let n = g.ambient_dim();
    let vals: Vec<Vec<RatMatrix>> = (0..n)
        .map(|z| (0..n).map(|x| r.value(g, z, x)).collect())
        .collect();
    RatMatrix::from_fn(n, n, |x, y| {
        (0..n).fold(Rational::zero(), |acc, z| acc + vals[z][x].get(z, y))
    })
}
