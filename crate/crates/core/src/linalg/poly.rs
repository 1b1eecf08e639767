//! Univariate polynomials over Q, just enough for minimal polynomials and
//! idempotents built from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::RatMatrix;
use super::rational::Rational;
use super::subspace::nullspace;

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `x − r`
    pub fn linear(r: Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_default() + other.0.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dl = d.lead();
        let dd = d.degree();
        if self.0.len() < d.0.len() {
            return (Self(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); self.0.len() - d.0.len() + 1];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, u, v)` with `u·self + v·other = g = gcd`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self(Vec::new()));
        let (mut t0, mut t1) = (Self(Vec::new()), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = r0.lead();
        let inv = Rational::one() / l;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_matrix(&self, m: &RatMatrix) -> RatMatrix {
        let n = m.nrows();
        self.0
            .iter()
            .rev()
            .fold(RatMatrix::zeros(n, n), |acc, c| acc.mul(m).add(&RatMatrix::identity(n).scale(c)))
    }

    /// Rational roots, each once. Gives up (returns what it has) on
    /// coefficients too large to factor by trial division.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            roots.push(Rational::zero());
        }
        let (Some(a0), Some(an)) = (divisors(&ints[low]), divisors(ints.last().unwrap())) else {
            return roots;
        };
        for p in &a0 {
            for q in &an {
                for sign in [1i64, -1] {
                    let r = Rational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                    if !roots.contains(&r) && self.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Rational) -> usize {
        let lin = Self::linear(r.clone());
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.degree() > 0 {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    /// `true` iff the polynomial has no real root (degree ≥ 1 assumed) and
    /// is a quadratic; used to spot `R[x]/(p) ≅ C`.
    pub fn is_irreducible_real_quadratic(&self) -> bool {
        if self.degree() != 2 {
            return false;
        }
        let (c, b, a) = (&self.0[0], &self.0[1], &self.0[2]);
        (b * b - Rational::from_integer(4.into()) * a * c).is_negative()
    }
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n > 1 << 40 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

/// Monic minimal polynomial of a square matrix, by Krylov dependence of
/// `I, M, M², …`.
pub fn minimal_polynomial(m: &RatMatrix) -> Poly {
    let n = m.nrows();
    let mut powers = vec![RatMatrix::identity(n).flatten()];
    let mut cur = RatMatrix::identity(n);
    for k in 1..=n {
        cur = cur.mul(m);
        powers.push(cur.flatten());
        let cols = RatMatrix::from_fn(n * n, k + 1, |r, c| powers[c][r].clone());
        let ker = nullspace(&cols);
        if let Some(v) = ker.vectors().first() {
            return Poly::new(v.clone()).monic();
        }
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    #[test]
    fn minimal_polynomials() {
        assert_eq!(minimal_polynomial(&RatMatrix::identity(3)), Poly::linear(int(1)));
        let j = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert_eq!(minimal_polynomial(&j), Poly::new(vec![int(1), int(0), int(1)]));
        let nil = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(minimal_polynomial(&nil), Poly::new(vec![int(0), int(0), int(1)]));
    }

    #[test]
    fn gcd_and_roots() {
        let p = Poly::linear(rat(1, 2)).mul(&Poly::linear(int(-3))).mul(&Poly::linear(int(-3)));
        assert_eq!(p.rational_roots(), vec![int(-3), rat(1, 2)]);
        assert_eq!(p.root_multiplicity(&int(-3)), 2);
        assert_eq!(p.squarefree_part(), Poly::linear(rat(1, 2)).mul(&Poly::linear(int(-3))));
        let a = Poly::linear(int(1));
        let b = Poly::linear(int(2));
        let (g, u, v) = a.ext_gcd(&b);
        assert_eq!(g, Poly::one());
        assert_eq!(u.mul(&a).add(&v.mul(&b)), Poly::one());
        assert!(Poly::new(vec![int(1), int(0), int(1)]).is_irreducible_real_quadratic());
    }
}
