//! Invariant-subspace detection through idempotents of the commutant.
//!
//! A g-invariant non-degenerate subspace is the image of a self-adjoint
//! idempotent commuting with g, and such idempotents are polynomials in
//! self-adjoint elements of the commutant.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lie::{commutant_within, gl_basis, solve_within, MatrixLieAlgebra};
use crate::linalg::{int, minimal_polynomial, nullspace, Poly, RatMatrix, Rational, SubspaceBasis};

/// Outcome of an invariant-subspace decision. A witness is a list of
/// column vectors spanning an invariant subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No { witness: Option<Vec<Vec<Rational>>> },
    Inconclusive(String),
}

impl Decision {
    pub fn as_option(&self) -> Option<bool> {
        match self {
            Decision::Yes => Some(true),
            Decision::No { .. } => Some(false),
            Decision::Inconclusive(_) => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Yes => "true",
            Decision::No { .. } => "false",
            Decision::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn witness(&self) -> Option<&[Vec<Rational>]> {
        match self {
            Decision::No { witness: Some(w) } => Some(w),
            _ => None,
        }
    }
}

impl Serialize for Decision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Unital associative algebra generated by `gens` inside `gl(n)`.
pub fn associative_envelope(gens: &[RatMatrix], n: usize) -> Vec<RatMatrix> {
    let mut span = SubspaceBasis::span(n * n, &[RatMatrix::identity(n).flatten()]);
    let mut frontier = vec![RatMatrix::identity(n)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in gens {
                let p = a.mul(g);
                let v = p.flatten();
                if !span.contains_vector(&v) {
                    span = span.span_union(&SubspaceBasis::span(n * n, &[v])).expect("same ambient");
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    span.vectors().iter().map(|v| RatMatrix::unflatten(n, n, v)).collect()
}

/// Jacobson radical of a matrix algebra given by a basis:
/// `{x : tr(xy) = 0 for all y}` (valid in characteristic zero).
pub fn radical(algebra: &[RatMatrix]) -> Vec<RatMatrix> {
    solve_within(algebra, |x| algebra.iter().map(|y| x.mul(y).trace()).collect())
}

fn flat_span(mats: &[RatMatrix]) -> SubspaceBasis {
    let n = mats.first().map_or(0, RatMatrix::nrows);
    SubspaceBasis::span(n * n, &mats.iter().map(RatMatrix::flatten).collect::<Vec<_>>())
}

fn columns_span(mats: &[RatMatrix]) -> Vec<Vec<Rational>> {
    let n = mats.first().map_or(0, RatMatrix::nrows);
    let cols: Vec<Vec<Rational>> = mats.iter().flat_map(|m| (0..m.ncols()).map(|c| m.column(c))).collect();
    SubspaceBasis::span(n, &cols).vectors()
}

/// Candidate elements of a linear space of operators: the basis, pairwise
/// sums and a few seeded random combinations.
fn candidates(basis: &[RatMatrix]) -> Vec<RatMatrix> {
    let mut out: Vec<RatMatrix> = basis.to_vec();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            out.push(basis[i].add(&basis[j]));
        }
    }
    if basis.len() > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..4 {
            let n = basis[0].nrows();
            let m = basis
                .iter()
                .fold(RatMatrix::zeros(n, n), |acc, b| acc.add(&b.scale(&int(rng.gen_range(-4..=4)))));
            out.push(m);
        }
    }
    out
}

enum Split {
    /// Minimal polynomial splits over Q; the image of a projection.
    Rational(Vec<Vec<Rational>>),
    /// Splits over R only.
    Real,
    /// Squarefree part is linear.
    Scalar,
    /// Squarefree part is an irreducible real quadratic.
    Complex,
}

/// Decides whether `t` has a real spectral splitting, and builds a rational
/// spectral projection when one exists.
fn spectral_split(t: &RatMatrix) -> Split {
    let mu = minimal_polynomial(t);
    let p = mu.squarefree_part();
    if p.degree() <= 1 {
        return Split::Scalar;
    }
    if p.is_irreducible_real_quadratic() {
        return Split::Complex;
    }
    for r in p.rational_roots() {
        let k = mu.root_multiplicity(&r);
        let a = (0..k).fold(Poly::one(), |acc, _| acc.mul(&Poly::linear(r.clone())));
        let b = mu.div_rem(&a).0;
        if b.degree() == 0 {
            continue;
        }
        let (_, _, v) = a.ext_gcd(&b);
        let e = v.mul(&b).eval_matrix(t);
        let image = columns_span(&[e]);
        if !image.is_empty() && image.len() < t.nrows() {
            return Split::Rational(image);
        }
    }
    Split::Real
}

/// Searches the operator space `ops` (assumed to be an algebra containing
/// the identity, or its self-adjoint part) for a spectral splitting.
/// `quotient_dim` is the dimension of `ops` modulo the radical.
fn idempotent_search(ops: &[RatMatrix], quotient_dim: usize) -> Decision {
    if quotient_dim <= 1 {
        return Decision::Yes;
    }
    let mut real_split = false;
    let mut complex_seen = false;
    for t in candidates(ops) {
        match spectral_split(&t) {
            Split::Rational(w) => return Decision::No { witness: Some(w) },
            Split::Real => real_split = true,
            Split::Complex => complex_seen = true,
            Split::Scalar => {}
        }
    }
    if real_split {
        return Decision::No { witness: None };
    }
    if complex_seen && quotient_dim == 2 {
        // The quotient is R[t] ≅ C, a field: no idempotents besides 0 and 1.
        return Decision::Yes;
    }
    Decision::Inconclusive(format!(
        "commutant quotient of dimension {quotient_dim} has no detectable idempotent"
    ))
}

fn quotient_dim(space: &[RatMatrix], rad: &[RatMatrix]) -> usize {
    let all: Vec<RatMatrix> = space.iter().chain(rad).cloned().collect();
    flat_span(&all).dim() - flat_span(rad).dim()
}

/// Irreducibility of `gens ⊂ gl(n, R)` acting on `R^n`.
pub fn is_irreducible(gens: &[RatMatrix], n: usize) -> Decision {
    if n <= 1 {
        return Decision::Yes;
    }
    let env = associative_envelope(gens, n);
    let rad = radical(&env);
    if !rad.is_empty() {
        return Decision::No {
            witness: Some(columns_span(&rad)),
        };
    }
    let comm = commutant_within(&gl_basis(n), gens);
    let comm_rad = radical(&comm);
    idempotent_search(&comm, quotient_dim(&comm, &comm_rad))
}

/// `T* = G⁻¹ Tᵗ G`.
fn adjoint(t: &RatMatrix, gram: &RatMatrix, gram_inv: &RatMatrix) -> RatMatrix {
    gram_inv.mul(&t.transpose()).mul(gram)
}

/// Weak irreducibility of `gens ⊂ so(G)`: no proper non-degenerate
/// invariant subspace. A witness, when given, is non-degenerate.
pub fn weak_irreducibility(gens: &[RatMatrix], gram: &RatMatrix) -> Decision {
    let n = gram.nrows();
    if n <= 1 {
        return Decision::Yes;
    }
    let gram_inv = gram.inverse().expect("non-degenerate Gram");
    let comm = commutant_within(&gl_basis(n), gens);
    let rad = radical(&comm);
    let selfadj = solve_within(&comm, |t| adjoint(t, gram, &gram_inv).sub(t).flatten());
    idempotent_search(&selfadj, quotient_dim(&selfadj, &rad))
}

pub fn is_weakly_irreducible(g: &MatrixLieAlgebra) -> Decision {
    let gram = match g.metric() {
        Some(m) => m.gram().clone(),
        None => return Decision::Inconclusive("algebra carries no metric".into()),
    };
    weak_irreducibility(g.basis(), &gram)
}

/// `G`-orthogonal complement of the span of `cols`.
pub fn orthogonal_complement(cols: &[Vec<Rational>], gram: &RatMatrix) -> Vec<Vec<Rational>> {
    let n = gram.nrows();
    if cols.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(1) } else { Rational::zero() }).collect())
            .collect();
    }
    let rows = RatMatrix::from_fn(cols.len(), n, |r, c| {
        (0..n).fold(Rational::zero(), |acc, k| acc + &cols[r][k] * gram.get(k, c))
    });
    nullspace(&rows).vectors()
}
