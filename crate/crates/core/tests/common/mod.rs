#![allow(dead_code)]

use bergerkit::lie::{DecoratedElement, DecoratedFrame};
use bergerkit::linalg::{rat, RatMatrix, Rational};
use num_traits::Zero;
use rand::Rng;

/// Rank by plain dense Gaussian elimination over the rationals. Written
/// independently of the library's sparse elimination.
pub fn naive_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        let prow: Vec<Rational> = rows[rank].iter().map(|x| x / &pivot).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        rows[rank] = prow;
        rank += 1;
    }
    rank
}

/// Dimension of algebraic curvature tensors of Euclidean `R^n` from the
/// component equations `R_abcd = −R_bacd = −R_abdc`,
/// `R_abcd + R_bcad + R_cabd = 0` in all `n⁴` unknowns.
pub fn naive_curvature_dim(n: usize) -> usize {
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let unknowns = n.pow(4);
    let mut rows = Vec::new();
    let unit = |entries: &[(usize, i64)]| {
        let mut r = vec![Rational::zero(); unknowns];
        for &(i, v) in entries {
            r[i] += rat(v, 1);
        }
        r
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    rows.push(unit(&[(idx(a, b, c, d), 1), (idx(b, a, c, d), 1)]));
                    rows.push(unit(&[(idx(a, b, c, d), 1), (idx(a, b, d, c), 1)]));
                    rows.push(unit(&[(idx(a, b, c, d), 1), (idx(b, c, a, d), 1), (idx(c, a, b, d), 1)]));
                }
            }
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    unknowns - naive_rank(rows)
}

pub fn rand_rat(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn rand_matrix(rng: &mut impl Rng, r: usize, c: usize) -> RatMatrix {
    RatMatrix::from_fn(r, c, |_, _| rand_rat(rng))
}

pub fn rand_skew(rng: &mut impl Rng, n: usize) -> RatMatrix {
    let m = rand_matrix(rng, n, n);
    m.sub(&m.transpose())
}

pub fn signs(r: usize, s: usize) -> Vec<i64> {
    let mut v = vec![-1; r];
    v.resize(r + s, 1);
    v
}

/// Random `(B, A, X, C)` for the frame: `A = E S` with `S` skew lies in
/// `so(E)` because `E² = 1`.
pub fn rand_decorated(rng: &mut impl Rng, frame: &DecoratedFrame) -> DecoratedElement {
    let (m, n) = (frame.m, frame.n());
    DecoratedElement {
        b: rand_matrix(rng, m, m),
        a: frame.e().mul(&rand_skew(rng, n)),
        x: rand_matrix(rng, n, m),
        c: rand_skew(rng, m),
    }
}

/// Splits with `1 ≤ m ≤ 3`, `r + s ≤ 3`.
pub fn small_splits() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for r in 0..=3 {
            for s in 0..=3 - r {
                out.push((m, r, s));
            }
        }
    }
    out
}
