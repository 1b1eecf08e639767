//! Fraction-free Gauss-Jordan elimination on sparse integer rows.
//!
//! Each rational row is scaled to a primitive integer row. Elimination uses
//! integer cross-multiplication followed by division by the row content, so
//! entries stay bounded by the size of the minors involved. The final reduced
//! row-echelon form is unique, which makes every result independent of pivot
//! order and of the parallel schedule.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::matrix::RatMatrix;
use super::rational::Rational;

type IntRow = Vec<(usize, BigInt)>;

/// Rows above this count are updated in parallel at each pivot step.
const PARALLEL_ROWS: usize = 64;

fn to_int_row(entries: Vec<(usize, Rational)>) -> IntRow {
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let mut row: IntRow = entries
        .into_iter()
        .map(|(j, q)| (j, q.numer() * (&lcm / q.denom())))
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let g = row
        .iter()
        .fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|k| &row[k].1)
}

/// `a * x - b * y`, merged over sorted columns, zeros dropped.
fn combine(x: &IntRow, a: &BigInt, y: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn eliminate(row: &mut IntRow, pivot_row: &IntRow, col: usize, pivot: &BigInt) {
    let Some(a) = entry(row, col).cloned() else {
        return;
    };
    let g = pivot.gcd(&a);
    let mut next = combine(row, &(pivot / &g), pivot_row, &(&a / &g));
    make_primitive(&mut next);
    *row = next;
}

/// Integer reduced row-echelon rows plus pivot columns.
fn reduce(m: &RatMatrix) -> (Vec<IntRow>, Vec<usize>) {
    let mut rows: Vec<IntRow> = (0..m.nrows())
        .map(|i| to_int_row(m.row_entries(i)))
        .filter(|r| !r.is_empty())
        .collect();
    let mut pivots = Vec::new();
    let mut done = 0;
    for col in 0..m.ncols() {
        if done == rows.len() {
            break;
        }
        // Sparsest candidate, then smallest pivot, then lowest index.
        let candidate = (done..rows.len())
            .filter_map(|r| entry(&rows[r], col).map(|p| (rows[r].len(), p.abs(), r)))
            .min();
        let Some((_, _, r)) = candidate else {
            continue;
        };
        rows.swap(done, r);
        let (head, tail) = rows.split_at_mut(done + 1);
        let (above, pivot_slot) = head.split_at_mut(done);
        let pivot_row = &pivot_slot[0];
        let pivot = entry(pivot_row, col).unwrap().clone();
        if tail.len() + above.len() > PARALLEL_ROWS {
            tail.par_iter_mut()
                .for_each(|row| eliminate(row, pivot_row, col, &pivot));
            above
                .par_iter_mut()
                .for_each(|row| eliminate(row, pivot_row, col, &pivot));
        } else {
            for row in tail.iter_mut().chain(above.iter_mut()) {
                eliminate(row, pivot_row, col, &pivot);
            }
        }
        rows.retain(|r| !r.is_empty());
        pivots.push(col);
        done += 1;
    }
    rows.truncate(done);
    (rows, pivots)
}

/// Reduced row-echelon form and pivot columns. Zero rows are kept at the
/// bottom so the output has the input's shape.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let (rows, pivots) = reduce(m);
    let mut out: Vec<Vec<(usize, Rational)>> = rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let lead = entry(&row, p).unwrap().clone();
            row.into_iter()
                .map(|(j, x)| (j, BigRational::new(x, lead.clone())))
                .collect()
        })
        .collect();
    out.resize(m.nrows(), Vec::new());
    (RatMatrix::from_sparse_rows(m.ncols(), out), pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    reduce(m).1.len()
}

/// Nonzero rows of the reduced form only.
pub(crate) fn rref_rows(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let (r, pivots) = rref(m);
    let k = pivots.len();
    (r.block(0, 0, k, m.ncols()), pivots)
}

/// Kernel vectors read off the reduced form, one per free column.
pub(crate) fn kernel_vectors(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.ncols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let rows: Vec<Vec<(usize, Rational)>> = (0..pivots.len()).map(|i| r.row_entries(i)).collect();
    (0..m.ncols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); m.ncols()];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                if let Ok(k) = rows[i].binary_search_by_key(&f, |(c, _)| *c) {
                    v[p] = -rows[i][k].1.clone();
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&RatMatrix::identity(3));
        assert_eq!(r, RatMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = rref(&RatMatrix::zeros(2, 3));
        assert!(r.is_zero());
        assert!(p.is_empty());

        let (r, p) = rref(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, RatMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_with_fractions() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3), int(1)],
            vec![int(2), rat(-1, 5), int(0)],
        ])
        .unwrap();
        let (r, p) = rref(&m);
        assert_eq!(p, vec![0, 1]);
        // Row space preserved: each original row is a combination of the rref rows.
        for i in 0..2 {
            let row = m.row(i);
            let recon: Vec<Rational> = (0..3)
                .map(|j| &row[0] * r.get(0, j) + &row[1] * r.get(1, j))
                .collect();
            assert_eq!(recon, row);
        }
    }

    #[test]
    fn kernel_of_single_equation() {
        let k = kernel_vectors(&RatMatrix::from_i64(&[&[1, 1, 0]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(&v[0] + &v[1], int(0));
        }
    }
}
