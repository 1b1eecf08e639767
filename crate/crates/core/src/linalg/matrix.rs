use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use super::LinalgError;

/// Matrices whose fill ratio is at or below this value are stored sparsely.
pub const SPARSE_FILL_RATIO: f64 = 0.25;

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<Rational>),
    /// Per row, nonzero entries sorted by column.
    Sparse(Vec<Vec<(usize, Rational)>>),
}

/// Rational matrix with dense or sparse storage picked from the fill ratio.
///
/// Equality and all accessors are storage-agnostic.
#[derive(Clone)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            storage: Storage::Sparse(vec![Vec::new(); rows]),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, Rational::from_integer(1.into()))))
    }

    /// Builds from row-major nested vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(LinalgError::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        Ok(Self::from_sparse_rows(
            ncols,
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .enumerate()
                        .filter(|(_, q)| !q.is_zero())
                        .collect()
                })
                .collect(),
        ))
    }

    /// Convenience constructor from integer rows.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            let mut row = Vec::new();
            for j in 0..cols {
                let q = f(i, j);
                if !q.is_zero() {
                    row.push((j, q));
                }
            }
            out.push(row);
        }
        Self::from_sparse_rows(cols, out)
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut out: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (i, j, q) in entries {
            assert!(i < rows && j < cols, "triplet ({i},{j}) outside {rows}x{cols}");
            out[i].push((j, q));
        }
        for row in &mut out {
            row.sort_by_key(|(j, _)| *j);
            let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(row.len());
            for (j, q) in row.drain(..) {
                match merged.last_mut() {
                    Some((lj, lq)) if *lj == j => *lq += q,
                    _ => merged.push((j, q)),
                }
            }
            merged.retain(|(_, q)| !q.is_zero());
            *row = merged;
        }
        Self::from_sparse_rows(cols, out)
    }

    /// Takes rows of sorted, nonzero `(col, value)` entries.
    pub(crate) fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, Rational)>>) -> Self {
        let mut m = Self {
            rows: rows.len(),
            cols,
            storage: Storage::Sparse(rows),
        };
        m.rebalance();
        m
    }

    /// Stacks column vectors side by side.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    fn rebalance(&mut self) {
        let sparse = self.fill_ratio() <= SPARSE_FILL_RATIO;
        match (&self.storage, sparse) {
            (Storage::Dense(_), true) => {
                let rows = (0..self.rows).map(|i| self.row_entries(i)).collect();
                self.storage = Storage::Sparse(rows);
            }
            (Storage::Sparse(rows), false) => {
                let mut data = vec![Rational::zero(); self.rows * self.cols];
                for (i, row) in rows.iter().enumerate() {
                    for (j, q) in row {
                        data[i * self.cols + j] = q.clone();
                    }
                }
                self.storage = Storage::Dense(data);
            }
            _ => {}
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|q| !q.is_zero()).count(),
            Storage::Sparse(rows) => rows.iter().map(Vec::len).sum(),
        }
    }

    pub fn fill_ratio(&self) -> f64 {
        let total = self.rows * self.cols;
        if total == 0 {
            0.0
        } else {
            self.nnz() as f64 / total as f64
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.rows && j < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j].clone(),
            Storage::Sparse(rows) => rows[i]
                .binary_search_by_key(&j, |(c, _)| *c)
                .map(|k| rows[i][k].1.clone())
                .unwrap_or_else(|_| Rational::zero()),
        }
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row_entries(&self, i: usize) -> Vec<(usize, Rational)> {
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols..(i + 1) * self.cols]
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(j, q)| (j, q.clone()))
                .collect(),
            Storage::Sparse(rows) => rows[i].clone(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.cols];
        for (j, q) in self.row_entries(i) {
            out[j] = q;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Row-major flattening, the coordinate vector used when matrices are
    /// treated as points of `gl(N)`.
    pub fn flatten(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rows * self.cols];
        for i in 0..self.rows {
            for (j, q) in self.row_entries(i) {
                out[i * self.cols + j] = q;
            }
        }
        out
    }

    pub fn unflatten(rows: usize, cols: usize, data: &[Rational]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| data[i * cols + j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for (j, q) in self.row_entries(i) {
                entries.push((j, i, q));
            }
        }
        Self::from_triplets(self.cols, self.rows, entries)
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let rhs_rows: Vec<Vec<(usize, Rational)>> =
            (0..rhs.rows).map(|k| rhs.row_entries(k)).collect();
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = vec![Rational::zero(); rhs.cols];
            for (k, a) in self.row_entries(i) {
                for (j, b) in &rhs_rows[k] {
                    acc[*j] += &a * b;
                }
            }
            out.push(
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .collect(),
            );
        }
        Self::from_sparse_rows(rhs.cols, out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row_entries(i)
                    .iter()
                    .fold(Rational::zero(), |acc, (j, q)| acc + q * &v[*j])
            })
            .collect()
    }

    fn zip_with(&self, rhs: &RatMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| f(&self.get(i, j), &rhs.get(i, j)))
    }

    pub fn add(&self, rhs: &RatMatrix) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Extracts the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(parts: &[&RatMatrix]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut rows = Vec::new();
        for m in parts {
            assert_eq!(m.cols, cols);
            rows.extend((0..m.rows).map(|i| m.row_entries(i)));
        }
        Self::from_sparse_rows(cols, rows)
    }

    /// Kronecker product; index `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &RatMatrix) -> Self {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for i in 0..self.rows {
            for (j, a) in self.row_entries(i) {
                for k in 0..other.rows {
                    for (l, b) in other.row_entries(k) {
                        entries.push((i * other.rows + k, j * other.cols + l, &a * &b));
                    }
                }
            }
        }
        Self::from_triplets(self.rows * other.rows, self.cols * other.cols, entries)
    }

    pub fn block_diag(parts: &[&RatMatrix]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out = out.with_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Copy of `self` with `block` written at `(r0, c0)`.
    pub fn with_block(&self, r0: usize, c0: usize, block: &RatMatrix) -> Self {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let mut entries = Vec::with_capacity(self.nnz() + block.nnz());
        for i in 0..self.rows {
            for (j, q) in self.row_entries(i) {
                let inside = (r0..r0 + block.rows).contains(&i) && (c0..c0 + block.cols).contains(&j);
                if !inside {
                    entries.push((i, j, q));
                }
            }
        }
        for i in 0..block.rows {
            for (j, q) in block.row_entries(i) {
                entries.push((r0 + i, c0 + j, q));
            }
        }
        Self::from_triplets(self.rows, self.cols, entries)
    }

    pub fn commutator(&self, other: &RatMatrix) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// Inverse by Gauss-Jordan, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = super::elim::rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::from_integer(1.into());
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            super::rational::to_f64(&self.get(i, j))
        })
    }
}

impl PartialEq for RatMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|i| self.row_entries(i) == other.row_entries(i))
    }
}

impl Eq for RatMatrix {}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        RatMatrix::from_rows(parsed).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    #[test]
    fn storage_follows_fill_ratio() {
        let sparse = RatMatrix::identity(8);
        assert!(sparse.is_sparse());
        let dense = RatMatrix::from_fn(3, 3, |i, j| int((i + j + 1) as i64));
        assert!(!dense.is_sparse());
        // Same entries, different storage, still equal.
        let dense_id = RatMatrix::from_fn(2, 2, |i, j| if i == j { int(1) } else { int(0) });
        assert_eq!(dense_id, RatMatrix::identity(2));
    }

    #[test]
    fn products_and_inverse() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert_eq!(a.determinant(), int(-2));
        assert_eq!(inv.get(0, 0), int(-2));
        assert_eq!(inv.get(1, 0), rat(3, 2));
        assert!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn json_uses_fraction_strings() {
        let m = RatMatrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(-3), rat(5, 7)]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"[["1/2","0"],["-3","5/7"]]"#);
        let back: RatMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn triplets_merge_duplicates() {
        let m = RatMatrix::from_triplets(2, 2, vec![(0, 1, int(2)), (0, 1, int(-2)), (1, 0, int(5))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), int(5));
    }
}
