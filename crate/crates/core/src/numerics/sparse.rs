//! Compressed sparse row operators assembled from coordinate lists.

use super::matrix::Matrix;
use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<T> {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseOperator<T> {
    /// Assemble from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_of = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of bounds");
            if last == Some((r, c)) {
                let cur = values.pop().unwrap();
                values.push(cur + v);
            } else {
                col_idx.push(c);
                values.push(v);
                row_of.push(r);
                last = Some((r, c));
            }
        }
        let keep: Vec<bool> = values.iter().map(|v| !v.is_zero()).collect();
        let mut ci = Vec::with_capacity(col_idx.len());
        let mut vs = Vec::with_capacity(values.len());
        for (k, v) in values.into_iter().enumerate() {
            if keep[k] {
                ci.push(col_idx[k]);
                vs.push(v);
                row_ptr[row_of[k] + 1] += 1;
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx: ci,
            values: vs,
        }
    }

    pub fn from_dense(m: &Matrix<T>) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    t.push((i, j, m[(i, j)].clone()));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros of row `i` as `(column, value)` pairs.
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, &T)> {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(&self.values[span])
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row_entries(i)
                    .filter(|(c, _)| !v[*c].is_zero())
                    .fold(T::zero(), |acc, (c, a)| acc + a.clone() * v[c].clone())
            })
            .collect()
    }

    /// `A^T v` for a sparse `v`; call on the transpose to apply `A`.
    pub fn transpose_apply_sparse(&self, v: &[(usize, T)]) -> std::collections::BTreeMap<usize, T> {
        let mut out = std::collections::BTreeMap::new();
        for (i, x) in v {
            for (c, a) in self.row_entries(*i) {
                let e = out.entry(c).or_insert_with(T::zero);
                *e = std::mem::replace(e, T::zero()) + a.clone() * x.clone();
            }
        }
        out.retain(|_, x: &mut T| !x.is_zero());
        out
    }

    pub fn apply_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        assert_eq!(m.rows(), self.cols);
        let mut out = Matrix::zeros(self.rows, m.cols());
        for i in 0..self.rows {
            for (c, a) in self.row_entries(i) {
                for j in 0..m.cols() {
                    let b = &m[(c, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (c, a) in self.row_entries(i) {
                out[(i, c)] = a.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for (c, a) in self.row_entries(i) {
                t.push((c, i, a.clone()));
            }
        }
        Self::from_triplets(self.cols, self.rows, t)
    }

    /// Sparse product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut t = Vec::new();
        for i in 0..self.rows {
            for (k, a) in self.row_entries(i) {
                for (j, b) in other.row_entries(k) {
                    t.push((i, j, a.clone() * b.clone()));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, t)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut t = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.rows {
            for (c, a) in self.row_entries(i) {
                t.push((i, c, a.clone()));
            }
            for (c, a) in other.row_entries(i) {
                t.push((i, c, -a.clone()));
            }
        }
        Self::from_triplets(self.rows, self.cols, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{int, Rational};

    #[test]
    fn duplicates_sum_and_zeros_drop() {
        let op = SparseOperator::from_triplets(
            2,
            2,
            vec![(0, 1, int(2)), (0, 1, int(-2)), (1, 0, int(3)), (1, 0, int(1))],
        );
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.to_dense()[(1, 0)], int(4));
    }

    #[test]
    fn compose_matches_dense_product() {
        let a = Matrix::<Rational>::from_rows(vec![
            vec![int(1), int(0), int(2)],
            vec![int(0), int(-1), int(0)],
        ]);
        let b = Matrix::<Rational>::from_rows(vec![
            vec![int(0), int(1)],
            vec![int(3), int(0)],
            vec![int(1), int(1)],
        ]);
        let sa = SparseOperator::from_dense(&a);
        let sb = SparseOperator::from_dense(&b);
        assert_eq!(sa.compose(&sb).to_dense(), &a * &b);
        assert_eq!(sa.apply_matrix(&b), &a * &b);
    }
}
