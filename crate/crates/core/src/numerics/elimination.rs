//! Exact elimination over the rationals.
//!
//! Dense matrices go through a fraction-free (Bareiss) echelon pass over the
//! integers; large sparse systems use integer Gauss-Jordan with content
//! removal, which keeps entries small for the structured operators built by
//! the representation layer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RationalMatrix;
use super::scalar::Rational;
use crate::error::{Error, Result};

/// Row echelon form with integer entries, as produced by Bareiss elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free row echelon form. Every division performed is exact.
pub fn fraction_free_echelon(m: &RationalMatrix) -> Echelon {
    let (nr, nc) = m.shape();
    let mut a = integer_rows(m);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..nc {
                let v = &pv * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r.max(pivots.len()));
    Echelon {
        rows: a,
        pivots,
        cols: nc,
    }
}

/// Reduced row echelon form (nonzero rows only) and pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let ech = fraction_free_echelon(m);
    let rank = ech.rank();
    let nc = ech.cols;
    let mut rows: Vec<Vec<Rational>> = ech.rows[..rank]
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    for k in (0..rank).rev() {
        let pc = ech.pivots[k];
        let inv = Rational::one() / rows[k][pc].clone();
        for x in rows[k].iter_mut() {
            *x = &*x * &inv;
        }
        let (above, cur) = rows.split_at_mut(k);
        let pivot_row = &cur[0];
        for row in above.iter_mut() {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in pc..nc {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &f * &pivot_row[j];
                }
            }
        }
    }
    let flat = rows.into_iter().flatten().collect();
    (RationalMatrix::from_vec(rank, nc, flat), ech.pivots)
}

pub fn rank(m: &RationalMatrix) -> usize {
    fraction_free_echelon(m).rank()
}

/// Basis of the right kernel as columns; each column has a single unit entry
/// among the free coordinates.
pub fn nullspace_exact(m: &RationalMatrix) -> RationalMatrix {
    let nc = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
    let mut out = RationalMatrix::zeros(nc, free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            out[(pc, k)] = -r[(i, f)].clone();
        }
    }
    out
}

/// Inverse of a square rational matrix.
pub fn inverse_exact(m: &RationalMatrix) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "inverse of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let aug = m.hstack(&RationalMatrix::identity(n));
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Domain("matrix is singular".into()));
    }
    Ok(RationalMatrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Solve `a * x = b` for square nonsingular `a`.
pub fn solve_exact(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    Ok(&inverse_exact(a)? * b)
}

type IntRow = Vec<(usize, BigInt)>;

fn primitive(mut row: IntRow) -> IntRow {
    let g = row
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|k| &row[k].1)
}

/// `alpha * a - beta * b`, dropping zeros.
fn combine(alpha: &BigInt, a: &IntRow, beta: &BigInt, b: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ca == cb {
            let v = alpha * &a[i].1 - beta * &b[j].1;
            i += 1;
            j += 1;
            (ca, v)
        } else if ca < cb {
            i += 1;
            (ca, alpha * &a[i - 1].1)
        } else {
            j += 1;
            (cb, -(beta * &b[j - 1].1))
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Kernel of a sparse rational matrix given as rows of `(column, value)`.
#[derive(Clone, Debug)]
pub struct SparseKernel {
    pub cols: usize,
    pub rank: usize,
    /// Free columns, one per kernel vector, in increasing order.
    pub free: Vec<usize>,
    /// Kernel basis; vector `k` has value 1 at `free[k]` and 0 at the other free columns.
    pub basis: Vec<Vec<(usize, Rational)>>,
}

/// Exact kernel via integer Gauss-Jordan with content removal.
pub fn sparse_nullspace(cols: usize, rows: &[Vec<(usize, Rational)>]) -> SparseKernel {
    // pivot column -> fully reduced pivot row
    let mut pivots: BTreeMap<usize, IntRow> = BTreeMap::new();
    for raw in rows {
        let lcm = raw
            .iter()
            .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
        let mut row: IntRow = raw
            .iter()
            .filter(|(_, q)| !q.is_zero())
            .map(|(c, q)| (*c, q.numer() * (&lcm / q.denom())))
            .collect();
        row.sort_by_key(|e| e.0);
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, v)) = hit else { break };
            let p = &pivots[&c];
            let pv = entry(p, c).unwrap().clone();
            row = primitive(combine(&pv, &row, &v, p));
        }
        if row.is_empty() {
            continue;
        }
        // shortest-magnitude pivot keeps entries small
        let (pc, pv) = row
            .iter()
            .min_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.cmp(&b.0)))
            .map(|(c, v)| (*c, v.clone()))
            .unwrap();
        for other in pivots.values_mut() {
            if let Some(v) = entry(other, pc).cloned() {
                *other = primitive(combine(&pv, other, &v, &row));
            }
        }
        pivots.insert(pc, row);
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains_key(c)).collect();
    let free_pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut basis: Vec<Vec<(usize, Rational)>> =
        free.iter().map(|&f| vec![(f, Rational::one())]).collect();
    for (&pc, row) in &pivots {
        let pv = entry(row, pc).unwrap();
        for (c, v) in row {
            if *c == pc {
                continue;
            }
            let k = free_pos[c];
            basis[k].push((pc, -Rational::new(v.clone(), pv.clone())));
        }
    }
    for b in basis.iter_mut() {
        b.sort_by_key(|e| e.0);
    }
    SparseKernel {
        cols,
        rank: pivots.len(),
        free,
        basis,
    }
}

/// Dense view of a sparse kernel basis (columns are kernel vectors).
pub fn sparse_kernel_to_dense(k: &SparseKernel) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(k.cols, k.basis.len());
    for (j, v) in k.basis.iter().enumerate() {
        for (i, x) in v {
            out[(*i, j)] = x.clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{int, rat, Scalar};

    #[test]
    fn identity_has_empty_kernel() {
        let k = nullspace_exact(&RationalMatrix::identity(4));
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let k = nullspace_exact(&RationalMatrix::zeros(3, 3));
        assert_eq!(k.cols(), 3);
        assert_eq!(k, RationalMatrix::identity(3));
    }

    #[test]
    fn rank_two_product_has_two_dimensional_kernel() {
        // M = A * B with A 4x2 and B 2x4 of full rank 2
        let a = RationalMatrix::from_rows(vec![
            vec![int(1), int(2)],
            vec![int(0), int(1)],
            vec![rat(3, 2), int(-1)],
            vec![int(2), int(5)],
        ]);
        let b = RationalMatrix::from_rows(vec![
            vec![int(1), int(0), int(2), rat(-1, 3)],
            vec![int(0), int(1), int(1), int(4)],
        ]);
        let m = &a * &b;
        let k = nullspace_exact(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        assert_eq!(rank(&k), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = RationalMatrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![rat(1, 3), int(0), int(-1)],
            vec![int(0), int(4), int(1)],
        ]);
        let inv = inverse_exact(&m).unwrap();
        assert_eq!(&m * &inv, RationalMatrix::identity(3));
    }

    #[test]
    fn singular_inverse_is_an_error() {
        let m = RationalMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert!(inverse_exact(&m).is_err());
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let m = RationalMatrix::from_rows(vec![
            vec![int(1), int(-1), int(0), int(0), int(2)],
            vec![int(0), int(1), int(-1), int(0), int(0)],
            vec![int(1), int(0), int(-1), int(0), int(2)],
        ]);
        let rows: Vec<Vec<(usize, Rational)>> = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !Scalar::is_zero(*v))
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        let sk = sparse_nullspace(5, &rows);
        assert_eq!(sk.rank, 2);
        let dense = sparse_kernel_to_dense(&sk);
        assert!((&m * &dense).is_zero());
        assert_eq!(rank(&dense), 3);
        for (k, &f) in sk.free.iter().enumerate() {
            for (k2, &f2) in sk.free.iter().enumerate() {
                let want = if k == k2 { int(1) } else { int(0) };
                assert_eq!(dense[(f2, k)], want, "free coordinate {f}");
            }
        }
    }
}
