//! Householder QR with column pivoting, used for float-mode null spaces.

use super::matrix::ComplexMatrix;
use super::scalar::C64;

/// Relative rank threshold applied to the input's max-norm.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Orthonormal basis (as columns) of the kernel of `m`.
///
/// Factors `m^H P = Q R`; the trailing columns of `Q` past the numerical rank
/// span `range(m^H)^perp = ker(m)`.
pub fn nullspace_float(m: &ComplexMatrix) -> ComplexMatrix {
    let a0 = m.adjoint();
    let (n, k) = a0.shape();
    let thresh = RANK_THRESHOLD * m.max_norm();
    let mut a = a0;
    let mut q = ComplexMatrix::identity(n);
    let mut cols: Vec<usize> = (0..k).collect();
    let mut rank = 0;
    for step in 0..n.min(k) {
        // pivot: remaining column of largest norm
        let (best, best_norm) = (step..k)
            .map(|j| {
                let nrm: f64 = (step..n).map(|i| a[(i, cols[j])].norm_sqr()).sum::<f64>().sqrt();
                (j, nrm)
            })
            .fold((step, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= thresh {
            break;
        }
        cols.swap(step, best);
        let col = cols[step];
        let x0 = a[(step, col)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * best_norm;
        let mut v: Vec<C64> = (step..n).map(|i| a[(i, col)]).collect();
        v[0] -= alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 > 0.0 {
            for j in 0..k {
                let dot: C64 = (0..v.len()).map(|t| v[t].conj() * a[(step + t, j)]).sum();
                let f = dot * (2.0 / vn2);
                for t in 0..v.len() {
                    let val = v[t] * f;
                    a[(step + t, j)] -= val;
                }
            }
            // Q <- Q P
            for i in 0..n {
                let dot: C64 = (0..v.len()).map(|t| q[(i, step + t)] * v[t]).sum();
                let f = dot * (2.0 / vn2);
                for t in 0..v.len() {
                    let val = f * v[t].conj();
                    q[(i, step + t)] -= val;
                }
            }
        }
        rank += 1;
    }
    let tail: Vec<usize> = (rank..n).collect();
    q.select_columns(&tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = ComplexMatrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(2.0, 0.0), C64::new(4.0, 0.0), C64::new(0.0, 2.0)],
        ]);
        let k = nullspace_float(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).max_norm() < 1e-12);
        let g = &k.adjoint() * &k;
        assert!((&g - &ComplexMatrix::identity(2)).max_norm() < 1e-12);
    }

    #[test]
    fn full_rank_square_has_trivial_kernel() {
        let m = ComplexMatrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        assert_eq!(nullspace_float(&m).cols(), 0);
    }
}
