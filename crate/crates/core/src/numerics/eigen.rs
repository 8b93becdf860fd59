//! Small dense complex eigensolvers.
//!
//! Hermitian matrices use cyclic Jacobi rotations; general matrices are
//! reduced to Hessenberg form and iterated with single-shift QR.

use super::matrix::ComplexMatrix;
use super::scalar::C64;
use crate::error::{Error, Result};

/// Dimension ceiling for the dense eigensolvers.
pub const MAX_EIG_DIM: usize = 512;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let d = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self.values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_EIG_DIM {
        return Err(Error::Domain(format!(
            "dense eigensolver limited to dimension {MAX_EIG_DIM}, got {n}"
        )));
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn eig_hermitian_small(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    check_dim(n)?;
    let scale = m.max_norm().max(f64::MIN_POSITIVE);
    let skew = (&*m - &m.adjoint()).max_norm();
    if skew > 1e-10 * scale.max(1.0) {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (deviation {skew:.3e})"
        )));
    }
    let mut a = m.clone();
    // symmetrize away rounding noise
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let e = apq / g;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag phase * real rotation
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = e.conj() * (-s);
                let jqq = e.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap());
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(HermitianEigen { values, vectors })
}

fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- P H P with P = I - 2 v v^H / |v|^2
        for j in 0..n {
            let dot: C64 = (0..v.len()).map(|t| v[t].conj() * h[(k + 1 + t, j)]).sum();
            let f = dot * (2.0 / vnorm2);
            for t in 0..v.len() {
                let val = v[t] * f;
                h[(k + 1 + t, j)] -= val;
            }
        }
        for i in 0..n {
            let dot: C64 = (0..v.len()).map(|t| h[(i, k + 1 + t)] * v[t]).sum();
            let f = dot * (2.0 / vnorm2);
            for t in 0..v.len() {
                let val = f * v[t].conj();
                h[(i, k + 1 + t)] -= val;
            }
        }
    }
    h
}

/// Eigenvalues of a general complex matrix (unordered multiset).
pub fn eigenvalues_general(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    check_dim(n)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let mut eig = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let eps = f64::EPSILON;
    loop {
        if hi == 0 {
            eig.push(h[(0, 0)]);
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= eps * diag.max(f64::MIN_POSITIVE) {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 10_000 {
            return Err(Error::Numerical("QR iteration failed to converge".into()));
        }
        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let c = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        let mu = if iter % 11 == 10 {
            // exceptional shift
            d + C64::new(h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() { m1 } else { m2 }
        };
        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 {
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let u = h[(k, j)];
                let w = h[(k + 1, j)];
                h[(k, j)] = cs.conj() * u + sn.conj() * w;
                h[(k + 1, j)] = -sn * u + cs * w;
            }
            rots.push((cs, sn));
        }
        for (t, k) in (l..hi).enumerate() {
            let (cs, sn) = rots[t];
            for i in l..=(k + 1).min(hi) {
                let u = h[(i, k)];
                let w = h[(i, k + 1)];
                h[(i, k)] = u * cs + w * sn;
                h[(i, k + 1)] = -u * sn.conj() + w * cs.conj();
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_is_its_own_decomposition() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        let e = eig_hermitian_small(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 3.0]);
    }

    #[test]
    fn swap_matrix_has_plus_minus_one() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let e = eig_hermitian_small(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!((&e.reconstruct() - &m).max_norm() < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -2.0), c(0.0, 0.5)],
            vec![c(1.0, 2.0), c(-1.0, 0.0), c(3.0, 1.0)],
            vec![c(0.0, -0.5), c(3.0, -1.0), c(0.5, 0.0)],
        ]);
        let e = eig_hermitian_small(&m).unwrap();
        assert!((&e.reconstruct() - &m).max_norm() < 1e-10 * m.max_norm());
        let vhv = &e.vectors.adjoint() * &e.vectors;
        assert!((&vhv - &ComplexMatrix::identity(3)).max_norm() < 1e-12);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(matches!(eig_hermitian_small(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn general_eigenvalues_of_similarity_transform() {
        let d = [c(1.0, 0.0), c(0.0, 1.0), c(-0.5, 0.25), c(2.0, -1.0)];
        let p = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.1), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.3, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(2.0, 0.0)],
        ]);
        let dm = ComplexMatrix::from_fn(4, 4, |i, j| if i == j { d[i] } else { c(0.0, 0.0) });
        let m = &(&p * &dm) * &p.inverse().unwrap();
        let mut got = eigenvalues_general(&m).unwrap();
        for want in d {
            let (k, err) = got
                .iter()
                .enumerate()
                .map(|(k, z)| (k, (z - want).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert!(err < 1e-10, "eigenvalue {want} missed by {err}");
            got.remove(k);
        }
    }

    #[test]
    fn rotation_has_unit_circle_spectrum() {
        let t: f64 = 0.7;
        let m = ComplexMatrix::from_rows(vec![
            vec![c(t.cos(), 0.0), c(-t.sin(), 0.0)],
            vec![c(t.sin(), 0.0), c(t.cos(), 0.0)],
        ]);
        let ev = eigenvalues_general(&m).unwrap();
        for z in ev {
            assert!((z.norm() - 1.0).abs() < 1e-14);
            assert!((z.arg().abs() - t).abs() < 1e-14);
        }
    }
}
