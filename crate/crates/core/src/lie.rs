//! Type-A simple Lie algebras with the normalized invariant form.
//!
//! `sl_{r+1}` is realized by traceless matrices. The invariant form is the
//! trace form of the defining representation, which already gives the highest
//! root squared length 2. Weights are stored as Dynkin labels (coordinates in
//! the fundamental-weight basis); roots use the same coordinates, so the
//! simple root `alpha_i` is row `i` of the Cartan matrix.

use std::fmt;
use std::str::FromStr;


use crate::error::{Error, Result};
use crate::numerics::{inverse_exact, int, QuadNum, RationalMatrix, Rational, Scalar, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    A,
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Series::A),
            other => Err(Error::Config(format!(
                "unsupported series '{other}'; supported series: A"
            ))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("A")
    }
}

/// A weight in Dynkin labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Chevalley-type basis element: root vectors indexed by positive root, and
/// simple coroots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    E(usize),
    F(usize),
    H(usize),
}

/// Orthonormal basis of `g` for the normalized form, in Chevalley coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis<T> {
    pub elements: Vec<Vec<T>>,
}

impl<T: Scalar> OrthonormalBasis<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub series: Series,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Weight>,
    pub highest_root: Weight,
    pub weyl_vector: Weight,
    pub dual_coxeter: i64,
    pub dim: usize,
    pub basis: Vec<BasisElement>,
    /// Gram matrix of the normalized form on `basis`.
    pub gram_matrix: RationalMatrix,
    gram_inverse: RationalMatrix,
    /// Form on weights in Dynkin coordinates (inverse Cartan matrix).
    weight_form: RationalMatrix,
    /// Matrix positions `(i, j)`, `i < j`, of each positive root vector.
    root_positions: Vec<(usize, usize)>,
    defining: Vec<RationalMatrix>,
    /// `structure[a][b]`: sparse coordinates of `[x_a, x_b]`.
    structure: Vec<Vec<Vec<(usize, Rational)>>>,
}

/// Instantiate the simple Lie algebra of the given series and rank.
pub fn build_algebra(series: Series, rank: usize) -> Result<LieAlgebraData> {
    if rank == 0 {
        return Err(Error::Config("rank must be at least 1".into()));
    }
    match series {
        Series::A => Ok(build_sl(rank)),
    }
}

fn build_sl(r: usize) -> LieAlgebraData {
    let n = r + 1;
    let cartan_matrix: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let mut root_positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    root_positions.sort_by_key(|&(i, j)| (j - i, i));
    let positive_roots: Vec<Weight> = root_positions
        .iter()
        .map(|&(i, j)| {
            let mut w = vec![0i64; r];
            for k in i..j {
                for (t, wt) in w.iter_mut().enumerate() {
                    *wt += cartan_matrix[k][t];
                }
            }
            Weight(w)
        })
        .collect();
    let highest_root = positive_roots.last().cloned().unwrap();
    let weyl_vector = Weight(vec![1; r]);

    let np = root_positions.len();
    let mut basis = Vec::with_capacity(2 * np + r);
    basis.extend((0..np).map(BasisElement::E));
    basis.extend((0..np).map(BasisElement::F));
    basis.extend((0..r).map(BasisElement::H));
    let unit = |i: usize, j: usize| {
        let mut m = RationalMatrix::zeros(n, n);
        m[(i, j)] = Rational::one();
        m
    };
    let defining: Vec<RationalMatrix> = basis
        .iter()
        .map(|b| match *b {
            BasisElement::E(k) => unit(root_positions[k].0, root_positions[k].1),
            BasisElement::F(k) => unit(root_positions[k].1, root_positions[k].0),
            BasisElement::H(k) => {
                let mut m = unit(k, k);
                m[(k + 1, k + 1)] = -Rational::one();
                m
            }
        })
        .collect();
    let dim = basis.len();
    let gram_matrix =
        RationalMatrix::from_fn(dim, dim, |a, b| (&defining[a] * &defining[b]).trace());
    let gram_inverse = inverse_exact(&gram_matrix).expect("trace form is nondegenerate");
    let cm = RationalMatrix::from_fn(r, r, |i, j| int(cartan_matrix[i][j]));
    let weight_form = inverse_exact(&cm).expect("Cartan matrix is invertible");

    let mut alg = LieAlgebraData {
        series: Series::A,
        rank: r,
        cartan_matrix,
        positive_roots,
        highest_root,
        weyl_vector,
        dual_coxeter: 0,
        dim,
        basis,
        gram_matrix,
        gram_inverse,
        weight_form,
        root_positions,
        defining,
        structure: Vec::new(),
    };
    alg.dual_coxeter = 1 + alg
        .weight_pairing(&alg.weyl_vector, &alg.highest_root)
        .to_integer()
        .try_into()
        .unwrap_or(0i64);
    let structure = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let c = alg.defining[a].commutator(&alg.defining[b]);
                    alg.decompose(&c)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect()
        })
        .collect();
    alg.structure = structure;
    alg
}

impl LieAlgebraData {
    /// Index of the positive root vector at matrix position `(i, j)`.
    fn root_index(&self, i: usize, j: usize) -> usize {
        self.root_positions
            .iter()
            .position(|&p| p == (i, j))
            .expect("valid root position")
    }

    /// Coordinates of a traceless matrix in `basis`.
    pub fn decompose(&self, m: &RationalMatrix) -> Vec<Rational> {
        let n = self.rank + 1;
        let np = self.root_positions.len();
        let mut out = vec![Rational::zero(); self.dim];
        for i in 0..n {
            for j in 0..n {
                if i == j || m[(i, j)].is_zero() {
                    continue;
                }
                if i < j {
                    out[self.root_index(i, j)] = m[(i, j)].clone();
                } else {
                    out[np + self.root_index(j, i)] = m[(i, j)].clone();
                }
            }
        }
        let mut acc = Rational::zero();
        for k in 0..self.rank {
            acc += &m[(k, k)];
            out[2 * np + k] = acc.clone();
        }
        out
    }

    /// Defining-representation matrix of a basis element.
    pub fn defining_matrix(&self, a: usize) -> &RationalMatrix {
        &self.defining[a]
    }

    pub fn e(&self, i: usize) -> usize {
        self.root_index(i, i + 1)
    }

    pub fn f(&self, i: usize) -> usize {
        self.root_positions.len() + self.root_index(i, i + 1)
    }

    pub fn h(&self, i: usize) -> usize {
        2 * self.root_positions.len() + i
    }

    /// Index of the transpose of a basis element (`e <-> f`, `h` fixed).
    pub fn transpose_index(&self, a: usize) -> usize {
        let np = self.root_positions.len();
        match self.basis[a] {
            BasisElement::E(k) => np + k,
            BasisElement::F(k) => k,
            BasisElement::H(_) => a,
        }
    }

    /// Weight of a basis element under the adjoint action.
    pub fn basis_weight(&self, a: usize) -> Weight {
        match self.basis[a] {
            BasisElement::E(k) => self.positive_roots[k].clone(),
            BasisElement::F(k) => self.positive_roots[k].scale(-1),
            BasisElement::H(_) => Weight::zero(self.rank),
        }
    }

    /// Sparse coordinates of `[x_a, x_b]`.
    pub fn basis_bracket(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.structure[a][b]
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Shape(format!(
                "algebra vector has {} coordinates, expected {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Normalized invariant form on algebra vectors given in `basis` coordinates.
    pub fn killing_form(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.pair_with(&self.gram_matrix, x, y))
    }

    /// The same form over any scalar field containing the rationals.
    pub fn killing_form_in<T: Scalar>(&self, x: &[T], y: &[T]) -> Result<T> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Shape(format!(
                "algebra vectors of length {} and {}, expected {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let mut acc = T::zero();
        for a in 0..self.dim {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..self.dim {
                let g = &self.gram_matrix[(a, b)];
                if g.is_zero() || y[b].is_zero() {
                    continue;
                }
                acc = acc + x[a].clone() * T::from_rational(g) * y[b].clone();
            }
        }
        Ok(acc)
    }

    fn pair_with(&self, g: &RationalMatrix, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for a in 0..g.rows() {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..g.cols() {
                if g[(a, b)].is_zero() || y[b].is_zero() {
                    continue;
                }
                acc += &x[a] * &g[(a, b)] * &y[b];
            }
        }
        acc
    }

    /// Lie bracket of two algebra vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = vec![Rational::zero(); self.dim];
        for a in 0..self.dim {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..self.dim {
                if y[b].is_zero() {
                    continue;
                }
                let s = &x[a] * &y[b];
                for (c, v) in &self.structure[a][b] {
                    out[*c] += &s * v;
                }
            }
        }
        Ok(out)
    }

    /// Inverse Gram matrix: `sum_ab G^{ab} x_a (x) x_b` is the Casimir tensor,
    /// equal to `sum_a J^a (x) J^a` for any orthonormal basis.
    pub fn casimir_tensor(&self) -> &RationalMatrix {
        &self.gram_inverse
    }

    /// Normalized form on weights given in Dynkin labels.
    pub fn weight_pairing(&self, x: &Weight, y: &Weight) -> Rational {
        let xs: Vec<Rational> = x.0.iter().map(|&v| int(v)).collect();
        let ys: Vec<Rational> = y.0.iter().map(|&v| int(v)).collect();
        self.pair_with(&self.weight_form, &xs, &ys)
    }

    /// `kappa(lambda, lambda + 2 rho)`, the Casimir eigenvalue on `V_lambda`.
    pub fn casimir_eigenvalue(&self, lambda: &Weight) -> Rational {
        let shifted = lambda.add(&self.weyl_vector.scale(2));
        self.weight_pairing(lambda, &shifted)
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Rational {
        let lr = lambda.add(&self.weyl_vector);
        self.positive_roots.iter().fold(Rational::one(), |acc, a| {
            acc * self.weight_pairing(&lr, a) / self.weight_pairing(&self.weyl_vector, a)
        })
    }

    /// Dominant integral weights with `kappa(lambda, theta) <= level`.
    pub fn level_weights(&self, level: u32) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank];
        fn rec(
            alg: &LieAlgebraData,
            pos: usize,
            cur: &mut Vec<i64>,
            level: i64,
            out: &mut Vec<Weight>,
        ) {
            if pos == cur.len() {
                let w = Weight(cur.clone());
                if alg.weight_pairing(&w, &alg.highest_root) <= int(level) {
                    out.push(w);
                }
                return;
            }
            for v in 0..=level {
                cur[pos] = v;
                rec(alg, pos + 1, cur, level, out);
            }
            cur[pos] = 0;
        }
        rec(self, 0, &mut cur, level as i64, &mut out);
        out.sort_by(|a, b| {
            let sa: i64 = a.0.iter().sum();
            let sb: i64 = b.0.iter().sum();
            sa.cmp(&sb).then_with(|| b.cmp(a))
        });
        out
    }

    /// Float orthonormal basis: `(e+f)/sqrt2` and `i(e-f)/sqrt2` for every
    /// positive root, plus Gram-Schmidt on the coroots taken in `cartan_order`.
    pub fn orthonormal_basis_float(&self, cartan_order: &[usize]) -> Result<OrthonormalBasis<C64>> {
        let mut order = cartan_order.to_vec();
        order.sort_unstable();
        if order != (0..self.rank).collect::<Vec<_>>() {
            return Err(Error::Config(format!(
                "cartan_order must be a permutation of 0..{}",
                self.rank
            )));
        }
        let np = self.root_positions.len();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(self.dim);
        for k in 0..np {
            let mut plus = vec![C64::new(0.0, 0.0); self.dim];
            plus[k] = C64::new(s, 0.0);
            plus[np + k] = C64::new(s, 0.0);
            elements.push(plus);
            let mut minus = vec![C64::new(0.0, 0.0); self.dim];
            minus[k] = C64::new(0.0, s);
            minus[np + k] = C64::new(0.0, -s);
            elements.push(minus);
        }
        let mut cartan: Vec<Vec<C64>> = Vec::new();
        for &i in cartan_order {
            let mut v = vec![C64::new(0.0, 0.0); self.dim];
            v[2 * np + i] = C64::new(1.0, 0.0);
            for u in &cartan {
                let c = self.killing_form_in(u, &v)?;
                for (vt, ut) in v.iter_mut().zip(u) {
                    *vt -= c * ut;
                }
            }
            let nrm = self.killing_form_in(&v, &v)?.re.sqrt();
            for vt in v.iter_mut() {
                *vt /= nrm;
            }
            cartan.push(v);
        }
        elements.extend(cartan);
        Ok(OrthonormalBasis { elements })
    }

    /// Exact orthonormal basis of `sl_2` over `Q(sqrt(-2))`.
    ///
    /// Variant 0 is `{(e+f+h)/2, (e+f-h)/2, (e-f)/sqrt(-2)}`; variant 1
    /// rotates the first two by the rational rotation `(3/5, 4/5)`.
    pub fn orthonormal_basis_symbolic(&self, variant: usize) -> Result<OrthonormalBasis<QuadNum>> {
        if self.rank != 1 {
            return Err(Error::Config(
                "symbolic orthonormal bases are available for A1 only; use float mode".into(),
            ));
        }
        let q = |a: Rational| QuadNum::from_rational(&a);
        let half = Rational::new(1.into(), 2.into());
        // coordinates in (e, f, h)
        let v1 = vec![q(half.clone()), q(half.clone()), q(half.clone())];
        let v2 = vec![q(half.clone()), q(half.clone()), q(-half.clone())];
        let m = QuadNum::new(Rational::zero(), -half);
        let v3 = vec![m.clone(), -m, QuadNum::zero()];
        let elements = match variant {
            0 => vec![v1, v2, v3],
            1 => {
                let (c, sn) = (q(Rational::new(3.into(), 5.into())), q(Rational::new(4.into(), 5.into())));
                let w1: Vec<QuadNum> = v1
                    .iter()
                    .zip(&v2)
                    .map(|(a, b)| c.clone() * a.clone() + sn.clone() * b.clone())
                    .collect();
                let w2: Vec<QuadNum> = v1
                    .iter()
                    .zip(&v2)
                    .map(|(a, b)| -sn.clone() * a.clone() + c.clone() * b.clone())
                    .collect();
                vec![v3, w1, w2]
            }
            _ => {
                return Err(Error::Config(format!(
                    "unknown symbolic basis variant {variant}; expected 0 or 1"
                )))
            }
        };
        Ok(OrthonormalBasis { elements })
    }

    /// Gram matrix of an orthonormal-basis candidate (identity when valid).
    pub fn basis_gram<T: Scalar>(&self, b: &OrthonormalBasis<T>) -> Result<crate::numerics::Matrix<T>> {
        let n = b.len();
        let mut out = crate::numerics::Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.killing_form_in(&b.elements[i], &b.elements[j])?;
            }
        }
        Ok(out)
    }

    /// Weyl orbit of a regular weight, each element paired with the sign of
    /// the group element reaching it.
    pub fn weyl_orbit_signed(&self, mu: &Weight) -> Vec<(Weight, i64)> {
        let mut seen: std::collections::HashMap<Weight, i64> = std::collections::HashMap::new();
        seen.insert(mu.clone(), 1);
        let mut frontier = vec![mu.clone()];
        while let Some(w) = frontier.pop() {
            let sign = seen[&w];
            for i in 0..self.rank {
                let alpha = Weight(self.cartan_matrix[i].clone());
                let image = w.sub(&alpha.scale(w.0[i]));
                if !seen.contains_key(&image) {
                    seen.insert(image.clone(), -sign);
                    frontier.push(image);
                }
            }
        }
        let mut out: Vec<(Weight, i64)> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// `kappa(lambda, theta)`, the level a weight requires.
    pub fn level_of(&self, lambda: &Weight) -> Rational {
        self.weight_pairing(lambda, &self.highest_root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Matrix};

    fn unit_vec(dim: usize, a: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        v[a] = Rational::one();
        v
    }

    #[test]
    fn sl2_dimensions_and_dual_coxeter() {
        let a1 = build_algebra(Series::A, 1).unwrap();
        assert_eq!((a1.dim, a1.dual_coxeter), (3, 2));
        let a2 = build_algebra(Series::A, 2).unwrap();
        assert_eq!((a2.dim, a2.dual_coxeter), (8, 3));
        assert_eq!(a2.highest_root, Weight(vec![1, 1]));
    }

    #[test]
    fn dual_coxeter_matches_rho_theta_oracle() {
        // h = 1 + <rho, theta^vee>; theta^vee = theta for simply laced,
        // <rho, alpha^vee> is the height of the coroot, i.e. r for theta.
        for r in 1..=5 {
            let g = build_algebra(Series::A, r).unwrap();
            assert_eq!(g.dual_coxeter, r as i64 + 1);
        }
    }

    #[test]
    fn highest_root_has_length_two() {
        for r in 1..=4 {
            let g = build_algebra(Series::A, r).unwrap();
            assert_eq!(g.weight_pairing(&g.highest_root, &g.highest_root), int(2));
        }
    }

    #[test]
    fn sl2_killing_values() {
        let g = build_algebra(Series::A, 1).unwrap();
        let e = unit_vec(3, g.e(0));
        let f = unit_vec(3, g.f(0));
        let h = unit_vec(3, g.h(0));
        assert_eq!(g.killing_form(&h, &h).unwrap(), int(2));
        assert_eq!(g.killing_form(&e, &e).unwrap(), int(0));
        assert_eq!(g.killing_form(&e, &f).unwrap(), int(1));
        assert!(matches!(g.killing_form(&e[..2], &f), Err(Error::Shape(_))));
    }

    #[test]
    fn unsupported_series_names_supported_ones() {
        let err = "B".parse::<Series>().unwrap_err();
        assert!(err.to_string().contains("supported series: A"));
    }

    #[test]
    fn jacobi_and_ad_invariance_exact() {
        for r in 1..=2 {
            let g = build_algebra(Series::A, r).unwrap();
            let d = g.dim;
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let (x, y, z) = (unit_vec(d, a), unit_vec(d, b), unit_vec(d, c));
                        let t1 = g.bracket(&x, &g.bracket(&y, &z).unwrap()).unwrap();
                        let t2 = g.bracket(&y, &g.bracket(&z, &x).unwrap()).unwrap();
                        let t3 = g.bracket(&z, &g.bracket(&x, &y).unwrap()).unwrap();
                        for k in 0..d {
                            assert!((&t1[k] + &t2[k] + &t3[k]).is_zero());
                        }
                        let lhs = g.killing_form(&g.bracket(&x, &y).unwrap(), &z).unwrap()
                            + g.killing_form(&y, &g.bracket(&x, &z).unwrap()).unwrap();
                        assert!(lhs.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn gram_is_symmetric_nondegenerate() {
        let g = build_algebra(Series::A, 3).unwrap();
        assert_eq!(g.gram_matrix, g.gram_matrix.transpose());
        assert_eq!(&g.gram_matrix * g.casimir_tensor(), Matrix::identity(g.dim));
    }

    #[test]
    fn level_weights_examples() {
        let a1 = build_algebra(Series::A, 1).unwrap();
        assert_eq!(a1.level_weights(1), vec![Weight(vec![0]), Weight(vec![1])]);
        assert_eq!(a1.level_weights(3).len(), 4);
        for l in 1..=6 {
            assert_eq!(a1.level_weights(l).len(), l as usize + 1);
        }
        let a2 = build_algebra(Series::A, 2).unwrap();
        assert_eq!(
            a2.level_weights(1),
            vec![Weight(vec![0, 0]), Weight(vec![1, 0]), Weight(vec![0, 1])]
        );
    }

    #[test]
    fn weyl_group_orders() {
        for (r, order) in [(1, 2), (2, 6), (3, 24)] {
            let g = build_algebra(Series::A, r).unwrap();
            let orbit = g.weyl_orbit_signed(&g.weyl_vector);
            assert_eq!(orbit.len(), order);
            assert_eq!(orbit.iter().map(|x| x.1).sum::<i64>(), 0);
        }
    }

    #[test]
    fn casimir_eigenvalues_sl2() {
        let g = build_algebra(Series::A, 1).unwrap();
        assert_eq!(g.casimir_eigenvalue(&Weight(vec![1])), rat(3, 2));
        assert_eq!(g.casimir_eigenvalue(&Weight(vec![2])), int(4));
        assert_eq!(g.weyl_dimension(&Weight(vec![5])), int(6));
        let a2 = build_algebra(Series::A, 2).unwrap();
        assert_eq!(a2.weyl_dimension(&Weight(vec![1, 1])), int(8));
    }

    #[test]
    fn float_orthonormal_basis_is_orthonormal() {
        for r in 1..=3 {
            let g = build_algebra(Series::A, r).unwrap();
            let order: Vec<usize> = (0..r).rev().collect();
            let b = g.orthonormal_basis_float(&order).unwrap();
            assert_eq!(b.len(), g.dim);
            let gram = g.basis_gram(&b).unwrap();
            assert!((&gram - &Matrix::identity(g.dim)).max_norm() < 1e-14);
            let tr: C64 = (0..g.dim).map(|i| gram[(i, i)]).sum();
            assert!((tr.re - g.dim as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn symbolic_orthonormal_bases_are_exact() {
        let g = build_algebra(Series::A, 1).unwrap();
        for variant in 0..2 {
            let b = g.orthonormal_basis_symbolic(variant).unwrap();
            assert_eq!(g.basis_gram(&b).unwrap(), Matrix::identity(3));
        }
        let a2 = build_algebra(Series::A, 2).unwrap();
        assert!(a2.orthonormal_basis_symbolic(0).is_err());
    }

    #[test]
    fn orthonormal_basis_is_ad_invariant_pairing() {
        // kappa([x, J^a], J^b) = -kappa(J^a, [x, J^b]) for Chevalley x
        let g = build_algebra(Series::A, 2).unwrap();
        let b = g.orthonormal_basis_float(&[0, 1]).unwrap();
        let to_c = |v: &[Rational]| -> Vec<C64> { v.iter().map(C64::from_rational).collect() };
        let br = |x: &[C64], y: &[C64]| -> Vec<C64> {
            let mut out = vec![C64::new(0.0, 0.0); g.dim];
            for a in 0..g.dim {
                for bb in 0..g.dim {
                    for (c, v) in g.basis_bracket(a, bb) {
                        out[*c] += x[a] * y[bb] * C64::from_rational(v);
                    }
                }
            }
            out
        };
        for x in 0..g.dim {
            let xv = to_c(&unit_vec(g.dim, x));
            for ja in &b.elements {
                for jb in &b.elements {
                    let l = g.killing_form_in(&br(&xv, ja), jb).unwrap();
                    let r = g.killing_form_in(ja, &br(&xv, jb)).unwrap();
                    assert!((l + r).norm() < 1e-13);
                }
            }
        }
    }
}
