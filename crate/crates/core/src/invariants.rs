//! Tensor products of irreducibles, their invariant vectors, and the two-site
//! Casimir operators.
//!
//! Invariants are realized as vectors of the tensor product (not functionals),
//! so every `Omega_ij` acts on them by ordinary matrix multiplication.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebraData, Weight};
use crate::numerics::{
    int, nullspace_float, rat, sparse_nullspace, ComplexMatrix, Rational, RationalMatrix, Scalar,
    SparseOperator, C64,
};
use crate::rep::Irrep;

/// Sparse copy of a representation matrix: `cols[c]` lists `(row, value)`
/// and `rows[r]` lists `(column, value)`.
#[derive(Clone, Debug)]
struct ColumnSparse {
    cols: Vec<Vec<(usize, Rational)>>,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl ColumnSparse {
    fn new(m: &RationalMatrix) -> Self {
        let cols = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter(|&r| !m[(r, c)].is_zero())
                    .map(|r| (r, m[(r, c)].clone()))
                    .collect()
            })
            .collect();
        let rows = (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .filter(|&c| !m[(r, c)].is_zero())
                    .map(|c| (c, m[(r, c)].clone()))
                    .collect()
            })
            .collect();
        Self { cols, rows }
    }
}

#[derive(Clone, Debug)]
pub struct TensorSystem {
    pub algebra: Arc<LieAlgebraData>,
    pub factors: Vec<Arc<Irrep>>,
    pub dims: Vec<usize>,
    strides: Vec<usize>,
    pub dim: usize,
    /// `sparse[i][a]`: matrix of basis element `a` in factor `i`, by column.
    sparse: Vec<Vec<ColumnSparse>>,
}

/// Build `V_1 (x) ... (x) V_n`. Slot 0 is the most significant digit.
pub fn tensor_system(reps: Vec<Arc<Irrep>>) -> Result<TensorSystem> {
    let first = reps
        .first()
        .ok_or_else(|| Error::Domain("a tensor system needs at least one factor".into()))?;
    let algebra = Arc::clone(&first.algebra);
    for r in &reps {
        if r.algebra.series != algebra.series || r.algebra.rank != algebra.rank {
            return Err(Error::Domain(
                "all tensor factors must be modules over the same algebra".into(),
            ));
        }
    }
    let dims: Vec<usize> = reps.iter().map(|r| r.dim).collect();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let dim = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::Domain("tensor product dimension overflows".into()))?;
    let sparse = reps
        .iter()
        .map(|r| r.matrices.iter().map(ColumnSparse::new).collect())
        .collect();
    Ok(TensorSystem {
        algebra,
        factors: reps,
        dims,
        strides,
        dim,
        sparse,
    })
}

/// Build the irreps for a list of highest weights and tensor them.
pub fn tensor_of_weights(alg: &Arc<LieAlgebraData>, weights: &[Weight]) -> Result<TensorSystem> {
    let mut cache: HashMap<Weight, Arc<Irrep>> = HashMap::new();
    let mut reps = Vec::with_capacity(weights.len());
    for w in weights {
        if let Some(r) = cache.get(w) {
            reps.push(Arc::clone(r));
            continue;
        }
        let r = Arc::new(crate::rep::irrep(alg, w)?);
        cache.insert(w.clone(), Arc::clone(&r));
        reps.push(r);
    }
    tensor_system(reps)
}

#[derive(Clone, Debug)]
pub struct TwoSiteOperator {
    pub i: usize,
    pub j: usize,
    pub matrix: SparseOperator<Rational>,
}

#[derive(Clone, Debug)]
pub enum InvariantBasis {
    /// Sparse columns; column `k` is 1 at `free[k]` and 0 at the other free rows.
    Exact {
        columns: Vec<Vec<(usize, Rational)>>,
        free: Vec<usize>,
    },
    /// Orthonormal columns.
    Float { columns: ComplexMatrix },
}

#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub ambient_dim: usize,
    pub basis: InvariantBasis,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        match &self.basis {
            InvariantBasis::Exact { columns, .. } => columns.len(),
            InvariantBasis::Float { columns } => columns.cols(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.basis, InvariantBasis::Exact { .. })
    }

    /// Dense ambient view of the basis (columns).
    pub fn dense_exact(&self) -> Option<RationalMatrix> {
        match &self.basis {
            InvariantBasis::Exact { columns, .. } => {
                let mut m = RationalMatrix::zeros(self.ambient_dim, columns.len());
                for (k, col) in columns.iter().enumerate() {
                    for (i, v) in col {
                        m[(*i, k)] = v.clone();
                    }
                }
                Some(m)
            }
            InvariantBasis::Float { .. } => None,
        }
    }
}

/// Restriction of an ambient operator to an invariant space.
#[derive(Clone, Debug, PartialEq)]
pub enum Restricted {
    Exact(RationalMatrix),
    Float(ComplexMatrix),
}

impl Restricted {
    pub fn dim(&self) -> usize {
        match self {
            Restricted::Exact(m) => m.rows(),
            Restricted::Float(m) => m.rows(),
        }
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        match self {
            Restricted::Exact(m) => m.map(C64::from_rational),
            Restricted::Float(m) => m.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&RationalMatrix> {
        match self {
            Restricted::Exact(m) => Some(m),
            Restricted::Float(_) => None,
        }
    }
}

/// Float residual threshold relative to the operator scale.
const FLOAT_RESTRICT_TOL: f64 = 1e-9;

impl TensorSystem {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let d = idx / s;
                idx %= s;
                d
            })
            .collect()
    }

    pub fn weight_of(&self, idx: usize) -> Weight {
        let digits = self.digits(idx);
        let mut w = Weight::zero(self.algebra.rank);
        for (f, d) in self.factors.iter().zip(digits) {
            w = w.add(&f.weights[d]);
        }
        w
    }

    /// Ambient indices of a given total weight, increasing.
    pub fn indices_of_weight(&self, target: &Weight) -> Vec<usize> {
        let mut out = Vec::new();
        let mut digits = vec![0usize; self.len()];
        let mut partial = vec![Weight::zero(self.algebra.rank); self.len() + 1];
        self.collect_weight(0, &mut digits, &mut partial, target, &mut out);
        out
    }

    fn collect_weight(
        &self,
        slot: usize,
        digits: &mut Vec<usize>,
        partial: &mut Vec<Weight>,
        target: &Weight,
        out: &mut Vec<usize>,
    ) {
        if slot == self.len() {
            if &partial[slot] == target {
                out.push(self.index(digits));
            }
            return;
        }
        for d in 0..self.dims[slot] {
            digits[slot] = d;
            partial[slot + 1] = partial[slot].add(&self.factors[slot].weights[d]);
            self.collect_weight(slot + 1, digits, partial, target, out);
        }
    }

    fn check_slot(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::Domain(format!(
                "factor index {} out of range for {} factors",
                i + 1,
                self.len()
            )));
        }
        Ok(())
    }

    /// Images of an ambient basis vector under the diagonal action of basis element `a`.
    fn diagonal_image(&self, idx: usize, a: usize, out: &mut Vec<(usize, Rational)>) {
        let digits = self.digits(idx);
        for (s, &d) in digits.iter().enumerate() {
            for (p, v) in &self.sparse[s][a].cols[d] {
                let target = idx + p * self.strides[s] - d * self.strides[s];
                out.push((target, v.clone()));
            }
        }
    }

    /// Diagonal action of basis element `a` as a sparse ambient operator.
    pub fn diagonal_action(&self, a: usize) -> SparseOperator<Rational> {
        let mut t = Vec::new();
        let mut buf = Vec::new();
        for idx in 0..self.dim {
            buf.clear();
            self.diagonal_image(idx, a, &mut buf);
            t.extend(buf.drain(..).map(|(r, v)| (r, idx, v)));
        }
        SparseOperator::from_triplets(self.dim, self.dim, t)
    }

    /// `Omega_ij = sum_ab G^{ab} rho_i(x_a) rho_j(x_b)`.
    pub fn omega_pair(&self, i: usize, j: usize) -> Result<TwoSiteOperator> {
        self.check_slot(i)?;
        self.check_slot(j)?;
        if i == j {
            return Err(Error::Domain(format!(
                "two-site Casimir needs distinct factors, got {} twice",
                i + 1
            )));
        }
        let pairs = self.casimir_pairs();
        let (si, sj) = (self.strides[i], self.strides[j]);
        let triplets: Vec<(usize, usize, Rational)> = (0..self.dim)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let di = (idx / si) % self.dims[i];
                let dj = (idx / sj) % self.dims[j];
                let mut local = Vec::new();
                for (a, b, c) in &pairs {
                    for (p, x) in &self.sparse[i][*a].cols[di] {
                        for (q, y) in &self.sparse[j][*b].cols[dj] {
                            let target = idx + p * si + q * sj - di * si - dj * sj;
                            local.push((target, idx, c * x * y));
                        }
                    }
                }
                local
            })
            .collect();
        Ok(TwoSiteOperator {
            i,
            j,
            matrix: SparseOperator::from_triplets(self.dim, self.dim, triplets),
        })
    }

    fn casimir_pairs(&self) -> Vec<(usize, usize, Rational)> {
        let g = self.algebra.casimir_tensor();
        (0..self.algebra.dim)
            .flat_map(|a| (0..self.algebra.dim).map(move |b| (a, b)))
            .filter(|&(a, b)| !g[(a, b)].is_zero())
            .map(|(a, b)| (a, b, g[(a, b)].clone()))
            .collect()
    }

    /// Row `idx` of `Omega_ij`.
    fn omega_row(&self, i: usize, j: usize, pairs: &[(usize, usize, Rational)], idx: usize) -> SparseVector {
        let (si, sj) = (self.strides[i], self.strides[j]);
        let di = (idx / si) % self.dims[i];
        let dj = (idx / sj) % self.dims[j];
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (a, b, c) in pairs {
            for (p, x) in &self.sparse[i][*a].rows[di] {
                let cx = c * x;
                for (q, y) in &self.sparse[j][*b].rows[dj] {
                    let source = idx + p * si + q * sj - di * si - dj * sj;
                    *out.entry(source).or_insert_with(Rational::zero) += &cx * y;
                }
            }
        }
        out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// `Omega_ij` on an invariant space, without assembling the ambient operator.
    pub fn restricted_omega(&self, i: usize, j: usize, inv: &InvariantSpace) -> Result<Restricted> {
        self.check_slot(i)?;
        self.check_slot(j)?;
        if i == j {
            return Err(Error::Domain(format!(
                "two-site Casimir needs distinct factors, got {} twice",
                i + 1
            )));
        }
        match &inv.basis {
            InvariantBasis::Exact { columns, free } => {
                let pairs = self.casimir_pairs();
                let free_rows: Vec<SparseVector> =
                    free.iter().map(|&f| self.omega_row(i, j, &pairs, f)).collect();
                // Omega_ij commutes with the diagonal action, so no span check here
                restrict_exact(columns, &free_rows, None).map(Restricted::Exact)
            }
            InvariantBasis::Float { .. } => restrict(&self.omega_pair(i, j)?.matrix, inv),
        }
    }

    /// All `Omega_ij`, `i < j`, in lexicographic pair order.
    pub fn all_omegas(&self) -> Result<Vec<TwoSiteOperator>> {
        let pairs: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|i| (i + 1..self.len()).map(move |j| (i, j)))
            .collect();
        pairs
            .into_par_iter()
            .map(|(i, j)| self.omega_pair(i, j))
            .collect()
    }

    /// Sparse rows of `(x) e_i` restricted to zero-weight columns (local indices).
    fn raising_rows(&self, zero: &[usize]) -> Vec<Vec<(usize, Rational)>> {
        let mut by_target: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        let mut buf = Vec::new();
        for i in 0..self.algebra.rank {
            let a = self.algebra.e(i);
            for (local, &idx) in zero.iter().enumerate() {
                buf.clear();
                self.diagonal_image(idx, a, &mut buf);
                for (t, v) in buf.drain(..) {
                    // distinct simple roots land in distinct weight spaces
                    by_target.entry(t).or_default().push((local, v));
                }
            }
        }
        by_target.into_values().collect()
    }

    /// Exact basis of the invariant vectors.
    ///
    /// A zero-weight vector killed by every simple raising operator is a
    /// highest-weight vector of weight 0, hence invariant.
    pub fn invariant_basis(&self) -> InvariantSpace {
        let zero = self.indices_of_weight(&Weight::zero(self.algebra.rank));
        let rows = self.raising_rows(&zero);
        let kernel = sparse_nullspace(zero.len(), &rows);
        let columns = kernel
            .basis
            .into_iter()
            .map(|v| v.into_iter().map(|(c, x)| (zero[c], x)).collect())
            .collect();
        let free = kernel.free.into_iter().map(|c| zero[c]).collect();
        InvariantSpace {
            ambient_dim: self.dim,
            basis: InvariantBasis::Exact { columns, free },
        }
    }

    /// Orthonormal float basis of the invariant vectors (rank-revealing QR).
    pub fn invariant_basis_float(&self) -> InvariantSpace {
        let zero = self.indices_of_weight(&Weight::zero(self.algebra.rank));
        let rows = self.raising_rows(&zero);
        let mut m = ComplexMatrix::zeros(rows.len(), zero.len());
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] += C64::from_rational(v);
            }
        }
        let local = if rows.is_empty() {
            ComplexMatrix::identity(zero.len())
        } else {
            nullspace_float(&m)
        };
        let mut columns = ComplexMatrix::zeros(self.dim, local.cols());
        for (c, &idx) in zero.iter().enumerate() {
            for k in 0..local.cols() {
                columns[(idx, k)] = local[(c, k)];
            }
        }
        InvariantSpace {
            ambient_dim: self.dim,
            basis: InvariantBasis::Float { columns },
        }
    }

    /// `dim` of the invariants from weight multiplicities alone:
    /// `sum_w sign(w) mult(w(rho) - rho)`.
    pub fn invariant_dimension(&self) -> u128 {
        invariant_dimension_of(&self.algebra, self.factors.iter().map(|f| f.as_ref()))
    }

    /// `-(1/2) sum_i c_{lambda_i}`, the value of `sum_{i<j} Omega_ij` on invariants.
    pub fn omega_sum_scalar(&self) -> Rational {
        let total = self.factors.iter().fold(Rational::zero(), |acc, f| {
            acc + self.algebra.casimir_eigenvalue(&f.highest_weight)
        });
        -total * rat(1, 2)
    }

    /// Ambient operator swapping tensor slots `i` and `j`.
    pub fn slot_swap(&self, i: usize, j: usize) -> Result<SparseOperator<Rational>> {
        self.check_slot(i)?;
        self.check_slot(j)?;
        if self.dims[i] != self.dims[j] {
            return Err(Error::Domain("slot swap needs factors of equal dimension".into()));
        }
        let t = (0..self.dim)
            .map(|idx| {
                let mut d = self.digits(idx);
                d.swap(i, j);
                (self.index(&d), idx, int(1))
            })
            .collect();
        Ok(SparseOperator::from_triplets(self.dim, self.dim, t))
    }
}

/// Invariant dimension of a tensor product of irreps via the Weyl alternating sum.
pub fn invariant_dimension_of<'a>(
    alg: &LieAlgebraData,
    factors: impl IntoIterator<Item = &'a Irrep>,
) -> u128 {
    let mut acc: BTreeMap<Weight, u128> = BTreeMap::new();
    acc.insert(Weight::zero(alg.rank), 1);
    for f in factors {
        let mults = f.weight_multiplicities();
        let mut next: BTreeMap<Weight, u128> = BTreeMap::new();
        for (w, m) in &acc {
            for (u, k) in &mults {
                *next.entry(w.add(u)).or_insert(0) += m * (*k as u128);
            }
        }
        acc = next;
    }
    let mut total: i128 = 0;
    for (w, sign) in alg.weyl_orbit_signed(&alg.weyl_vector) {
        let shifted = w.sub(&alg.weyl_vector);
        if let Some(m) = acc.get(&shifted) {
            total += sign as i128 * *m as i128;
        }
    }
    total.max(0) as u128
}

/// Restrict an ambient operator to an invariant space.
///
/// Exact mode reads the image at the free coordinates and verifies
/// `op * B = B * R` exactly; float mode uses `R = B^H op B` and fails with a
/// consistency error when the residual exceeds the tolerance.
type SparseVector = Vec<(usize, Rational)>;

/// Matrix of a linear map on the span of reduced basis `columns`, where
/// `columns[k]` is 1 at `free[k]` and 0 at the other free coordinates.
///
/// `free_rows[m]` is row `free[m]` of the operator. When `apply` is given it
/// maps a sparse vector, and a fixed combination of the columns is checked to
/// land back in the span.
type SparseApply<'a> = &'a dyn Fn(&[(usize, Rational)]) -> BTreeMap<usize, Rational>;

fn restrict_exact(
    columns: &[SparseVector],
    free_rows: &[SparseVector],
    apply: Option<SparseApply<'_>>,
) -> Result<RationalMatrix> {
    let d = columns.len();
    let coeff_rows: Vec<Vec<Rational>> = columns
        .par_iter()
        .map(|col| {
            let lookup: HashMap<usize, &Rational> = col.iter().map(|(i, v)| (*i, v)).collect();
            free_rows
                .iter()
                .map(|row| {
                    row.iter()
                        .filter_map(|(c, a)| lookup.get(c).map(|v| a * *v))
                        .fold(Rational::zero(), |acc, x| acc + x)
                })
                .collect()
        })
        .collect();
    if let Some(apply) = apply {
        check_preserved(columns, &coeff_rows, apply)?;
    }
    let mut r = RationalMatrix::zeros(d, d);
    for (k, coeffs) in coeff_rows.into_iter().enumerate() {
        for (m, c) in coeffs.into_iter().enumerate() {
            r[(m, k)] = c;
        }
    }
    Ok(r)
}

fn check_preserved(columns: &[SparseVector], coeff_rows: &[Vec<Rational>], apply: SparseApply<'_>) -> Result<()> {
    let d = columns.len();
    let weight = |k: usize| Rational::from_integer(((k * k) % 7919 + k + 1).into());
    let mut probe: BTreeMap<usize, Rational> = BTreeMap::new();
    for (k, col) in columns.iter().enumerate() {
        for (i, v) in col {
            *probe.entry(*i).or_insert_with(Rational::zero) += weight(k) * v;
        }
    }
    let probe: SparseVector = probe.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let mut rest = apply(&probe);
    let mut combined = vec![Rational::zero(); d];
    for (k, coeffs) in coeff_rows.iter().enumerate() {
        for (m, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                combined[m] += c * weight(k);
            }
        }
    }
    for (m, c) in combined.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, v) in &columns[m] {
            *rest.entry(*i).or_insert_with(Rational::zero) -= c * v;
        }
    }
    if rest.values().any(|x| !x.is_zero()) {
        return Err(Error::Consistency("operator does not preserve the invariant space".into()));
    }
    Ok(())
}

pub fn restrict(op: &SparseOperator<Rational>, inv: &InvariantSpace) -> Result<Restricted> {
    if op.rows() != inv.ambient_dim || op.cols() != inv.ambient_dim {
        return Err(Error::Shape(format!(
            "operator of size {}x{} does not act on an ambient space of dimension {}",
            op.rows(),
            op.cols(),
            inv.ambient_dim
        )));
    }
    match &inv.basis {
        InvariantBasis::Exact { columns, free } => {
            let op_t = op.transpose();
            let free_rows: Vec<SparseVector> =
                free.iter().map(|&f| op.row_entries(f).map(|(c, v)| (c, v.clone())).collect()).collect();
            restrict_exact(columns, &free_rows, Some(&|v| op_t.transpose_apply_sparse(v))).map(Restricted::Exact)
        }
        InvariantBasis::Float { columns } => {
            let opc = SparseOperator::from_triplets(
                op.rows(),
                op.cols(),
                (0..op.rows())
                    .flat_map(|i| {
                        op.row_entries(i)
                            .map(move |(c, v)| (i, c, C64::from_rational(v)))
                            .collect::<Vec<_>>()
                    })
                    .collect(),
            );
            let image = opc.apply_matrix(columns);
            let r = &columns.adjoint() * &image;
            let resid = (&image - &(columns * &r)).max_norm();
            let scale = 1.0 + image.max_norm();
            if resid > FLOAT_RESTRICT_TOL * scale {
                return Err(Error::Consistency(format!(
                    "float invariant basis is not preserved (residual {resid:.3e})"
                )));
            }
            Ok(Restricted::Float(r))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_algebra, Series};
    use crate::numerics::eig_hermitian_small;

    fn a(r: usize) -> Arc<LieAlgebraData> {
        Arc::new(build_algebra(Series::A, r).unwrap())
    }

    fn sys(r: usize, ws: &[&[i64]]) -> TensorSystem {
        let alg = a(r);
        let weights: Vec<Weight> = ws.iter().map(|w| Weight(w.to_vec())).collect();
        tensor_of_weights(&alg, &weights).unwrap()
    }

    #[test]
    fn ambient_dimensions() {
        assert_eq!(sys(1, &[&[1], &[1]]).dim, 4);
        assert_eq!(sys(1, &[&[1], &[1], &[1], &[1]]).dim, 16);
        assert_eq!(sys(2, &[&[1, 0], &[0, 1]]).dim, 9);
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let v1 = Arc::new(crate::rep::irrep(&a(1), &Weight(vec![1])).unwrap());
        let v2 = Arc::new(crate::rep::irrep(&a(2), &Weight(vec![1, 0])).unwrap());
        assert!(matches!(tensor_system(vec![v1, v2]), Err(Error::Domain(_))));
        assert!(matches!(tensor_system(vec![]), Err(Error::Domain(_))));
    }

    #[test]
    fn invariant_dimensions_small() {
        assert_eq!(sys(1, &[&[1], &[1]]).invariant_basis().dim(), 1);
        assert_eq!(sys(1, &[&[1], &[1], &[1], &[1]]).invariant_basis().dim(), 2);
        assert_eq!(sys(1, &[&[1], &[1], &[1]]).invariant_basis().dim(), 0);
        assert_eq!(sys(2, &[&[1, 0], &[0, 1], &[1, 1]]).invariant_basis().dim(), 1);
        assert_eq!(sys(2, &[&[1, 0], &[1, 0], &[1, 0]]).invariant_basis().dim(), 1);
    }

    #[test]
    fn character_dimension_agrees_with_kernel() {
        for ws in [
            vec![vec![1], vec![1], vec![2], vec![2]],
            vec![vec![2], vec![2], vec![2]],
            vec![vec![3], vec![1], vec![2], vec![2]],
        ] {
            let w: Vec<&[i64]> = ws.iter().map(|x| x.as_slice()).collect();
            let s = sys(1, &w);
            assert_eq!(s.invariant_dimension(), s.invariant_basis().dim() as u128);
        }
        let s = sys(2, &[&[1, 1], &[1, 1], &[1, 1]]);
        assert_eq!(s.invariant_dimension(), s.invariant_basis().dim() as u128);
        assert_eq!(s.invariant_dimension(), 2);
    }

    #[test]
    fn singlet_omega_spectrum() {
        let s = sys(1, &[&[1], &[1]]);
        let om = s.omega_pair(0, 1).unwrap();
        let dense = om.matrix.to_dense().map(C64::from_rational);
        let eig = eig_hermitian_small(&dense).unwrap();
        let mut vals = eig.values.clone();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let expect = [-1.5, 0.5, 0.5, 0.5];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
        let inv = s.invariant_basis();
        let r = restrict(&om.matrix, &inv).unwrap();
        assert_eq!(r, Restricted::Exact(RationalMatrix::scalar(1, rat(-3, 2))));
    }

    #[test]
    fn omega_symmetric_in_slots() {
        let s = sys(1, &[&[1], &[2], &[1]]);
        assert_eq!(
            s.omega_pair(0, 2).unwrap().matrix,
            s.omega_pair(2, 0).unwrap().matrix
        );
        assert!(matches!(s.omega_pair(1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn omega_sum_is_scalar_on_invariants() {
        for ws in [
            vec![vec![1], vec![1], vec![1], vec![1]],
            vec![vec![1], vec![1], vec![2]],
            vec![vec![2], vec![2], vec![2], vec![2]],
        ] {
            let w: Vec<&[i64]> = ws.iter().map(|x| x.as_slice()).collect();
            let s = sys(1, &w);
            let inv = s.invariant_basis();
            let mut total = RationalMatrix::zeros(inv.dim(), inv.dim());
            for om in s.all_omegas().unwrap() {
                total = &total + restrict(&om.matrix, &inv).unwrap().as_exact().unwrap();
            }
            assert_eq!(total, RationalMatrix::scalar(inv.dim(), s.omega_sum_scalar()));
        }
    }

    #[test]
    fn omega_commutes_with_diagonal_action() {
        let s = sys(2, &[&[1, 0], &[0, 1], &[1, 0]]);
        let om = s.omega_pair(0, 2).unwrap().matrix;
        for x in 0..s.algebra.dim {
            let d = s.diagonal_action(x);
            assert_eq!(om.compose(&d), d.compose(&om));
        }
    }

    #[test]
    fn highest_weight_leading_coefficient() {
        // Omega_12 on v_top (x) v_top has diagonal coefficient kappa(lambda_1, lambda_2)
        let s = sys(2, &[&[1, 1], &[2, 0]]);
        let om = s.omega_pair(0, 1).unwrap().matrix.to_dense();
        let expect = s
            .algebra
            .weight_pairing(&Weight(vec![1, 1]), &Weight(vec![2, 0]));
        assert_eq!(om[(0, 0)], expect);
    }

    #[test]
    fn float_and_exact_restrictions_agree_in_spectrum() {
        let s = sys(1, &[&[1], &[1], &[1], &[1]]);
        let ex = s.invariant_basis();
        let fl = s.invariant_basis_float();
        assert_eq!(fl.dim(), 2);
        let om = s.omega_pair(0, 1).unwrap().matrix;
        let re = restrict(&om, &ex).unwrap().to_complex();
        let rf = restrict(&om, &fl).unwrap().to_complex();
        let tr_e: C64 = (0..2).map(|i| re[(i, i)]).sum();
        let tr_f: C64 = (0..2).map(|i| rf[(i, i)]).sum();
        assert!((tr_e - tr_f).norm() < 1e-12);
        let de = re.determinant();
        let df = rf.determinant();
        assert!((de - df).norm() < 1e-12);
    }

    #[test]
    fn slot_swap_conjugates_omega() {
        let s = sys(1, &[&[1], &[2], &[1]]);
        let p = s.slot_swap(0, 2).unwrap();
        let o01 = s.omega_pair(0, 1).unwrap().matrix;
        let o12 = s.omega_pair(1, 2).unwrap().matrix;
        assert_eq!(p.compose(&o01).compose(&p), o12);
    }

    #[test]
    fn empty_invariant_restriction() {
        let s = sys(1, &[&[1], &[1], &[1]]);
        let inv = s.invariant_basis();
        let r = restrict(&s.omega_pair(0, 1).unwrap().matrix, &inv).unwrap();
        assert_eq!(r.dim(), 0);
    }

    #[test]
    fn direct_restriction_matches_assembled_operator() {
        for (alg, ws) in [
            (a(1), vec![vec![1], vec![2], vec![1], vec![2]]),
            (a(2), vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
        ] {
            let ws: Vec<Weight> = ws.into_iter().map(Weight).collect();
            let s = tensor_of_weights(&alg, &ws).unwrap();
            let inv = s.invariant_basis();
            for op in s.all_omegas().unwrap() {
                let direct = s.restricted_omega(op.i, op.j, &inv).unwrap();
                assert_eq!(direct, restrict(&op.matrix, &inv).unwrap());
            }
        }
    }
}
