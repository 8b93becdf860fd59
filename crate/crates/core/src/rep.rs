//! Irreducible representations in an explicit weight basis.
//!
//! `V_lambda` is realized inside `(x)_k Sym^{lambda_k}(Lambda^k C^{r+1})`, where
//! the product of highest-weight vectors generates a copy of it. Ambient
//! vectors are sparse maps over monomials; a monomial is the sorted list of
//! wedge bitmasks it contains (different exterior degrees never collide because
//! bitmask popcounts differ). Weight spaces are kept in reduced row echelon
//! form, so coordinates of any vector are read off at the pivot positions.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lie::{BasisElement, LieAlgebraData, OrthonormalBasis, Weight};
use crate::numerics::{int, ComplexMatrix, Matrix, Rational, RationalMatrix, Scalar};

type Monomial = Vec<u32>;
type SparseVec = Vec<(usize, Rational)>;

struct Interner {
    index: HashMap<Monomial, usize>,
    monomials: Vec<Monomial>,
}

impl Interner {
    fn id(&mut self, m: Monomial) -> usize {
        if let Some(&i) = self.index.get(&m) {
            return i;
        }
        let i = self.monomials.len();
        self.index.insert(m.clone(), i);
        self.monomials.push(m);
        i
    }
}

/// `E_{row,col}` acting on the wedge basis vector `e_S`.
fn wedge_unit(row: usize, col: usize, mask: u32) -> Option<(u32, i64)> {
    let (rb, cb) = (1u32 << row, 1u32 << col);
    if row == col {
        return (mask & cb != 0).then_some((mask, 1));
    }
    if mask & cb == 0 || mask & rb != 0 {
        return None;
    }
    let (lo, hi) = if row < col { (row, col) } else { (col, row) };
    let between = (mask >> (lo + 1)) & ((1u32 << (hi - lo - 1)) - 1);
    let sign = if between.count_ones() % 2 == 0 { 1 } else { -1 };
    Some((mask & !cb | rb, sign))
}

/// Reduced row echelon basis of one weight space.
#[derive(Default)]
struct EchelonSpace {
    rows: Vec<SparseVec>,
}

fn lookup(v: &SparseVec, idx: usize) -> Option<&Rational> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|p| &v[p].1)
}

fn axpy(v: &SparseVec, c: &Rational, w: &SparseVec) -> SparseVec {
    // v - c * w
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j >= w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i >= v.len() || (j < w.len() && w[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_w {
            out.push((w[j].0, -(c * &w[j].1)));
            j += 1;
        } else {
            let val = &v[i].1 - c * &w[j].1;
            if !val.is_zero() {
                out.push((v[i].0, val));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl EchelonSpace {
    fn pivot(row: &SparseVec) -> usize {
        row[0].0
    }

    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        for r in &self.rows {
            if let Some(c) = lookup(&v, Self::pivot(r)).cloned() {
                v = axpy(&v, &c, r);
            }
        }
        v
    }

    /// Insert `v`; returns whether it enlarged the span.
    fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let lead = v[0].1.clone();
        let v: SparseVec = v.into_iter().map(|(i, x)| (i, x / &lead)).collect();
        let p = Self::pivot(&v);
        for r in self.rows.iter_mut() {
            if let Some(c) = lookup(r, p).cloned() {
                *r = axpy(r, &c, &v);
            }
        }
        let pos = self.rows.partition_point(|r| Self::pivot(r) < p);
        self.rows.insert(pos, v);
        true
    }

    /// Coordinates of `v` in this basis; errors if `v` leaves the span.
    fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let coords: Vec<Rational> = self
            .rows
            .iter()
            .map(|r| lookup(v, Self::pivot(r)).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let mut rest = v.clone();
        for (r, c) in self.rows.iter().zip(&coords) {
            if !c.is_zero() {
                rest = axpy(&rest, c, r);
            }
        }
        rest.is_empty().then_some(coords)
    }
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub algebra: Arc<LieAlgebraData>,
    pub highest_weight: Weight,
    pub dim: usize,
    /// Weight of each basis vector, in basis order.
    pub weights: Vec<Weight>,
    /// Exact matrix of every algebra basis element.
    pub matrices: Vec<RationalMatrix>,
    /// Contravariant form: `B(x v, w) = B(v, x^T w)`, normalized on the top vector.
    pub contravariant_form: RationalMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirReport {
    pub eigenvalue: Rational,
    pub is_scalar: bool,
    /// Max-norm of `Casimir - c * I`.
    pub deviation: Rational,
}

/// Construct `V_lambda`.
pub fn irrep(alg: &Arc<LieAlgebraData>, lambda: &Weight) -> Result<Irrep> {
    let r = alg.rank;
    if lambda.rank() != r {
        return Err(Error::Shape(format!(
            "weight {lambda} has {} labels, algebra rank is {r}",
            lambda.rank()
        )));
    }
    if !lambda.is_dominant() {
        return Err(Error::Domain(format!("weight {lambda} is not dominant")));
    }
    let expected = alg.weyl_dimension(lambda);
    let expected: usize = expected
        .to_integer()
        .try_into()
        .map_err(|_| Error::Domain(format!("representation {lambda} is too large")))?;
    if expected > 20_000 {
        return Err(Error::Domain(format!(
            "representation {lambda} has dimension {expected}, above the supported 20000"
        )));
    }

    let mut interner = Interner {
        index: HashMap::new(),
        monomials: Vec::new(),
    };
    let mut top: Monomial = Vec::new();
    for (k, &m) in lambda.0.iter().enumerate() {
        let mask = (1u32 << (k + 1)) - 1;
        top.extend(std::iter::repeat(mask).take(m as usize));
    }
    let top_id = interner.id(top);

    // apply E_{row,col} to a sparse ambient vector (derivation on monomials)
    let act = |interner: &mut Interner, row: usize, col: usize, v: &SparseVec| -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (id, c) in v {
            let mono = interner.monomials[*id].clone();
            let mut p = 0;
            while p < mono.len() {
                let mask = mono[p];
                let mut q = p;
                while q < mono.len() && mono[q] == mask {
                    q += 1;
                }
                let mult = (q - p) as i64;
                if let Some((nm, sign)) = wedge_unit(row, col, mask) {
                    let mut next = mono.clone();
                    next[p] = nm;
                    next.sort_unstable_by_key(|m| (m.count_ones(), *m));
                    let id2 = interner.id(next);
                    let e = acc.entry(id2).or_insert_with(Rational::zero);
                    *e += c * int(sign * mult);
                }
                p = q;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    };

    let mut spaces: BTreeMap<Weight, EchelonSpace> = BTreeMap::new();
    let mut layers: Vec<Vec<Weight>> = vec![vec![lambda.clone()]];
    let mut first = EchelonSpace::default();
    first.insert(vec![(top_id, Rational::one())]);
    spaces.insert(lambda.clone(), first);
    loop {
        let current = layers.last().unwrap().clone();
        let mut next: BTreeMap<Weight, ()> = BTreeMap::new();
        for w in &current {
            let rows = spaces[w].rows.clone();
            for i in 0..r {
                let target = w.sub(&Weight(alg.cartan_matrix[i].clone()));
                for row in &rows {
                    let img = act(&mut interner, i + 1, i, row);
                    if img.is_empty() {
                        continue;
                    }
                    spaces.entry(target.clone()).or_default().insert(img);
                    next.insert(target.clone(), ());
                }
            }
        }
        if next.is_empty() {
            break;
        }
        // descending lex order within a depth
        layers.push(next.into_keys().rev().collect());
    }

    let mut order: Vec<(Weight, usize)> = Vec::new();
    for layer in &layers {
        for w in layer {
            for k in 0..spaces[w].rows.len() {
                order.push((w.clone(), k));
            }
        }
    }
    let dim = order.len();
    if dim != expected {
        return Err(Error::Consistency(format!(
            "generated {dim} vectors for {lambda}, Weyl dimension is {expected}"
        )));
    }
    let mut offset: HashMap<Weight, usize> = HashMap::new();
    for (idx, (w, k)) in order.iter().enumerate() {
        if *k == 0 {
            offset.insert(w.clone(), idx);
        }
    }

    let mut matrices = Vec::with_capacity(alg.dim);
    for a in 0..alg.dim {
        let shift = alg.basis_weight(a);
        let (row, col) = matrix_position(alg, a);
        let mut m = RationalMatrix::zeros(dim, dim);
        for (b, (w, k)) in order.iter().enumerate() {
            let v = &spaces[w].rows[*k];
            let img = match alg.basis[a] {
                BasisElement::H(i) => {
                    // diagonal: <w, alpha_i^vee> = w_i
                    m[(b, b)] = int(w.0[i]);
                    continue;
                }
                _ => act(&mut interner, row, col, v),
            };
            if img.is_empty() {
                continue;
            }
            let tw = w.add(&shift);
            let coords = spaces
                .get(&tw)
                .and_then(|s| s.coordinates(&img))
                .ok_or_else(|| {
                    Error::Consistency(format!("generator image left the module at weight {tw}"))
                })?;
            let base = offset[&tw];
            for (t, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    m[(base + t, b)] = c;
                }
            }
        }
        matrices.push(m);
    }

    // contravariant form inherited from the ambient monomial form
    let mono_weight = |id: usize| -> Rational {
        let mono = &interner.monomials[id];
        let mut acc = Rational::one();
        let mut p = 0;
        while p < mono.len() {
            let mut q = p;
            while q < mono.len() && mono[q] == mono[p] {
                q += 1;
            }
            for t in 1..=(q - p) {
                acc *= int(t as i64);
            }
            p = q;
        }
        acc
    };
    let mut form = RationalMatrix::zeros(dim, dim);
    let top_norm = mono_weight(top_id);
    for w in offset.keys() {
        let base = offset[w];
        let rows = &spaces[w].rows;
        for (i, ri) in rows.iter().enumerate() {
            for (j, rj) in rows.iter().enumerate().skip(i) {
                let mut acc = Rational::zero();
                for (id, x) in ri {
                    if let Some(y) = lookup(rj, *id) {
                        acc += x * y * mono_weight(*id);
                    }
                }
                acc /= &top_norm;
                form[(base + j, base + i)] = acc.clone();
                form[(base + i, base + j)] = acc;
            }
        }
    }

    Ok(Irrep {
        algebra: Arc::clone(alg),
        highest_weight: lambda.clone(),
        dim,
        weights: order.into_iter().map(|(w, _)| w).collect(),
        matrices,
        contravariant_form: form,
    })
}

/// Defining-matrix position `(row, col)` of a root vector or, for coroots,
/// a placeholder (coroots are diagonal and handled separately).
fn matrix_position(alg: &LieAlgebraData, a: usize) -> (usize, usize) {
    let m = alg.defining_matrix(a);
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && !m[(i, j)].is_zero() {
                return (i, j);
            }
        }
    }
    (0, 0)
}

impl Irrep {
    pub fn rank(&self) -> usize {
        self.algebra.rank
    }

    /// Casimir operator `sum_ab G^{ab} rho(x_a) rho(x_b)` in exact arithmetic.
    pub fn casimir_matrix(&self) -> RationalMatrix {
        let g = self.algebra.casimir_tensor();
        let mut out = RationalMatrix::zeros(self.dim, self.dim);
        for a in 0..self.algebra.dim {
            for b in 0..self.algebra.dim {
                if g[(a, b)].is_zero() {
                    continue;
                }
                let prod = &self.matrices[a] * &self.matrices[b];
                out = &out + &prod.scale(&g[(a, b)]);
            }
        }
        out
    }

    pub fn casimir(&self) -> CasimirReport {
        let eigenvalue = self.algebra.casimir_eigenvalue(&self.highest_weight);
        let diff = &self.casimir_matrix() - &RationalMatrix::scalar(self.dim, eigenvalue.clone());
        let mut deviation = Rational::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = diff[(i, j)].clone().abs();
                if v > deviation {
                    deviation = v;
                }
            }
        }
        CasimirReport {
            eigenvalue,
            is_scalar: deviation.is_zero(),
            deviation,
        }
    }

    /// Matrices of the orthonormal basis elements over the basis's scalar field.
    pub fn orthonormal_matrices<T: Scalar>(&self, basis: &OrthonormalBasis<T>) -> Vec<Matrix<T>> {
        basis
            .elements
            .iter()
            .map(|coeffs| {
                let mut m = Matrix::<T>::zeros(self.dim, self.dim);
                for (a, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let ma = &self.matrices[a];
                    for i in 0..self.dim {
                        for j in 0..self.dim {
                            if !ma[(i, j)].is_zero() {
                                let cur = m[(i, j)].clone();
                                m[(i, j)] = cur + c.clone() * T::from_rational(&ma[(i, j)]);
                            }
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Float Casimir `sum_a rho(J^a)^2` with the default float orthonormal basis.
    pub fn casimir_float(&self) -> Result<ComplexMatrix> {
        let order: Vec<usize> = (0..self.rank()).collect();
        let basis = self.algebra.orthonormal_basis_float(&order)?;
        let mats = self.orthonormal_matrices(&basis);
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for m in &mats {
            out = &out + &(m * m);
        }
        Ok(out)
    }

    /// Weight multiplicities as a map.
    pub fn weight_multiplicities(&self) -> BTreeMap<Weight, usize> {
        let mut out = BTreeMap::new();
        for w in &self.weights {
            *out.entry(w.clone()).or_insert(0) += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_algebra, Series};
    use crate::numerics::C64;

    fn alg(r: usize) -> Arc<LieAlgebraData> {
        Arc::new(build_algebra(Series::A, r).unwrap())
    }

    #[test]
    fn wedge_sign_convention() {
        // E_{0,2} e_{1,2} = e_1 ^ e_0 = -e_0 ^ e_1
        assert_eq!(wedge_unit(0, 2, 0b110), Some((0b011, -1)));
        assert_eq!(wedge_unit(0, 1, 0b010), Some((0b001, 1)));
        assert_eq!(wedge_unit(0, 1, 0b011), None);
    }

    #[test]
    fn small_dimensions() {
        let a1 = alg(1);
        assert_eq!(irrep(&a1, &Weight(vec![1])).unwrap().dim, 2);
        let a2 = alg(2);
        assert_eq!(irrep(&a2, &Weight(vec![1, 1])).unwrap().dim, 8);
        assert_eq!(irrep(&a2, &Weight(vec![0, 0])).unwrap().dim, 1);
        assert_eq!(irrep(&alg(3), &Weight(vec![0, 1, 0])).unwrap().dim, 6);
    }

    #[test]
    fn spin_one_h_eigenvalues() {
        let a1 = alg(1);
        let v = irrep(&a1, &Weight(vec![2])).unwrap();
        let h = &v.matrices[a1.h(0)];
        let diag: Vec<Rational> = (0..3).map(|i| h[(i, i)].clone()).collect();
        assert_eq!(diag, vec![int(2), int(0), int(-2)]);
    }

    #[test]
    fn non_dominant_is_domain_error() {
        let a1 = alg(1);
        assert!(matches!(irrep(&a1, &Weight(vec![-1])), Err(Error::Domain(_))));
        assert!(matches!(irrep(&a1, &Weight(vec![1, 0])), Err(Error::Shape(_))));
    }

    #[test]
    fn casimir_examples() {
        let a1 = alg(1);
        let c1 = irrep(&a1, &Weight(vec![1])).unwrap().casimir();
        assert_eq!(c1.eigenvalue, crate::numerics::rat(3, 2));
        assert!(c1.is_scalar);
        let c2 = irrep(&a1, &Weight(vec![2])).unwrap().casimir();
        assert_eq!(c2.eigenvalue, int(4));
        assert!(c2.is_scalar);
        let triv = irrep(&a1, &Weight(vec![0])).unwrap();
        assert!(triv.casimir_matrix().is_zero());
    }

    #[test]
    fn contravariant_form_is_contravariant() {
        let a2 = alg(2);
        let v = irrep(&a2, &Weight(vec![2, 1])).unwrap();
        let b = &v.contravariant_form;
        assert_eq!(b[(0, 0)], int(1));
        for a in 0..a2.dim {
            let lhs = &v.matrices[a].transpose() * b;
            let rhs = b * &v.matrices[a2.transpose_index(a)];
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn float_casimir_matches_exact() {
        let a2 = alg(2);
        let v = irrep(&a2, &Weight(vec![1, 1])).unwrap();
        let c = v.casimir_float().unwrap();
        let target = ComplexMatrix::scalar(v.dim, C64::new(6.0, 0.0));
        assert!((&c - &target).max_norm() < 1e-12);
    }
}
