//! Residue pairings of Laurent `g`-valued differentials with Sugawara modes.
//!
//! A differential `phi = sum_k X_k xi^{-k-1} dxi` pairs with the current
//! `J(k) = J xi^k` through `Res kappa(phi, J(k)) = kappa(X_k, J)`. The pairing
//! of `phi (x) phi dxi^2` with `L_m` is computed two ways: by the closed form
//! over the support, and by the literal double-residue expansion over an
//! orthonormal basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lie::{build_algebra, LieAlgebraData, OrthonormalBasis, Series};
use crate::numerics::{rational_to_f64, QuadNum, Rational, Scalar, C64};

/// Finite Laurent series `sum_e c_e xi^e` with scalar coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<T> {
    terms: BTreeMap<i64, T>,
}

impl<T: Scalar> LaurentSeries<T> {
    pub fn new() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exponent: i64, c: T) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_insert_with(T::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    /// Multiply by `xi^shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Coefficient of `xi^{-1}`.
    pub fn residue(&self) -> T {
        self.terms.get(&-1).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Scalar> Default for LaurentSeries<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `phi = sum_k X_k xi^{-k-1} dxi` with finitely many nonzero `X_k`.
#[derive(Clone, Debug)]
pub struct LaurentGVector {
    pub algebra: Arc<LieAlgebraData>,
    pub support: BTreeMap<i64, Vec<Rational>>,
}

impl LaurentGVector {
    pub fn zero(algebra: &Arc<LieAlgebraData>) -> Self {
        Self {
            algebra: algebra.clone(),
            support: BTreeMap::new(),
        }
    }

    pub fn from_entries(algebra: &Arc<LieAlgebraData>, entries: Vec<(i64, Vec<Rational>)>) -> Result<Self> {
        let mut out = Self::zero(algebra);
        for (k, x) in entries {
            out.add(k, &x)?;
        }
        Ok(out)
    }

    /// Add `x` to the coefficient `X_k`.
    pub fn add(&mut self, k: i64, x: &[Rational]) -> Result<()> {
        if x.len() != self.algebra.dim {
            return Err(Error::Shape(format!(
                "algebra vector of length {}, expected {}",
                x.len(),
                self.algebra.dim
            )));
        }
        let slot = self
            .support
            .entry(k)
            .or_insert_with(|| vec![Rational::zero(); x.len()]);
        for (s, v) in slot.iter_mut().zip(x) {
            *s += v;
        }
        if slot.iter().all(|v| v.is_zero()) {
            self.support.remove(&k);
        }
        Ok(())
    }

    pub fn coefficient(&self, k: i64) -> Option<&[Rational]> {
        self.support.get(&k).map(|v| v.as_slice())
    }

    pub fn sum(&self, other: &LaurentGVector) -> Result<LaurentGVector> {
        let mut out = self.clone();
        for (k, x) in &other.support {
            out.add(*k, x)?;
        }
        Ok(out)
    }

    /// `kappa(phi, J)` as a Laurent series in `xi` (the `dxi` left implicit).
    pub fn pair_with<T: Scalar>(&self, j: &[T]) -> Result<LaurentSeries<T>> {
        let mut out = LaurentSeries::new();
        for (k, x) in &self.support {
            let xs: Vec<T> = x.iter().map(T::from_rational).collect();
            out.add_term(-k - 1, self.algebra.killing_form_in(&xs, j)?);
        }
        Ok(out)
    }

    fn kappa(&self, a: i64, b: i64) -> Rational {
        match (self.support.get(&a), self.support.get(&b)) {
            (Some(x), Some(y)) => self
                .algebra
                .killing_form(x, y)
                .expect("support vectors have the algebra dimension"),
            _ => Rational::zero(),
        }
    }
}

fn check_same_algebra(a: &LaurentGVector, b: &LaurentGVector) -> Result<()> {
    if a.algebra.series != b.algebra.series || a.algebra.rank != b.algebra.rank {
        return Err(Error::Domain("Laurent vectors over different algebras".into()));
    }
    Ok(())
}

fn check_level(level: i64) -> Result<()> {
    if level < 1 {
        return Err(Error::Domain(format!("level must be positive, got {level}")));
    }
    Ok(())
}

/// `(1 / (2 (l + h))) sum_k kappa(X_k, X_{m-k})`.
pub fn symbol_pairing(phi: &LaurentGVector, m: i64, level: i64) -> Result<Rational> {
    check_level(level)?;
    let norm = Rational::from_i64(2 * (level + phi.algebra.dual_coxeter));
    Ok(cocycle_evaluation(phi, m) / norm)
}

/// `{xi^{n+1} d/dxi}(phi) = sum_k kappa(X_k, X_{n-k})`.
pub fn cocycle_evaluation(phi: &LaurentGVector, n: i64) -> Rational {
    let mut acc = Rational::zero();
    for k in phi.support.keys() {
        acc += phi.kappa(*k, n - k);
    }
    acc
}

/// Two-argument form `sum_k kappa(X_k, Y_{n-k})`; symmetric in its arguments.
pub fn cocycle_cross(phi: &LaurentGVector, psi: &LaurentGVector, n: i64) -> Result<Rational> {
    check_same_algebra(phi, psi)?;
    let mut acc = Rational::zero();
    for (k, x) in &phi.support {
        if let Some(y) = psi.support.get(&(n - k)) {
            acc += phi.algebra.killing_form(x, y)?;
        }
    }
    Ok(acc)
}

/// Orthonormal basis in the arithmetic used for the residue expansion.
#[derive(Clone, Debug)]
pub enum ResidueBasis {
    Symbolic(OrthonormalBasis<QuadNum>),
    Float(OrthonormalBasis<C64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ResidueValue {
    Exact(QuadNum),
    Float(C64),
}

impl ResidueValue {
    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ResidueValue::Exact(q) if q.is_rational() => Some(q.a.clone()),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            ResidueValue::Exact(q) => q.to_c64(),
            ResidueValue::Float(z) => *z,
        }
    }

    /// Distance to a rational value: exact zero test in symbolic mode.
    pub fn deviation_from(&self, target: &Rational) -> f64 {
        match self {
            ResidueValue::Exact(q) => {
                let d = q.clone() - QuadNum::from_rational(target);
                if d.is_zero() {
                    0.0
                } else {
                    d.magnitude().max(f64::MIN_POSITIVE)
                }
            }
            ResidueValue::Float(z) => (*z - C64::new(rational_to_f64(target), 0.0)).norm(),
        }
    }
}

fn residue_expansion<T: Scalar>(
    phi: &LaurentGVector,
    m: i64,
    level: i64,
    basis: &OrthonormalBasis<T>,
) -> Result<T> {
    check_level(level)?;
    if basis.len() != phi.algebra.dim {
        return Err(Error::Shape(format!(
            "basis has {} elements, algebra has dimension {}",
            basis.len(),
            phi.algebra.dim
        )));
    }
    let series: Vec<LaurentSeries<T>> = basis
        .elements
        .iter()
        .map(|j| phi.pair_with(j))
        .collect::<Result<_>>()?;
    // Res kappa(phi, J(k)) = residue of xi^k kappa(phi, J)
    let res = |a: usize, k: i64| series[a].shifted(k).residue();
    let (lo, hi) = match (phi.support.keys().next(), phi.support.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Ok(T::zero()),
    };
    let mut acc = T::zero();
    if m == 0 {
        // L_0 without normal ordering: zero modes once, positive modes twice
        let two = T::from_i64(2);
        for a in 0..basis.len() {
            let r0 = res(a, 0);
            acc = acc + r0.clone() * r0;
            for k in 1..=hi.max(-lo) {
                acc = acc + two.clone() * res(a, -k) * res(a, k);
            }
        }
    } else {
        for a in 0..basis.len() {
            for k in lo.min(m - hi)..=hi.max(m - lo) {
                acc = acc + res(a, k) * res(a, m - k);
            }
        }
    }
    Ok(acc / T::from_i64(2 * (level + phi.algebra.dual_coxeter)))
}

/// The pairing of `phi (x) phi dxi^2` with `L_m` by literal residue expansion.
pub fn residue_side(phi: &LaurentGVector, m: i64, level: i64, basis: &ResidueBasis) -> Result<ResidueValue> {
    match basis {
        ResidueBasis::Symbolic(b) => residue_expansion(phi, m, level, b).map(ResidueValue::Exact),
        ResidueBasis::Float(b) => residue_expansion(phi, m, level, b).map(ResidueValue::Float),
    }
}

/// Random vector with each `k` in `[lo, hi]` present with probability 1/2 and
/// small rational coordinates.
pub fn random_laurent_vector<R: Rng>(algebra: &Arc<LieAlgebraData>, rng: &mut R, lo: i64, hi: i64) -> LaurentGVector {
    let mut out = LaurentGVector::zero(algebra);
    for k in lo..=hi {
        if rng.gen_bool(0.5) {
            let x: Vec<Rational> = (0..algebra.dim)
                .map(|_| Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into()))
                .collect();
            out.add(k, &x).expect("random vector has the algebra dimension");
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SymbolTrialReport {
    pub trials: usize,
    pub rank: usize,
    /// Largest `|residue_side - symbol_pairing|` in the exact pass (A1 only).
    pub exact_max_deviation: Option<Rational>,
    pub float_max_deviation: f64,
    /// Largest `|cocycle - 2 (l + h) symbol_pairing|`.
    pub cocycle_max_deviation: Rational,
    /// Largest deviation of the cross-term decomposition.
    pub cross_max_deviation: Rational,
    pub failures: usize,
}

impl SymbolTrialReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Seeded trials: support in `[-4, 4]`, `m` in `[-3, 3]`, `l` in `{1, 2, 3}`.
pub fn run_symbol_trials(rank: usize, trials: usize, seed: u64) -> Result<SymbolTrialReport> {
    let algebra = Arc::new(build_algebra(Series::A, rank)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbolic = if rank == 1 {
        Some([
            ResidueBasis::Symbolic(algebra.orthonormal_basis_symbolic(0)?),
            ResidueBasis::Symbolic(algebra.orthonormal_basis_symbolic(1)?),
        ])
    } else {
        None
    };
    let order: Vec<usize> = (0..rank).collect();
    let float = ResidueBasis::Float(algebra.orthonormal_basis_float(&order)?);
    let mut report = SymbolTrialReport {
        trials,
        rank,
        exact_max_deviation: symbolic.as_ref().map(|_| Rational::zero()),
        float_max_deviation: 0.0,
        cocycle_max_deviation: Rational::zero(),
        cross_max_deviation: Rational::zero(),
        failures: 0,
    };
    let bump = |slot: &mut Rational, v: Rational| {
        let v = v.abs();
        if v > *slot {
            *slot = v;
        }
    };
    for _ in 0..trials {
        let phi = random_laurent_vector(&algebra, &mut rng, -4, 4);
        let psi = random_laurent_vector(&algebra, &mut rng, -4, 4);
        let m = rng.gen_range(-3i64..=3);
        let level = rng.gen_range(1i64..=3);
        let target = symbol_pairing(&phi, m, level)?;
        let mut ok = true;
        if let Some(bases) = &symbolic {
            for b in bases {
                let v = residue_side(&phi, m, level, b)?;
                match v.as_rational() {
                    Some(q) => {
                        let dev = &q - &target;
                        ok &= dev.is_zero();
                        bump(report.exact_max_deviation.as_mut().unwrap(), dev);
                    }
                    None => ok = false,
                }
            }
        }
        let fv = residue_side(&phi, m, level, &float)?.deviation_from(&target);
        let scale = 1.0 + rational_to_f64(&target).abs();
        report.float_max_deviation = report.float_max_deviation.max(fv);
        ok &= fv <= 1e-12 * scale;
        let coc = cocycle_evaluation(&phi, m);
        let factor = Rational::from_i64(2 * (level + algebra.dual_coxeter));
        let dev = &coc - &(factor * &target);
        ok &= dev.is_zero();
        bump(&mut report.cocycle_max_deviation, dev);
        let both = phi.sum(&psi)?;
        let cross = cocycle_cross(&phi, &psi, m)?;
        let dev = cocycle_evaluation(&both, m)
            - coc
            - cocycle_evaluation(&psi, m)
            - Rational::from_i64(2) * cross;
        ok &= dev.is_zero();
        bump(&mut report.cross_max_deviation, dev);
        if !ok {
            report.failures += 1;
        }
    }
    Ok(report)
}
