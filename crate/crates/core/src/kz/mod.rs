//! The KZ connection on the invariant subspace.
//!
//! For parameter `kappa` the connection has components
//! `A_i(z) = (1/kappa) sum_{j != i} Omega_ij / (z_i - z_j)`; flatness is
//! certified by the infinitesimal pure-braid relations.

pub mod path;
pub mod transport;

use std::collections::BTreeSet;

use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::{InvariantSpace, Restricted, TensorSystem};
use crate::lie::Weight;
use crate::numerics::{
    rank, rational_to_f64, ComplexMatrix, Rational, RationalMatrix, Scalar, C64,
};

pub use path::{braid_loop, default_basepoint, full_rotation, ConfigPath, Segment};
pub use transport::{braid_monodromy, parallel_transport, HolonomyResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct KzSystem {
    pub tensor: TensorSystem,
    pub invariant_space: InvariantSpace,
    /// Restricted `Omega_ij` for `i < j` in lexicographic order.
    pub omegas: Vec<((usize, usize), Restricted)>,
    omegas_c: Vec<ComplexMatrix>,
    pub kappa: C64,
    pub n: usize,
}

/// Value of the flatness certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum FlatnessResidual {
    Exact(Rational),
    Float(f64),
}

impl FlatnessResidual {
    pub fn is_zero(&self) -> bool {
        match self {
            FlatnessResidual::Exact(r) => r.is_zero(),
            FlatnessResidual::Float(x) => *x == 0.0,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            FlatnessResidual::Exact(r) => rational_to_f64(r),
            FlatnessResidual::Float(x) => *x,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlatnessReport {
    pub residual: FlatnessResidual,
    pub relations: usize,
}

/// Local monodromy spectrum comparison for one generator.
#[derive(Clone, Debug)]
pub struct EigenvalueReport {
    pub pair: (usize, usize),
    /// Exact `Omega_ij` eigenvalues on the invariants, with multiplicity.
    pub omega_eigenvalues: Vec<Rational>,
    pub expected: Vec<C64>,
    pub computed: Vec<C64>,
    pub max_deviation: f64,
    pub holonomy: HolonomyResult,
}

/// Assemble the KZ system on the invariants of `tensor`.
pub fn kz_system(tensor: TensorSystem, kappa: C64, mode: Mode) -> Result<KzSystem> {
    if kappa == C64::new(0.0, 0.0) || !kappa.re.is_finite() || !kappa.im.is_finite() {
        return Err(Error::Config("kappa must be a nonzero finite number".into()));
    }
    let n = tensor.len();
    let invariant_space = match mode {
        Mode::Exact => tensor.invariant_basis(),
        Mode::Float => tensor.invariant_basis_float(),
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let omegas = pairs
        .into_par_iter()
        .map(|(i, j)| Ok(((i, j), tensor.restricted_omega(i, j, &invariant_space)?)))
        .collect::<Result<Vec<_>>>()?;
    let omegas_c = omegas.iter().map(|(_, r)| r.to_complex()).collect();
    Ok(KzSystem {
        tensor,
        invariant_space,
        omegas,
        omegas_c,
        kappa,
        n,
    })
}

impl KzSystem {
    pub fn dim(&self) -> usize {
        self.invariant_space.dim()
    }

    pub fn mode(&self) -> Mode {
        if self.invariant_space.is_exact() {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.omegas
            .iter()
            .position(|(p, _)| *p == (a, b))
            .expect("pair present")
    }

    pub fn omega(&self, i: usize, j: usize) -> &Restricted {
        &self.omegas[self.pair_index(i, j)].1
    }

    pub fn omega_complex(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.omegas_c[self.pair_index(i, j)]
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::Shape(format!(
                "configuration has {} coordinates, system has {} points",
                z.len(),
                self.n
            )));
        }
        path::check_distinct(z)
    }

    /// `A_i(z)`.
    pub fn connection_matrix(&self, i: usize, z: &[C64]) -> Result<ComplexMatrix> {
        self.check_point(z)?;
        if i >= self.n {
            return Err(Error::Domain(format!("point index {} out of range", i + 1)));
        }
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.n {
            if j == i {
                continue;
            }
            let c = C64::new(1.0, 0.0) / (self.kappa * (z[i] - z[j]));
            out = &out + &self.omega_complex(i, j).scale(&c);
        }
        Ok(out)
    }

    /// `sum_i zdot_i A_i(z) = (1/kappa) sum_{i<j} (zdot_i - zdot_j)/(z_i - z_j) Omega_ij`.
    pub fn transport_field(&self, z: &[C64], zdot: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for (k, ((i, j), _)) in self.omegas.iter().enumerate() {
            let w = (zdot[*i] - zdot[*j]) / ((z[*i] - z[*j]) * self.kappa);
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            out = &out + &self.omegas_c[k].scale(&w);
        }
        out
    }

    /// Max entry of `[Omega_ij, Omega_ik + Omega_jk]` and `[Omega_ij, Omega_kl]`.
    pub fn flatness_residual(&self) -> FlatnessReport {
        let n = self.n;
        let mut relations = 0;
        match self.mode() {
            Mode::Exact => {
                let get = |i: usize, j: usize| self.omega(i, j).as_exact().unwrap();
                let mut worst = Rational::zero();
                let mut note = |m: RationalMatrix| {
                    for v in m.data() {
                        let a = v.abs();
                        if a > worst {
                            worst = a;
                        }
                    }
                };
                for (i, j, k) in triples(n) {
                    let c = get(i, j).commutator(&(get(i, k) + get(j, k)));
                    note(c);
                    relations += 1;
                }
                for (i, j, k, l) in disjoint_pairs(n) {
                    note(get(i, j).commutator(get(k, l)));
                    relations += 1;
                }
                FlatnessReport {
                    residual: FlatnessResidual::Exact(worst),
                    relations,
                }
            }
            Mode::Float => {
                let get = |i: usize, j: usize| self.omega_complex(i, j);
                let mut worst: f64 = 0.0;
                for (i, j, k) in triples(n) {
                    let s = get(i, k) + get(j, k);
                    worst = worst.max(get(i, j).commutator(&s).max_norm());
                    relations += 1;
                }
                for (i, j, k, l) in disjoint_pairs(n) {
                    worst = worst.max(get(i, j).commutator(get(k, l)).max_norm());
                    relations += 1;
                }
                FlatnessReport {
                    residual: FlatnessResidual::Float(worst),
                    relations,
                }
            }
        }
    }

    /// Exact eigenvalues of restricted `Omega_ij` with multiplicities, drawn
    /// from the candidates `(c_nu - c_i - c_j)/2`.
    pub fn omega_spectrum(&self, i: usize, j: usize) -> Result<Vec<Rational>> {
        let r = match self.omega(i, j) {
            Restricted::Exact(m) => m.clone(),
            Restricted::Float(_) => {
                return Err(Error::Config(
                    "exact spectra need a system assembled in exact mode".into(),
                ))
            }
        };
        let d = r.rows();
        if d == 0 {
            return Ok(vec![]);
        }
        let alg = &self.tensor.algebra;
        let (fi, fj) = (&self.tensor.factors[i], &self.tensor.factors[j]);
        let mut candidates: BTreeSet<Rational> = BTreeSet::new();
        let ci = alg.casimir_eigenvalue(&fi.highest_weight);
        let cj = alg.casimir_eigenvalue(&fj.highest_weight);
        let wi: BTreeSet<&Weight> = fi.weights.iter().collect();
        let wj: BTreeSet<&Weight> = fj.weights.iter().collect();
        for a in &wi {
            for b in &wj {
                let nu = a.add(b);
                if nu.is_dominant() {
                    let mu = (alg.casimir_eigenvalue(&nu) - &ci - &cj) / Rational::from_i64(2);
                    candidates.insert(mu);
                }
            }
        }
        let mut out = Vec::new();
        for mu in candidates {
            let shifted = &r - &RationalMatrix::scalar(d, mu.clone());
            let mult = d - rank(&shifted);
            out.extend(std::iter::repeat(mu).take(mult));
        }
        if out.len() != d {
            return Err(Error::Consistency(format!(
                "restricted Omega_{}{} is not diagonalizable over the Casimir candidates",
                i + 1,
                j + 1
            )));
        }
        Ok(out)
    }

    /// Compare the monodromy spectrum of `A_ij` with `exp(2 pi i mu / kappa)`.
    pub fn eigenvalue_check(&self, i: usize, j: usize, tol: f64) -> Result<EigenvalueReport> {
        if self.n < 2 {
            return Err(Error::Domain("eigenvalue check needs at least two points".into()));
        }
        let mus = self.omega_spectrum(i, j)?;
        let base = default_basepoint(self.n);
        let holonomy = braid_monodromy(self, i, j, &base, tol)?;
        let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
        let expected: Vec<C64> = mus
            .iter()
            .map(|m| (two_pi_i * rational_to_f64(m) / self.kappa).exp())
            .collect();
        let computed = if self.dim() == 0 {
            vec![]
        } else {
            crate::numerics::eigenvalues_general(&holonomy.matrix)?
        };
        let max_deviation = match_spectra(&expected, &computed);
        Ok(EigenvalueReport {
            pair: (i, j),
            omega_eigenvalues: mus,
            expected,
            computed,
            max_deviation,
            holonomy,
        })
    }

    /// `exp(2 pi i tr(Omega_ij)/kappa)`, the determinant of a generator loop.
    pub fn expected_generator_determinant(&self, i: usize, j: usize) -> C64 {
        let tr = self.omega_complex(i, j).trace();
        (C64::new(0.0, 2.0 * std::f64::consts::PI) * tr / self.kappa).exp()
    }

    /// `exp(2 pi i / kappa * sum_{i<j} Omega_ij)`: the full twist on invariants.
    pub fn full_twist_scalar(&self) -> C64 {
        let s = rational_to_f64(&self.tensor.omega_sum_scalar());
        (C64::new(0.0, 2.0 * std::f64::consts::PI) * s / self.kappa).exp()
    }
}

/// Greedy nearest matching; returns the largest matched distance.
pub fn match_spectra(expected: &[C64], computed: &[C64]) -> f64 {
    if expected.len() != computed.len() {
        return f64::INFINITY;
    }
    let mut pool: Vec<C64> = computed.to_vec();
    let mut worst: f64 = 0.0;
    for e in expected {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, c)| (k, (c - e).norm()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i < j && k != i && k != j {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

fn disjoint_pairs(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    if (i, j) < (k, l) && k != i && k != j && l != i && l != j {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
    }
    out
}
