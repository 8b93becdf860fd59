//! Truncated integrable modules `H_m` of affine `sl_2` at level `l`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::{build_algebra, LieAlgebraData, Series, Weight};
use crate::numerics::{fraction_free_echelon, inverse_exact, Rational, RationalMatrix, Scalar};
use crate::rep::{irrep, Irrep};

use super::verma::{coordinates, verma_grading, Gen, Monomial, Straightener};

/// Default guard on the truncation depth.
pub const DEFAULT_MAX_DEPTH: usize = 6;

/// Mode generator names in rank order.
pub const GENERATORS: [&str; 3] = ["f", "h", "e"];

pub fn generator_from_name(name: &str) -> Result<Gen> {
    GENERATORS
        .iter()
        .position(|g| *g == name)
        .map(|p| p as Gen)
        .ok_or_else(|| Error::Config(format!("unknown generator '{name}'; expected e, f or h")))
}

#[derive(Clone, Debug)]
pub struct TruncatedModule {
    pub algebra: Arc<LieAlgebraData>,
    pub level: i64,
    pub weight: i64,
    pub depth: usize,
    pub top: Irrep,
    /// Quotient basis per degree, as PBW monomials of the Verma module.
    pub graded_bases: Vec<Vec<Monomial>>,
    /// Shapovalov Gram matrix of each Verma degree.
    pub shapovalov_gram: Vec<RationalMatrix>,
    /// `action[g][n + depth][k]`: block of `g(n)` from degree `k` to `k - n`.
    action: Vec<Vec<Vec<Option<RationalMatrix>>>>,
}

/// Construct the degree `<= depth` truncation of the level-`level` module with top `V_weight`.
pub fn truncated_module(level: i64, weight: i64, depth: usize) -> Result<TruncatedModule> {
    truncated_module_with_limit(level, weight, depth, DEFAULT_MAX_DEPTH)
}

pub fn truncated_module_with_limit(
    level: i64,
    weight: i64,
    depth: usize,
    max_depth: usize,
) -> Result<TruncatedModule> {
    if level < 1 {
        return Err(Error::Domain(format!("level must be positive, got {level}")));
    }
    if weight < 0 || weight > level {
        return Err(Error::Domain(format!(
            "weight {weight} is not integrable at level {level} (need 0 <= m <= level)"
        )));
    }
    if depth > max_depth {
        return Err(Error::Config(format!(
            "depth {depth} exceeds the configured limit {max_depth}"
        )));
    }
    let algebra = Arc::new(build_algebra(Series::A, 1)?);
    let top = irrep(&algebra, &Weight(vec![weight]))?;
    let mut st = Straightener::new(&algebra, &top, level);
    let grading = verma_grading(&mut st, &top.contravariant_form, depth);

    let mut graded_bases = Vec::with_capacity(depth + 1);
    let mut projectors: Vec<RationalMatrix> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let g = &grading.gram[k];
        let pivots = fraction_free_echelon(g).pivots;
        let gpp = g.select_rows(&pivots).select_columns(&pivots);
        let inv = inverse_exact(&gpp).map_err(|_| {
            Error::Consistency(format!("Shapovalov form is singular on pivots at degree {k}"))
        })?;
        projectors.push(&inv * &g.select_rows(&pivots));
        graded_bases.push(pivots.iter().map(|&p| grading.bases[k][p].clone()).collect());
    }

    let mut action = vec![vec![vec![None; depth + 1]; 2 * depth + 1]; 3];
    for (g, per_gen) in action.iter_mut().enumerate() {
        for (ni, per_mode) in per_gen.iter_mut().enumerate() {
            let n = ni as i64 - depth as i64;
            for (k, slot) in per_mode.iter_mut().enumerate() {
                let target = k as i64 - n;
                if target > depth as i64 {
                    continue;
                }
                let src: &Vec<Monomial> = &graded_bases[k];
                if target < 0 {
                    *slot = Some(RationalMatrix::zeros(0, src.len()));
                    continue;
                }
                let t = target as usize;
                let lower_len = grading.bases[t].len();
                let proj = &projectors[t];
                let mut block = RationalMatrix::zeros(proj.rows(), src.len());
                for (c, mono) in src.iter().enumerate() {
                    let v = st.apply(g as Gen, n, mono);
                    let w = coordinates(&v, &grading.index[t], lower_len);
                    let col = proj.mul_vec(&w);
                    block.set_column(c, &col);
                }
                *slot = Some(block);
            }
        }
    }

    Ok(TruncatedModule {
        algebra,
        level,
        weight,
        depth,
        top,
        graded_bases,
        shapovalov_gram: grading.gram,
        action,
    })
}

impl TruncatedModule {
    pub fn graded_dims(&self) -> Vec<usize> {
        self.graded_bases.iter().map(|b| b.len()).collect()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.graded_bases[k].len()
    }

    /// Block of `g(n)` from degree `k`; `None` when the target lies beyond
    /// the truncation. A target below degree 0 yields a 0-row block.
    pub fn mode_block(&self, g: Gen, n: i64, k: usize) -> Option<&RationalMatrix> {
        if n.unsigned_abs() as usize > self.depth || k > self.depth {
            return None;
        }
        self.action[g as usize][(n + self.depth as i64) as usize][k].as_ref()
    }

    /// Block of a general algebra element `sum_a c_a x_a` at mode `n`.
    pub fn element_block(&self, coeffs: &[(usize, Rational)], n: i64, k: usize) -> Option<RationalMatrix> {
        let target = k as i64 - n;
        if target > self.depth as i64 {
            return None;
        }
        let rows = if target < 0 { 0 } else { self.dim(target as usize) };
        let mut out = RationalMatrix::zeros(rows, self.dim(k));
        for (a, c) in coeffs {
            let g = self.gen_of(*a);
            let b = self.mode_block(g, n, k)?;
            out = &out + &b.scale(c);
        }
        Some(out)
    }

    /// Generator rank of an algebra basis index.
    pub fn gen_of(&self, a: usize) -> Gen {
        if a == self.algebra.f(0) {
            0
        } else if a == self.algebra.h(0) {
            1
        } else {
            2
        }
    }

    pub fn basis_index(&self, g: Gen) -> usize {
        [self.algebra.f(0), self.algebra.h(0), self.algebra.e(0)][g as usize]
    }

    /// Conformal weight of the top: `c_lambda / (2 (l + 2))`.
    pub fn conformal_weight(&self) -> Rational {
        let c = self.algebra.casimir_eigenvalue(&Weight(vec![self.weight]));
        c / Rational::from_i64(2 * (self.level + self.algebra.dual_coxeter))
    }

    /// Central charge `l dim g / (l + h)`.
    pub fn central_charge(&self) -> Rational {
        Rational::from_i64(self.level * self.algebra.dim as i64)
            / Rational::from_i64(self.level + self.algebra.dual_coxeter)
    }

    /// Radical dimension of the Shapovalov form of each Verma degree.
    pub fn radical_dims(&self) -> Vec<usize> {
        self.shapovalov_gram
            .iter()
            .zip(&self.graded_bases)
            .map(|(g, b)| g.rows() - b.len())
            .collect()
    }
}
