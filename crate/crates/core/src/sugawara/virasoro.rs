//! Sugawara Virasoro operators and the exact identity checks.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numerics::{Rational, RationalMatrix, Scalar};

use super::module::TruncatedModule;
use super::verma::Gen;

/// `L_n` as blocks indexed by source degree.
#[derive(Clone, Debug)]
pub struct VirasoroOperator {
    pub index: i64,
    /// `blocks[k]`: degree `k` to `k - n`; `None` past the truncation.
    pub blocks: Vec<Option<RationalMatrix>>,
}

impl VirasoroOperator {
    pub fn block(&self, k: usize) -> Option<&RationalMatrix> {
        self.blocks.get(k).and_then(|b| b.as_ref())
    }
}

/// Outcome of an identity check over every fully defined block.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub residual: Rational,
    pub blocks_checked: usize,
}

impl CheckOutcome {
    fn new() -> Self {
        Self {
            residual: Rational::zero(),
            blocks_checked: 0,
        }
    }

    fn absorb(&mut self, m: &RationalMatrix) {
        for v in m.data() {
            let a = v.abs();
            if a > self.residual {
                self.residual = a;
            }
        }
        self.blocks_checked += 1;
    }

    fn merge(&mut self, other: CheckOutcome) {
        if other.residual > self.residual {
            self.residual = other.residual;
        }
        self.blocks_checked += other.blocks_checked;
    }

    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

fn in_range(m: &TruncatedModule, k: i64) -> Option<usize> {
    (0..=m.depth as i64).contains(&k).then_some(k as usize)
}

fn check_index(m: &TruncatedModule, n: i64, what: &str) -> Result<()> {
    if n.unsigned_abs() as usize > m.depth {
        return Err(Error::Domain(format!(
            "{what} index {n} exceeds truncation depth {}",
            m.depth
        )));
    }
    Ok(())
}

/// Block of `x_a(p) x_b(q)` from degree `k`, when every intermediate degree exists.
fn product_block(m: &TruncatedModule, a: Gen, p: i64, b: Gen, q: i64, k: usize) -> Option<RationalMatrix> {
    let mid = in_range(m, k as i64 - q)?;
    in_range(m, mid as i64 - p)?;
    let right = m.mode_block(b, q, k)?;
    let left = m.mode_block(a, p, mid)?;
    Some(left * right)
}

/// `L_n = (1/(2(l+h))) sum_ab G^{ab} sum_m :x_a(m) x_b(n-m):` with
/// positive modes to the right.
pub fn ln_operator(m: &TruncatedModule, n: i64) -> Result<VirasoroOperator> {
    check_index(m, n, "Virasoro")?;
    let alg = &m.algebra;
    let ginv = alg.casimir_tensor();
    let pairs: Vec<(Gen, Gen, Rational)> = (0..alg.dim)
        .flat_map(|a| (0..alg.dim).map(move |b| (a, b)))
        .filter(|&(a, b)| !ginv[(a, b)].is_zero())
        .map(|(a, b)| (m.gen_of(a), m.gen_of(b), ginv[(a, b)].clone()))
        .collect();
    let norm = Rational::one() / Rational::from_i64(2 * (m.level + alg.dual_coxeter));
    let two = Rational::from_i64(2);
    let mut blocks = Vec::with_capacity(m.depth + 1);
    for k in 0..=m.depth {
        let target = k as i64 - n;
        if target > m.depth as i64 {
            blocks.push(None);
            continue;
        }
        if target < 0 {
            blocks.push(Some(RationalMatrix::zeros(0, m.dim(k))));
            continue;
        }
        let mut acc = RationalMatrix::zeros(m.dim(target as usize), m.dim(k));
        let q_min = n.div_euclid(2) + 1;
        for (a, b, c) in &pairs {
            for q in q_min..=k as i64 {
                let blk = product_block(m, *a, n - q, *b, q, k).ok_or_else(|| {
                    Error::Consistency(format!("L_{n} needs a block outside the truncation"))
                })?;
                acc = &acc + &blk.scale(&(c * &two));
            }
            if n % 2 == 0 {
                if let Some(blk) = product_block(m, *a, n / 2, *b, n / 2, k) {
                    acc = &acc + &blk.scale(c);
                }
            }
        }
        blocks.push(Some(acc.scale(&norm)));
    }
    Ok(VirasoroOperator { index: n, blocks })
}

/// `[X(p), Y(q)] = [X,Y](p+q) + p delta_{p+q,0} kappa(X,Y) l` on every block.
pub fn affine_bracket_check(m: &TruncatedModule) -> CheckOutcome {
    let alg = &m.algebra;
    let d = m.depth as i64;
    let mut out = CheckOutcome::new();
    for x in 0..3u8 {
        for y in 0..3u8 {
            let (ax, ay) = (m.basis_index(x), m.basis_index(y));
            let bracket = alg.basis_bracket(ax, ay).to_vec();
            let form = alg.gram_matrix[(ax, ay)].clone();
            for p in -d..=d {
                for q in -d..=d {
                    if (p + q).abs() > d {
                        continue;
                    }
                    for k in 0..=m.depth {
                        let Some(xy) = product_block(m, x, p, y, q, k) else { continue };
                        let Some(yx) = product_block(m, y, q, x, p, k) else { continue };
                        let Some(mut rhs) = m.element_block(&bracket, p + q, k) else { continue };
                        if p + q == 0 && p != 0 {
                            let c = &form * Rational::from_i64(p * m.level);
                            rhs = &rhs + &RationalMatrix::scalar(m.dim(k), c);
                        }
                        out.absorb(&(&(&xy - &yx) - &rhs));
                    }
                }
            }
        }
    }
    out
}

/// `[L_p, L_q] = (p-q) L_{p+q} + delta_{p+q,0} (p^3-p)/12 c`.
pub fn virasoro_bracket_check(m: &TruncatedModule, p: i64, q: i64) -> Result<CheckOutcome> {
    check_index(m, p, "Virasoro")?;
    check_index(m, q, "Virasoro")?;
    check_index(m, p + q, "Virasoro")?;
    let lp = ln_operator(m, p)?;
    let lq = ln_operator(m, q)?;
    let lpq = ln_operator(m, p + q)?;
    let central = if p + q == 0 {
        Rational::from_i64(p * p * p - p) / Rational::from_i64(12) * m.central_charge()
    } else {
        Rational::zero()
    };
    let mut out = CheckOutcome::new();
    for k in 0..=m.depth {
        let (Some(mq), Some(mp)) = (in_range(m, k as i64 - q), in_range(m, k as i64 - p)) else {
            continue;
        };
        if in_range(m, k as i64 - p - q).is_none() {
            continue;
        }
        let (Some(a1), Some(a2)) = (lq.block(k), lp.block(mq)) else { continue };
        let (Some(b1), Some(b2)) = (lp.block(k), lq.block(mp)) else { continue };
        let Some(c) = lpq.block(k) else { continue };
        let lhs = &(a2 * a1) - &(b2 * b1);
        let mut rhs = c.scale(&Rational::from_i64(p - q));
        if !central.is_zero() {
            rhs = &rhs + &RationalMatrix::scalar(m.dim(k), central.clone());
        }
        out.absorb(&(&lhs - &rhs));
    }
    Ok(out)
}

/// `[L_n, X(k)] = -k X(n+k)`.
pub fn lx_commutator_check(m: &TruncatedModule, n: i64, x: Gen, k: i64) -> Result<CheckOutcome> {
    check_index(m, n, "Virasoro")?;
    check_index(m, k, "mode")?;
    check_index(m, n + k, "mode")?;
    let ln = ln_operator(m, n)?;
    let mut out = CheckOutcome::new();
    for s in 0..=m.depth {
        let (Some(mid_x), Some(mid_l)) = (in_range(m, s as i64 - k), in_range(m, s as i64 - n)) else {
            continue;
        };
        if in_range(m, s as i64 - n - k).is_none() {
            continue;
        }
        let (Some(xb), Some(lb)) = (m.mode_block(x, k, s), ln.block(mid_x)) else { continue };
        let (Some(lb2), Some(xb2)) = (ln.block(s), m.mode_block(x, k, mid_l)) else { continue };
        let Some(rhs) = m.mode_block(x, n + k, s) else { continue };
        let lhs = &(lb * xb) - &(xb2 * lb2);
        out.absorb(&(&lhs + &rhs.scale(&Rational::from_i64(k))));
    }
    Ok(out)
}

/// `L_0 = (Delta + k) Id` on each degree.
pub fn l0_grading_check(m: &TruncatedModule) -> Result<CheckOutcome> {
    let l0 = ln_operator(m, 0)?;
    let delta = m.conformal_weight();
    let mut out = CheckOutcome::new();
    for k in 0..=m.depth {
        let b = l0.block(k).expect("L_0 blocks are always defined");
        let target = RationalMatrix::scalar(m.dim(k), &delta + Rational::from_i64(k as i64));
        out.absorb(&(b - &target));
    }
    Ok(out)
}

/// Every Sugawara identity for `|p|, |q| <= bound` and all modes.
pub fn full_check(m: &TruncatedModule, bound: i64) -> Result<SugawaraReport> {
    let affine = affine_bracket_check(m);
    let bound = bound.min(m.depth as i64);
    let mut virasoro = CheckOutcome::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            if (p + q).abs() <= m.depth as i64 {
                virasoro.merge(virasoro_bracket_check(m, p, q)?);
            }
        }
    }
    let mut lx = CheckOutcome::new();
    let d = m.depth as i64;
    for n in -bound..=bound {
        for x in 0..3u8 {
            for k in -d..=d {
                if (n + k).abs() <= d {
                    lx.merge(lx_commutator_check(m, n, x, k)?);
                }
            }
        }
    }
    let grading = l0_grading_check(m)?;
    Ok(SugawaraReport {
        affine,
        virasoro,
        lx,
        grading,
    })
}

#[derive(Clone, Debug)]
pub struct SugawaraReport {
    pub affine: CheckOutcome,
    pub virasoro: CheckOutcome,
    pub lx: CheckOutcome,
    pub grading: CheckOutcome,
}

impl SugawaraReport {
    pub fn passed(&self) -> bool {
        self.affine.passed() && self.virasoro.passed() && self.lx.passed() && self.grading.passed()
    }
}
