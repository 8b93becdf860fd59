//! Genus-0 conformal-block ranks for affine `sl_2` at level `l`.
//!
//! Ranks come from iterating the fusion rules; the table is checked against
//! the Verlinde sum over the modular S-matrix when the ring is built.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::invariants::invariant_dimension_of;
use crate::lie::{build_algebra, Series, Weight};
use crate::rep::irrep;

/// Largest deviation from an integer tolerated in the S-matrix evaluation.
pub const VERLINDE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct FusionRing {
    pub level: i64,
    /// `coeffs[a][b][c] = N_{ab}^c`.
    pub coeffs: Vec<Vec<Vec<u8>>>,
    /// Largest `|N_S - N|` seen while validating against the S-matrix.
    pub max_deviation: f64,
}

/// `S_{ab} = sqrt(2 / (l + 2)) sin(pi (a + 1)(b + 1) / (l + 2))`.
pub fn s_matrix(level: i64) -> Vec<Vec<f64>> {
    let k = (level + 2) as f64;
    let n = (level + 1) as usize;
    let norm = (2.0 / k).sqrt();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| norm * (PI * ((a + 1) * (b + 1)) as f64 / k).sin())
                .collect()
        })
        .collect()
}

/// Admissibility rule `|a - b| <= c <= min(a + b, 2l - a - b)`, `a + b + c` even.
pub fn admissible(level: i64, a: i64, b: i64, c: i64) -> bool {
    (a - b).abs() <= c && c <= (a + b).min(2 * level - a - b) && (a + b + c) % 2 == 0
}

fn check_level(level: i64) -> Result<()> {
    if level < 1 {
        return Err(Error::Domain(format!("level must be positive, got {level}")));
    }
    Ok(())
}

pub fn fusion_ring(level: i64) -> Result<FusionRing> {
    check_level(level)?;
    let n = (level + 1) as usize;
    let s = s_matrix(level);
    let mut coeffs = vec![vec![vec![0u8; n]; n]; n];
    let mut max_deviation = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let table = admissible(level, a as i64, b as i64, c as i64) as u8;
                // S is real and symmetric, so the conjugate drops out
                let sum: f64 = (0..n).map(|x| s[a][x] * s[b][x] * s[c][x] / s[0][x]).sum();
                let dev = (sum - table as f64).abs();
                max_deviation = max_deviation.max(dev);
                if dev >= VERLINDE_TOLERANCE {
                    return Err(Error::Consistency(format!(
                        "fusion rule N_{{{a}{b}}}^{c} = {table} disagrees with the S-matrix value {sum}"
                    )));
                }
                coeffs[a][b][c] = table;
            }
        }
    }
    Ok(FusionRing {
        level,
        coeffs,
        max_deviation,
    })
}

impl FusionRing {
    pub fn labels(&self) -> std::ops::RangeInclusive<i64> {
        0..=self.level
    }

    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> u8 {
        self.coeffs[a][b][c]
    }

    fn check_labels(&self, weights: &[i64]) -> Result<()> {
        if let Some(w) = weights.iter().find(|w| **w < 0 || **w > self.level) {
            return Err(Error::Domain(format!(
                "label {w} is not in P_{} = {{0..{}}}",
                self.level, self.level
            )));
        }
        Ok(())
    }

    /// Multiplicity vector of the fusion product of `weights`.
    pub fn product(&self, weights: &[i64]) -> Result<Vec<u128>> {
        self.check_labels(weights)?;
        let n = self.coeffs.len();
        let mut v = vec![0u128; n];
        v[0] = 1;
        for &w in weights {
            let w = w as usize;
            let mut next = vec![0u128; n];
            for (a, &va) in v.iter().enumerate() {
                if va == 0 {
                    continue;
                }
                for (c, slot) in next.iter_mut().enumerate() {
                    *slot += va * self.coeffs[a][w][c] as u128;
                }
            }
            v = next;
        }
        Ok(v)
    }

    /// Rank of the genus-`genus` block bundle; only genus 0 is supported.
    pub fn rank(&self, weights: &[i64], genus: u32) -> Result<u128> {
        if genus != 0 {
            return Err(Error::Config(format!("genus {genus} is not supported; only genus 0")));
        }
        Ok(self.product(weights)?[0])
    }

    /// `sum_x S_{0x}^{2 - n} prod_i S_{w_i x}`, before rounding.
    pub fn verlinde_sum(&self, weights: &[i64]) -> Result<f64> {
        self.check_labels(weights)?;
        let s = s_matrix(self.level);
        let exp = 2 - weights.len() as i32;
        Ok((0..s.len())
            .map(|x| {
                weights
                    .iter()
                    .fold(s[0][x].powi(exp), |acc, &w| acc * s[w as usize][x])
            })
            .sum())
    }
}

/// Rank, invariant dimension and the level at which they first agree.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantComparison {
    pub level: i64,
    pub weights: Vec<i64>,
    pub rank: u128,
    pub dim_invariants: u128,
    pub equal: bool,
    /// `(level, rank)` for each scanned level, starting at `level`.
    pub ranks_by_level: Vec<(i64, u128)>,
    pub stabilization_level: Option<i64>,
}

/// `dim (V_{w_1} (x) ... (x) V_{w_n})^{sl_2}`.
pub fn sl2_invariant_dimension(weights: &[i64]) -> Result<u128> {
    let alg = Arc::new(build_algebra(Series::A, 1)?);
    let reps = weights
        .iter()
        .map(|&w| {
            if w < 0 {
                return Err(Error::Domain(format!("weight {w} is negative")));
            }
            irrep(&alg, &Weight(vec![w]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(invariant_dimension_of(&alg, reps.iter()))
}

/// Compare the level-`level` rank with `dim A` and scan up to
/// `level + scan_levels` for the stabilization level.
pub fn compare_invariants(level: i64, weights: &[i64], scan_levels: i64) -> Result<InvariantComparison> {
    check_level(level)?;
    if scan_levels < 0 {
        return Err(Error::Config(format!("scan_levels must be nonnegative, got {scan_levels}")));
    }
    let dim_invariants = sl2_invariant_dimension(weights)?;
    let mut ranks_by_level = Vec::new();
    let mut stabilization_level = None;
    for l in level..=level + scan_levels {
        let r = fusion_ring(l)?.rank(weights, 0)?;
        if r > dim_invariants {
            return Err(Error::Violation(format!(
                "rank {r} at level {l} exceeds dim A = {dim_invariants} for weights {weights:?}"
            )));
        }
        ranks_by_level.push((l, r));
        if r == dim_invariants {
            stabilization_level = Some(l);
            break;
        }
    }
    let rank = ranks_by_level[0].1;
    Ok(InvariantComparison {
        level,
        weights: weights.to_vec(),
        rank,
        dim_invariants,
        equal: rank == dim_invariants,
        ranks_by_level,
        stabilization_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_rules() {
        let r = fusion_ring(1).unwrap();
        assert_eq!(r.coefficient(1, 1, 0), 1);
        assert_eq!(r.coefficient(1, 1, 1), 0);
        assert_eq!(r.rank(&[1, 1, 1, 1], 0).unwrap(), 1);
        assert_eq!(r.rank(&[1, 1, 1], 0).unwrap(), 0);
        assert_eq!(r.rank(&[], 0).unwrap(), 1);
    }

    #[test]
    fn unit_and_level_two() {
        for l in 1..=5 {
            let r = fusion_ring(l).unwrap();
            for a in 0..=l as usize {
                assert_eq!(r.coefficient(a, 0, a), 1);
            }
        }
        assert_eq!(fusion_ring(2).unwrap().coefficient(1, 1, 2), 1);
    }

    #[test]
    fn labels_outside_level_rejected() {
        let r = fusion_ring(1).unwrap();
        assert!(matches!(r.rank(&[2], 0), Err(Error::Domain(_))));
        assert!(matches!(r.rank(&[1, 1], 1), Err(Error::Config(_))));
        assert!(matches!(fusion_ring(0), Err(Error::Domain(_))));
    }

    #[test]
    fn four_doublets_stabilize_at_two() {
        let c = compare_invariants(1, &[1, 1, 1, 1], 10).unwrap();
        assert_eq!(c.dim_invariants, 2);
        assert_eq!(c.rank, 1);
        assert_eq!(c.ranks_by_level, vec![(1, 1), (2, 2)]);
        assert_eq!(c.stabilization_level, Some(2));
    }

    #[test]
    fn singlet_and_triplets() {
        let c = compare_invariants(1, &[1, 1], 5).unwrap();
        assert!(c.equal);
        assert_eq!(c.stabilization_level, Some(1));
        // 2 (x) 2 fuses only to 0 at level 2
        let c = compare_invariants(2, &[2, 2, 2], 5).unwrap();
        assert_eq!((c.rank, c.dim_invariants), (0, 1));
        assert_eq!(c.stabilization_level, Some(3));
    }

    #[test]
    fn verlinde_sum_matches_iteration() {
        let r = fusion_ring(3).unwrap();
        let w = [1, 2, 3, 2];
        let s = r.verlinde_sum(&w).unwrap();
        assert!((s - r.rank(&w, 0).unwrap() as f64).abs() < 1e-9);
    }
}
