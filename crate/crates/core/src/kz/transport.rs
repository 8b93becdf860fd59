//! Numerical parallel transport along configuration paths.

use crate::error::{Error, Result};
use crate::numerics::{ode_transport, ComplexMatrix, OdeFailure, OdeOptions, C64};

use super::path::{braid_loop, min_pairwise_distance, ConfigPath};
use super::KzSystem;

#[derive(Clone, Debug)]
pub struct HolonomyResult {
    pub matrix: ComplexMatrix,
    /// Accumulated local error estimates over all segments.
    pub estimated_error: f64,
    pub steps_taken: usize,
}

/// Fraction of the current minimum pairwise distance allowed per step.
const DISTANCE_FRACTION: f64 = 0.1;
/// Minimum number of steps per full revolution at tight tolerances.
const STEPS_PER_TURN: f64 = 720.0;
/// Local tolerance is tightened by this factor so that the accumulated
/// global error stays at the requested level.
const LOCAL_TOL_FACTOR: f64 = 0.05;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::Config(format!("tolerance {tol} outside (0, 1e-2]")));
    }
    Ok(())
}

/// Solve `dF/dt = (sum_i zdot_i A_i(z(t))) F`, `F(0) = I`, along `path`.
pub fn parallel_transport(sys: &KzSystem, path: &ConfigPath, tol: f64) -> Result<HolonomyResult> {
    check_tol(tol)?;
    let d = sys.dim();
    let mut total = ComplexMatrix::identity(d);
    let mut estimated_error = 0.0;
    let mut steps_taken = 0;
    if d == 0 {
        return Ok(HolonomyResult {
            matrix: total,
            estimated_error,
            steps_taken,
        });
    }
    let opts = OdeOptions::with_tol(tol * LOCAL_TOL_FACTOR);
    for (k, seg) in path.segments.iter().enumerate() {
        if seg.n() != sys.n {
            return Err(Error::Shape(format!(
                "path has {} points, system has {}",
                seg.n(),
                sys.n
            )));
        }
        let speed = seg.max_speed();
        if speed == 0.0 {
            continue;
        }
        let turn_cap = if tol <= 1e-8 && seg.turning() > 0.0 {
            2.0 * std::f64::consts::PI / (STEPS_PER_TURN * seg.turning())
        } else {
            f64::INFINITY
        };
        let cap = |t: f64| {
            let dist = min_pairwise_distance(&seg.point(t));
            (DISTANCE_FRACTION * dist / speed).min(turn_cap)
        };
        let field = |t: f64| sys.transport_field(&seg.point(t), &seg.velocity(t));
        let out = ode_transport(field, cap, 0.0, 1.0, &ComplexMatrix::identity(d), &opts)
            .map_err(|e| match e {
                OdeFailure::StepUnderflow { .. } => Error::SingularityProximity {
                    segment: k,
                    min_distance: seg.min_distance(),
                },
                OdeFailure::TooManySteps { t } => Error::Numerical(format!(
                    "step limit reached on segment {k} at t = {t:.6}"
                )),
            })?;
        total = &out.value * &total;
        estimated_error += out.error_estimate;
        steps_taken += out.steps;
    }
    Ok(HolonomyResult {
        matrix: total,
        estimated_error,
        steps_taken,
    })
}

/// Monodromy of the pure braid generator `A_ij` at `basepoint`.
pub fn braid_monodromy(
    sys: &KzSystem,
    i: usize,
    j: usize,
    basepoint: &[C64],
    tol: f64,
) -> Result<HolonomyResult> {
    let path = braid_loop(basepoint, i, j)?;
    parallel_transport(sys, &path, tol)
}
