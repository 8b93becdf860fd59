//! Dormand-Prince 5(4) integrator for complex linear systems.
//!
//! Adaptive stepping uses the PI controller of Hairer, Norsett & Wanner with
//! an additional caller-supplied cap on the step length, which the transport
//! code uses to keep steps short near the poles of the connection.

use rayon::prelude::*;

use super::matrix::ComplexMatrix;
use super::scalar::C64;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Difference between the 5th and embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub max_steps: usize,
    pub safety: f64,
    /// PI stabilization exponent.
    pub beta: f64,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-8,
            h_min: 1e-13,
            max_steps: 2_000_000,
            safety: 0.9,
            beta: 0.04,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OdeOutcome {
    pub y: Vec<C64>,
    /// Sum of absolute local error estimates over accepted steps.
    pub error_estimate: f64,
    pub steps: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OdeFailure {
    StepUnderflow { t: f64, h: f64 },
    TooManySteps { t: f64 },
}

fn axpy_stage(y: &[C64], h: f64, k: &[Vec<C64>], row: &[f64], upto: usize, out: &mut [C64]) {
    for i in 0..y.len() {
        let mut acc = C64::new(0.0, 0.0);
        for (j, kj) in k.iter().enumerate().take(upto) {
            if row[j] != 0.0 {
                acc += kj[i] * row[j];
            }
        }
        out[i] = y[i] + acc * h;
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1 > t0`; `max_step(t)` caps each step.
pub fn dopri5<F, H>(
    f: F,
    max_step: H,
    t0: f64,
    t1: f64,
    y0: &[C64],
    opts: &OdeOptions,
) -> Result<OdeOutcome, OdeFailure>
where
    F: Fn(f64, &[C64], &mut [C64]),
    H: Fn(f64) -> f64,
{
    assert!(t1 >= t0, "integration runs forward");
    let n = y0.len();
    let mut y = y0.to_vec();
    if t1 == t0 || n == 0 {
        return Ok(OdeOutcome {
            y,
            error_estimate: 0.0,
            steps: 0,
            rejected: 0,
        });
    }
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    let mut stage = vec![C64::new(0.0, 0.0); n];
    let mut y_new = vec![C64::new(0.0, 0.0); n];
    let mut t = t0;
    f(t, &y, &mut k[0]);
    let span = t1 - t0;
    let mut h = (span / 100.0).min(max_step(t0)).max(opts.h_min);
    let expo1 = 0.2 - opts.beta * 0.75;
    let mut facold: f64 = 1e-4;
    let (facc1, facc2) = (1.0 / 0.2, 1.0 / 10.0);
    let mut error_estimate = 0.0;
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut last_rejected = false;
    while t < t1 {
        if steps + rejected >= opts.max_steps {
            return Err(OdeFailure::TooManySteps { t });
        }
        let cap = max_step(t);
        h = h.min(cap);
        if h < opts.h_min {
            return Err(OdeFailure::StepUnderflow { t, h });
        }
        let last = t + h >= t1 - 1e-15 * span;
        if last {
            h = t1 - t;
        }
        for s in 1..7 {
            axpy_stage(&y, h, &k, &A[s], s, &mut stage);
            let (_, tail) = k.split_at_mut(s);
            f(t + C[s] * h, &stage, &mut tail[0]);
        }
        // stage 7 point is the 5th-order solution (FSAL)
        y_new.copy_from_slice(&stage);
        let mut err_sq = 0.0;
        let mut err_abs: f64 = 0.0;
        for i in 0..n {
            let mut e = C64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += kj[i] * E[j];
                }
            }
            e *= h;
            let sk = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            err_sq += (e.norm() / sk).powi(2);
            err_abs = err_abs.max(e.norm());
        }
        let err = (err_sq / n as f64).sqrt();
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(opts.beta) / opts.safety).clamp(facc2, facc1);
            facold = err.max(1e-4);
            t = if last { t1 } else { t + h };
            std::mem::swap(&mut y, &mut y_new);
            let (first, rest) = k.split_at_mut(6);
            first[0].copy_from_slice(&rest[0]);
            error_estimate += err_abs;
            steps += 1;
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            rejected += 1;
            last_rejected = true;
            h /= facc1.min(fac11 / opts.safety);
        }
    }
    Ok(OdeOutcome {
        y,
        error_estimate,
        steps,
        rejected,
    })
}

/// Fixed-step 5th-order Dormand-Prince propagation (no error control).
pub fn dopri5_fixed<F>(f: F, t0: f64, t1: f64, y0: &[C64], steps: usize) -> Vec<C64>
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    let n = y0.len();
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    let mut stage = vec![C64::new(0.0, 0.0); n];
    for s_idx in 0..steps {
        let t = t0 + s_idx as f64 * h;
        f(t, &y, &mut k[0]);
        for s in 1..7 {
            axpy_stage(&y, h, &k, &A[s], s, &mut stage);
            let (_, tail) = k.split_at_mut(s);
            f(t + C[s] * h, &stage, &mut tail[0]);
        }
        y.copy_from_slice(&stage);
    }
    y
}

/// Result of propagating a fundamental matrix.
#[derive(Clone, Debug)]
pub struct Transported {
    pub value: ComplexMatrix,
    pub error_estimate: f64,
    pub steps: usize,
}

/// Solve `F' = A(t) F` column by column (the system is linear, so columns are
/// independent and run in parallel on the current rayon pool).
pub fn ode_transport<G, H>(
    field: G,
    max_step: H,
    t0: f64,
    t1: f64,
    f0: &ComplexMatrix,
    opts: &OdeOptions,
) -> Result<Transported, OdeFailure>
where
    G: Fn(f64) -> ComplexMatrix + Sync,
    H: Fn(f64) -> f64 + Sync,
{
    let n = f0.rows();
    let outcomes: Vec<Result<OdeOutcome, OdeFailure>> = (0..f0.cols())
        .into_par_iter()
        .map(|j| {
            let col = f0.column(j);
            dopri5(
                |t, y, dy| {
                    let a = field(t);
                    let r = a.mul_vec(y);
                    dy.copy_from_slice(&r);
                },
                &max_step,
                t0,
                t1,
                &col,
                opts,
            )
        })
        .collect();
    let mut value = ComplexMatrix::zeros(n, f0.cols());
    let mut error_estimate: f64 = 0.0;
    let mut steps = 0;
    for (j, out) in outcomes.into_iter().enumerate() {
        let out = out?;
        value.set_column(j, &out.y);
        error_estimate = error_estimate.max(out.error_estimate);
        steps = steps.max(out.steps);
    }
    Ok(Transported {
        value,
        error_estimate,
        steps,
    })
}
