//! Piecewise-smooth paths in configuration space.
//!
//! Every segment is parameterized by `t` in `[0, 1]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::C64;

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    /// All coordinates move linearly.
    Line { from: Vec<C64>, to: Vec<C64> },
    /// One coordinate moves on a circle; `angle(t) = start_angle + sweep * t`.
    Arc {
        base: Vec<C64>,
        moving: usize,
        center: C64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    /// Rigid rotation of every coordinate about `center` by `sweep * t`.
    Rotation {
        base: Vec<C64>,
        center: C64,
        sweep: f64,
    },
}

fn min_on_interval(a: C64, b: C64) -> f64 {
    // min over t in [0,1] of |a + b t|
    let bb = b.norm_sqr();
    let t = if bb == 0.0 {
        0.0
    } else {
        (-(a.conj() * b).re / bb).clamp(0.0, 1.0)
    };
    (a + b * t).norm()
}

fn angle_in_sweep(theta: f64, start: f64, sweep: f64) -> bool {
    if sweep.abs() >= 2.0 * PI {
        return true;
    }
    let (lo, span) = if sweep >= 0.0 { (start, sweep) } else { (start + sweep, -sweep) };
    let off = (theta - lo).rem_euclid(2.0 * PI);
    off <= span
}

impl Segment {
    pub fn n(&self) -> usize {
        match self {
            Segment::Line { from, .. } => from.len(),
            Segment::Arc { base, .. } | Segment::Rotation { base, .. } => base.len(),
        }
    }

    pub fn point(&self, t: f64) -> Vec<C64> {
        match self {
            Segment::Line { from, to } => from.iter().zip(to).map(|(a, b)| a + (b - a) * t).collect(),
            Segment::Arc {
                base,
                moving,
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let mut z = base.clone();
                z[*moving] = center + C64::from_polar(*radius, start_angle + sweep * t);
                z
            }
            Segment::Rotation { base, center, sweep } => {
                let rot = C64::from_polar(1.0, sweep * t);
                base.iter().map(|z| center + (z - center) * rot).collect()
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Vec<C64> {
        let i = C64::new(0.0, 1.0);
        match self {
            Segment::Line { from, to } => from.iter().zip(to).map(|(a, b)| b - a).collect(),
            Segment::Arc {
                base,
                moving,
                radius,
                start_angle,
                sweep,
                ..
            } => {
                let mut v = vec![C64::new(0.0, 0.0); base.len()];
                v[*moving] = i * sweep * C64::from_polar(*radius, start_angle + sweep * t);
                v
            }
            Segment::Rotation { base, center, sweep } => {
                let rot = C64::from_polar(1.0, sweep * t);
                base.iter().map(|z| i * sweep * (z - center) * rot).collect()
            }
        }
    }

    pub fn start(&self) -> Vec<C64> {
        self.point(0.0)
    }

    pub fn end(&self) -> Vec<C64> {
        self.point(1.0)
    }

    /// Exact minimum pairwise distance along the segment.
    pub fn min_distance(&self) -> f64 {
        let n = self.n();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let d = match self {
                    Segment::Line { from, to } => {
                        let a = from[i] - from[j];
                        let b = (to[i] - to[j]) - a;
                        min_on_interval(a, b)
                    }
                    Segment::Arc {
                        base,
                        moving,
                        center,
                        radius,
                        start_angle,
                        sweep,
                    } => {
                        if i != *moving && j != *moving {
                            (base[i] - base[j]).norm()
                        } else {
                            let other = if i == *moving { base[j] } else { base[i] };
                            let rel = other - center;
                            let far = rel.norm();
                            let ends = [0.0, 1.0].map(|t| {
                                (center + C64::from_polar(*radius, start_angle + sweep * t) - other)
                                    .norm()
                            });
                            let mut d = ends[0].min(ends[1]);
                            if far > 0.0 && angle_in_sweep(rel.arg(), *start_angle, *sweep) {
                                d = d.min((far - radius).abs());
                            } else if far == 0.0 {
                                d = d.min(*radius);
                            }
                            d
                        }
                    }
                    Segment::Rotation { base, .. } => (base[i] - base[j]).norm(),
                };
                best = best.min(d);
            }
        }
        best
    }

    /// Largest coordinate speed along the segment.
    pub fn max_speed(&self) -> f64 {
        match self {
            Segment::Line { from, to } => from
                .iter()
                .zip(to)
                .map(|(a, b)| (b - a).norm())
                .fold(0.0, f64::max),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
            Segment::Rotation { base, center, sweep } => base
                .iter()
                .map(|z| (z - center).norm() * sweep.abs())
                .fold(0.0, f64::max),
        }
    }

    /// Total angle swept by circular motion, if any.
    pub fn turning(&self) -> f64 {
        match self {
            Segment::Line { .. } => 0.0,
            Segment::Arc { sweep, .. } | Segment::Rotation { sweep, .. } => sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line {
                from: to.clone(),
                to: from.clone(),
            },
            Segment::Arc {
                base,
                moving,
                center,
                radius,
                start_angle,
                sweep,
            } => Segment::Arc {
                base: base.clone(),
                moving: *moving,
                center: *center,
                radius: *radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
            Segment::Rotation { center, sweep, .. } => Segment::Rotation {
                base: self.end(),
                center: *center,
                sweep: -sweep,
            },
        }
    }

    /// Image under `z -> c z + b` applied to every coordinate.
    pub fn affine(&self, c: C64, b: C64) -> Segment {
        let map = |v: &[C64]| -> Vec<C64> { v.iter().map(|z| c * z + b).collect() };
        match self {
            Segment::Line { from, to } => Segment::Line {
                from: map(from),
                to: map(to),
            },
            Segment::Arc {
                base,
                moving,
                center,
                radius,
                start_angle,
                sweep,
            } => Segment::Arc {
                base: map(base),
                moving: *moving,
                center: c * center + b,
                radius: radius * c.norm(),
                start_angle: start_angle + c.arg(),
                sweep: *sweep,
            },
            Segment::Rotation { base, center, sweep } => Segment::Rotation {
                base: map(base),
                center: c * center + b,
                sweep: *sweep,
            },
        }
    }
}

/// Minimum pairwise distance of a configuration.
pub fn min_pairwise_distance(z: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

/// Ensure a configuration has distinct coordinates.
pub fn check_distinct(z: &[C64]) -> Result<()> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if z[i] == z[j] {
                return Err(Error::Singularity(i, j));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigPath {
    pub segments: Vec<Segment>,
}

const CHAIN_TOL: f64 = 1e-12;

impl ConfigPath {
    /// Validate continuity and avoidance of the diagonals.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let n = segments.first().map(|s| s.n()).unwrap_or(0);
        for (k, s) in segments.iter().enumerate() {
            if s.n() != n {
                return Err(Error::Shape(format!(
                    "segment {k} has {} points, expected {n}",
                    s.n()
                )));
            }
            if let Segment::Arc { moving, radius, .. } = s {
                if *moving >= n || !(*radius > 0.0) {
                    return Err(Error::Config(format!("segment {k} is a degenerate arc")));
                }
            }
            let d = s.min_distance();
            if !(d > 0.0) {
                return Err(Error::SingularityProximity {
                    segment: k,
                    min_distance: d,
                });
            }
            if k > 0 {
                let prev = segments[k - 1].end();
                let gap = prev
                    .iter()
                    .zip(s.start())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                let scale = 1.0 + prev.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if gap > CHAIN_TOL * scale {
                    return Err(Error::Config(format!(
                        "segment {k} does not start where segment {} ends",
                        k - 1
                    )));
                }
            }
        }
        Ok(Self { segments })
    }

    /// Constant path at `z` (no segments).
    pub fn constant() -> Self {
        Self { segments: vec![] }
    }

    pub fn line(from: Vec<C64>, to: Vec<C64>) -> Result<Self> {
        Self::new(vec![Segment::Line { from, to }])
    }

    /// Closed polygon through the given configurations.
    pub fn polygon(corners: &[Vec<C64>]) -> Result<Self> {
        let k = corners.len();
        Self::new(
            (0..k)
                .map(|i| Segment::Line {
                    from: corners[i].clone(),
                    to: corners[(i + 1) % k].clone(),
                })
                .collect(),
        )
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ConfigPath) -> Result<Self> {
        let mut s = self.segments.clone();
        s.extend(other.segments.iter().cloned());
        Self::new(s)
    }

    pub fn reversed(&self) -> Self {
        Self {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    pub fn affine(&self, c: C64, b: C64) -> Result<Self> {
        if c == C64::new(0.0, 0.0) {
            return Err(Error::Config("affine scale must be nonzero".into()));
        }
        Ok(Self {
            segments: self.segments.iter().map(|s| s.affine(c, b)).collect(),
        })
    }

    pub fn start(&self) -> Option<Vec<C64>> {
        self.segments.first().map(|s| s.start())
    }

    pub fn end(&self) -> Option<Vec<C64>> {
        self.segments.last().map(|s| s.end())
    }

    /// Whether the path returns to its start.
    pub fn is_closed(&self) -> bool {
        match (self.start(), self.end()) {
            (Some(a), Some(b)) => a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-10),
            _ => true,
        }
    }
}

/// Default basepoint `z_k = k`, `k = 1..n`.
pub fn default_basepoint(n: usize) -> Vec<C64> {
    (1..=n).map(|k| C64::new(k as f64, 0.0)).collect()
}

/// Loop realizing the pure braid generator `A_ij`: `z_j` travels to a circle
/// around `z_i`, circles it once counterclockwise and returns, passing on the
/// left of the segment from `z_j` to `z_i`.
pub fn braid_loop(base: &[C64], i: usize, j: usize) -> Result<ConfigPath> {
    let n = base.len();
    if i >= n || j >= n || i == j {
        return Err(Error::Domain(format!(
            "braid generator A{}{} invalid for {n} points",
            i + 1,
            j + 1
        )));
    }
    check_distinct(base)?;
    let zi = base[i];
    let zj = base[j];
    let nearest_other = (0..n)
        .filter(|&k| k != i)
        .map(|k| (base[k] - zi).norm())
        .fold(f64::INFINITY, f64::min);
    let radius = 0.5 * nearest_other;
    let spread = min_pairwise_distance(base);
    let offset = (0.5 * spread).min(radius);
    let dir = (zi - zj) / (zi - zj).norm();
    // detour on the left of the approach, parallel to it
    let left = dir * C64::new(0.0, 1.0);
    let with = |p: C64| {
        let mut z = base.to_vec();
        z[j] = p;
        z
    };
    let mut corners = vec![zj, zj + left * offset, zi + left * offset];
    if radius > offset {
        corners.push(zi + left * radius);
    }
    let outward: Vec<Segment> = corners
        .windows(2)
        .map(|w| Segment::Line {
            from: with(w[0]),
            to: with(w[1]),
        })
        .collect();
    let circle = Segment::Arc {
        base: with(zi + left * radius),
        moving: j,
        center: zi,
        radius,
        start_angle: left.arg(),
        sweep: 2.0 * PI,
    };
    let mut segments = outward.clone();
    segments.push(circle);
    segments.extend(outward.iter().rev().map(|s| s.reversed()));
    ConfigPath::new(segments).map_err(|e| match e {
        Error::SingularityProximity { .. } => Error::Domain(format!(
            "cannot realize A{}{} at this basepoint without passing through another point",
            i + 1,
            j + 1
        )),
        other => other,
    })
}

/// Rigid rotation of the whole configuration by one full turn about its centroid.
pub fn full_rotation(base: &[C64]) -> Result<ConfigPath> {
    check_distinct(base)?;
    let center = base.iter().sum::<C64>() / base.len() as f64;
    ConfigPath::new(vec![Segment::Rotation {
        base: base.to_vec(),
        center,
        sweep: 2.0 * PI,
    }])
}
