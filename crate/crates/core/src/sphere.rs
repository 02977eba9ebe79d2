//! Minimal geodesics on the unit sphere and convexity probes along them.
//!
//! Between non-antipodal unit vectors `x`, `y` with angle
//! `theta = arccos <x, y>` the minimal geodesic is
//!
//! ```text
//! gamma(t) = (sin((1 - t) theta) x + sin(t theta) y) / sin(theta)
//! ```
//!
//! for `t` in `[0, 1]`. A function on a cap is spherically convex when
//! its restriction to every such segment between cap points is convex
//! in `t`. [`geodesic_convexity_probe`] tests that numerically for a
//! quadratic form by second differences on a uniform grid.

use serde::Serialize;

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::linalg::{Orthogonal, SymMatrix, UnitVector};

/// Angle below which endpoints are treated as coincident, and within
/// which of `pi` they are treated as antipodal.
const ANGLE_MARGIN: f64 = 1e-9;

/// The angle `arccos <x, y>` between unit vectors, with the inner
/// product clamped into `[-1, 1]` so roundoff cannot produce NaN.
pub fn arc_angle(x: &UnitVector, y: &UnitVector) -> f64 {
    x.dot(y).clamp(-1.0, 1.0).acos()
}

/// The minimal geodesic between two unit vectors.
///
/// Construction fails when the endpoints are numerically coincident
/// (`theta <= 1e-9`, no segment) or antipodal (`theta >= pi - 1e-9`,
/// minimal geodesic not unique).
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSegment {
    x: UnitVector,
    y: UnitVector,
    angle: f64,
}

impl GeodesicSegment {
    pub fn new(x: UnitVector, y: UnitVector) -> Result<GeodesicSegment> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                got: y.dim(),
            });
        }
        let angle = arc_angle(&x, &y);
        if angle <= ANGLE_MARGIN {
            return Err(Error::DegenerateSegment);
        }
        if angle >= std::f64::consts::PI - ANGLE_MARGIN {
            return Err(Error::AntipodalEndpoints);
        }
        Ok(GeodesicSegment { x, y, angle })
    }

    pub fn start(&self) -> &UnitVector {
        &self.x
    }

    pub fn end(&self) -> &UnitVector {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// Arc length of the segment, equal to the endpoint angle.
    pub fn arc_length(&self) -> f64 {
        self.angle
    }

    /// The point `gamma(t)`. The closed form keeps the point on the
    /// sphere to roundoff; coordinates are returned as computed, with
    /// no renormalization, so evaluations along the segment are exact
    /// functions of `(x, y, t)`.
    pub fn at(&self, t: f64) -> Vec<f64> {
        let s = self.angle.sin();
        let a = ((1.0 - t) * self.angle).sin() / s;
        let b = (t * self.angle).sin() / s;
        self.x
            .coords()
            .iter()
            .zip(self.y.coords())
            .map(|(&xi, &yi)| a.mul_add(xi, b * yi))
            .collect()
    }
}

/// Applies an orthogonal map to a unit vector, renormalizing to absorb
/// roundoff. Isometries of the sphere preserve geodesics and arc length.
pub fn apply_isometry(q: &Orthogonal, x: &UnitVector) -> UnitVector {
    UnitVector::new(q.apply(x.coords())).expect("isometry preserves the unit sphere")
}

/// Whether the generators span a cap that is spherically convex, which
/// for a closed convex cone holds exactly when the cone is pointed
/// (contains no line). Errors propagate from cone validation (empty or
/// zero generators, ragged dimensions).
pub fn is_spherically_convex_cap(generators: Vec<Vec<f64>>) -> Result<bool> {
    match Cone::polyhedral(generators) {
        Ok(_) => Ok(true),
        Err(Error::NotPointed) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Outcome of a second-difference scan along one geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ProbeOutcome {
    Consistent,
    /// A second difference at interior grid point `t` fell below the
    /// negative tolerance, contradicting convexity along the segment.
    Violated { t: f64, second_difference: f64 },
}

/// Scans `phi(t) = <A gamma(t), gamma(t)>` at `m + 1` uniform grid
/// points and flags any interior second difference below
/// `-max(tol * max(1, ||phi||_inf) * theta^2 / m^2, 1e-11)`.
///
/// The threshold scales like the grid's quadrature of a curvature bound:
/// a convex `phi` has second differences bounded below by roundoff, and
/// a genuine violation grows like `|phi''| theta^2 / m^2`. The absolute
/// floor `1e-11` keeps evaluation noise from flagging flat segments.
/// Requires `m >= 2`.
pub fn geodesic_convexity_probe(
    segment: &GeodesicSegment,
    quad: &SymMatrix,
    m: usize,
    tol: f64,
) -> Result<ProbeOutcome> {
    if quad.n() != segment.dim() {
        return Err(Error::DimensionMismatch {
            expected: segment.dim(),
            got: quad.n(),
        });
    }
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: "need at least 2 subintervals for a second difference",
        });
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be finite and nonnegative",
        });
    }
    let phi: Vec<f64> = (0..=m)
        .map(|i| {
            let p = segment.at(i as f64 / m as f64);
            quad.quad_form(&p)
        })
        .collect();
    let sup = phi.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let theta = segment.arc_length();
    let threshold = (tol * sup.max(1.0) * theta * theta / (m * m) as f64).max(1e-11);
    let mut worst: Option<(f64, f64)> = None;
    for i in 1..m {
        let d2 = phi[i + 1] - 2.0 * phi[i] + phi[i - 1];
        if d2 < -threshold {
            let t = i as f64 / m as f64;
            if worst.is_none_or(|(_, w)| d2 < w) {
                worst = Some((t, d2));
            }
        }
    }
    Ok(match worst {
        None => ProbeOutcome::Consistent,
        Some((t, second_difference)) => ProbeOutcome::Violated {
            t,
            second_difference,
        },
    })
}
