//! Optimization of quadratic forms on spheres and cone caps.
//!
//! Three routes, from strongest to weakest assumptions:
//!
//! - closed forms when a convexity certificate pins down the structure
//!   of the matrix ([`extremize_lorentz_certified`]),
//! - an eigenvalue solve when the feasible set is the whole sphere
//!   ([`min_on_sphere`]),
//! - projected geodesic descent on an arbitrary cap
//!   ([`projected_geodesic_descent`]), a feasible monotone first-order
//!   method with an Armijo arc search.
//!
//! [`ncp_existence_check`] combines certified lower bounds with descent
//! upper bounds to decide whether strict copositivity, the standard
//! existence criterion for cone complementarity problems, holds.

use serde::Serialize;

use crate::cones::{Cone, ConeKind, DEFAULT_TOL};
use crate::convexity::Verdict;
use crate::error::{Error, Result};
use crate::linalg::{dot, jacobi_eigen, norm, RngSeed, SymMatrix, UnitVector};

/// How an optimizer arrived at its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptMethod {
    /// Evaluated a formula implied by a structural certificate.
    ClosedForm,
    /// Eigenvalue decomposition; exact up to the eigensolver tolerance.
    Eigen,
    /// Projected geodesic descent; a local method.
    Descent,
}

/// Result of an optimization run.
#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub value: f64,
    pub argpoint: UnitVector,
    pub iterations: u64,
    pub converged: bool,
    pub method: OptMethod,
}

/// Minimum and maximum of the form over a cap.
#[derive(Debug, Clone, Serialize)]
pub struct CapExtremes {
    pub min: OptResult,
    pub max: OptResult,
}

/// Minimizes `f(x) = <Ax, x>` over the whole unit sphere.
///
/// The minimum is the smallest eigenvalue, attained at a corresponding
/// unit eigenvector. The reported eigenvector sign is canonical: its
/// first coordinate larger than `1e-12` in magnitude is positive.
pub fn min_on_sphere(a: &SymMatrix) -> OptResult {
    let eig = jacobi_eigen(a);
    let mut v = eig.vector(0);
    for &c in v.iter() {
        if c.abs() > 1e-12 {
            if c < 0.0 {
                for entry in v.iter_mut() {
                    *entry = -*entry;
                }
            }
            break;
        }
    }
    OptResult {
        value: eig.min_value(),
        argpoint: UnitVector::new(v).expect("eigenvector is unit"),
        iterations: 0,
        converged: true,
        method: OptMethod::Eigen,
    }
}

fn axis(n: usize, i: usize) -> UnitVector {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    UnitVector::new(v).expect("axis vector")
}

/// Closed-form extremes over the Lorentz cap for a certified form.
///
/// A certificate pins the matrix to `diag(a, lambda I)` with
/// `lambda >= a` (up to the certification tolerance), so along the cap
/// `f(x) = lambda - (lambda - a) x_1^2` with `x_1` ranging over
/// `[1/sqrt(2), 1]`. The minimum `a` sits at the apex direction `e_1`;
/// the maximum `(a + lambda)/2` is attained on the whole boundary
/// circle, reported at the canonical point with `x_1 = x_2 =
/// 1/sqrt(2)`.
///
/// `verdict` must be certified with a Lorentz-shaped certificate, else
/// `Error::NotCertified`. On a rotated cone the extreme points are the
/// base-cone ones mapped through the rotation.
pub fn extremize_lorentz_certified(
    a: &SymMatrix,
    cone: &Cone,
    verdict: &Verdict,
) -> Result<CapExtremes> {
    if a.n() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: a.n(),
        });
    }
    let cert = verdict.certificate().ok_or(Error::NotCertified)?;
    let apex = cert.a.ok_or(Error::NotCertified)?;
    let lambda = cert.lambda;
    let n = cone.dim();

    let (min_point, max_point) = match cone.kind() {
        ConeKind::Lorentz { .. } => {
            let min_point = axis(n, 0);
            let max_point = if n == 1 {
                axis(n, 0)
            } else {
                let mut v = vec![0.0; n];
                v[0] = std::f64::consts::FRAC_1_SQRT_2;
                v[1] = std::f64::consts::FRAC_1_SQRT_2;
                UnitVector::new(v).expect("boundary point")
            };
            (min_point, max_point)
        }
        ConeKind::Rotated { q, base } => {
            if !matches!(base.kind(), ConeKind::Lorentz { .. }) {
                return Err(Error::UnsupportedCone {
                    reason: "closed-form extremes need a Lorentz cone, possibly rotated",
                });
            }
            let inner = extremize_lorentz_certified(&a.conjugated(q), base, verdict)?;
            let map = |p: &UnitVector| UnitVector::new(q.apply(p.coords()));
            (map(&inner.min.argpoint)?, map(&inner.max.argpoint)?)
        }
        _ => {
            return Err(Error::UnsupportedCone {
                reason: "closed-form extremes need a Lorentz cone, possibly rotated",
            });
        }
    };

    let result = |value: f64, argpoint: UnitVector| OptResult {
        value,
        argpoint,
        iterations: 0,
        converged: true,
        method: OptMethod::ClosedForm,
    };
    Ok(CapExtremes {
        min: result(apex, min_point),
        max: result(0.5 * (apex + lambda), max_point),
    })
}

/// Tuning knobs for [`projected_geodesic_descent`].
#[derive(Debug, Clone, Copy)]
pub struct DescentParams {
    /// Initial trial step, also the probe length for the stationarity
    /// measure.
    pub step: f64,
    /// Convergence threshold on the projected-arc fixed-point residual
    /// `||y(step) - x|| / step`.
    pub grad_tol: f64,
    pub max_iter: u64,
}

impl Default for DescentParams {
    fn default() -> Self {
        DescentParams {
            step: 0.5,
            grad_tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

/// One projected-arc point: `normalize(project_K(x - alpha * g))`, or
/// `None` when the shifted point projects to the apex.
fn arc_point(cone: &Cone, x: &[f64], g_tan: &[f64], alpha: f64) -> Option<Vec<f64>> {
    let shifted: Vec<f64> = x
        .iter()
        .zip(g_tan)
        .map(|(&xi, &gi)| (-alpha).mul_add(gi, xi))
        .collect();
    let projected = cone.project(&shifted);
    let len = norm(&projected);
    if len <= 1e-14 {
        return None;
    }
    Some(projected.iter().map(|&p| p / len).collect())
}

/// Minimizes `f(x) = <Ax, x>` over the cap of `cone` by projected
/// geodesic descent.
///
/// Iterates `x <- normalize(project_K(x - alpha * grad))` with the
/// tangential gradient `2Ax - 2f(x) x` and an Armijo arc search
/// (`f(y) <= f(x) - 1e-4 / alpha * ||y - x||^2`, halving `alpha`). The
/// tangential gradient keeps the radial component out of the step, so
/// shifted points never shrink toward the apex on self-scaled rays.
/// Every iterate is feasible and the value sequence is monotone.
///
/// `start` must lie in the cone (`Error::InfeasibleStart` otherwise);
/// it is normalized, and nudged by one cone projection to clear
/// boundary rounding. `Error::StepUnderflow` reports an Armijo search
/// that collapsed below `1e-16` without an acceptable step.
///
/// The run converges when the fixed-point residual
/// `||y(step) - x|| / step` drops to `grad_tol`; hitting `max_iter`
/// returns the best point with `converged: false`.
pub fn projected_geodesic_descent(
    a: &SymMatrix,
    cone: &Cone,
    start: &[f64],
    params: DescentParams,
) -> Result<OptResult> {
    if a.n() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: a.n(),
        });
    }
    if start.len() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: start.len(),
        });
    }
    if !(params.step.is_finite() && params.step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: "must be a positive finite number",
        });
    }
    if !(params.grad_tol.is_finite() && params.grad_tol >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "grad_tol",
            reason: "must be a nonnegative finite number",
        });
    }
    if params.max_iter == 0 {
        return Err(Error::InvalidParameter {
            name: "max_iter",
            reason: "need at least one iteration",
        });
    }

    let unit = UnitVector::new(start.to_vec())?;
    if !cone.contains(unit.coords(), DEFAULT_TOL) {
        return Err(Error::InfeasibleStart);
    }
    // One projection clears tiny boundary violations from the
    // normalization; for a contained point it is nearly the identity.
    let zero = vec![0.0; cone.dim()];
    let mut x = match arc_point(cone, unit.coords(), &zero, 0.0) {
        Some(p) => p,
        None => return Err(Error::InfeasibleStart),
    };

    let mut value = a.quad_form(&x);
    let mut iterations = 0u64;
    let mut converged = false;

    for _ in 0..params.max_iter {
        let grad = a.matvec(&x);
        let radial = dot(&grad, &x);
        let g_tan: Vec<f64> = grad
            .iter()
            .zip(&x)
            .map(|(&gi, &xi)| 2.0 * radial.mul_add(-xi, gi))
            .collect();

        // Fixed-point residual at the nominal step length.
        let residual = match arc_point(cone, &x, &g_tan, params.step) {
            Some(probe) => {
                let diff: Vec<f64> = probe.iter().zip(&x).map(|(p, xi)| p - xi).collect();
                norm(&diff) / params.step
            }
            None => f64::INFINITY,
        };
        if residual <= params.grad_tol {
            converged = true;
            break;
        }

        let mut alpha = params.step;
        loop {
            if let Some(candidate) = arc_point(cone, &x, &g_tan, alpha) {
                let cand_value = a.quad_form(&candidate);
                let diff: Vec<f64> =
                    candidate.iter().zip(&x).map(|(c, xi)| c - xi).collect();
                let moved = dot(&diff, &diff);
                if cand_value <= value - 1e-4 / alpha * moved {
                    x = candidate;
                    value = cand_value;
                    break;
                }
            }
            alpha *= 0.5;
            if alpha < 1e-16 {
                return Err(Error::StepUnderflow);
            }
        }
        iterations += 1;
    }

    Ok(OptResult {
        value,
        argpoint: UnitVector::new(x)?,
        iterations,
        converged,
        method: OptMethod::Descent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NcpStatus {
    /// The form is certified strictly copositive, so the cone
    /// complementarity problem with this matrix has a solution for
    /// every right-hand side.
    Guaranteed,
    /// A cap point with a clearly negative value was found; strict
    /// copositivity fails and this criterion establishes nothing.
    NotEstablished,
    /// Neither a certificate above the margin nor a clear violation.
    Inconclusive,
}

/// Report of [`ncp_existence_check`].
#[derive(Debug, Clone, Serialize)]
pub struct NcpReport {
    pub status: NcpStatus,
    /// Best certified lower bound on the cap minimum of the symmetric
    /// part.
    pub lower_bound: f64,
    pub lower_bound_method: &'static str,
    /// Best (smallest) cap value seen by descent; an upper bound on the
    /// cap minimum.
    pub upper_bound: f64,
    pub minimizer: UnitVector,
    pub restarts: u64,
}

const TAG_NCP: u64 = 0x4E;

fn certified_cap_lower_bound(a: &SymMatrix, cone: &Cone) -> (f64, &'static str) {
    let spectral = jacobi_eigen(a).min_value();
    match cone.kind() {
        ConeKind::Orthant { n } => {
            // Drop the positive off-diagonal entries; what remains
            // underestimates the form on the orthant.
            let mut p = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let v = a.get(i, j);
                    p[i * n + j] = if i != j && v > 0.0 { 0.0 } else { v };
                }
            }
            let p = SymMatrix::new(n, p).expect("finite entries");
            let split = jacobi_eigen(&p).min_value();
            if split > spectral {
                (split, "orthant_split")
            } else {
                (spectral, "eigenvalue")
            }
        }
        ConeKind::Lorentz { n } => {
            // f(x) >= mu <Jx, x> + lambda_min(A - mu J) >= lambda_min(A
            // - mu J) on the cap for any mu >= 0; maximize the concave
            // lower bound by ternary search.
            let mut j_diag = vec![-1.0; n];
            j_diag[0] = 1.0;
            let j = SymMatrix::diag(&j_diag).expect("finite entries");
            let g = |mu: f64| jacobi_eigen(&a.add_scaled(&j, -mu)).min_value();
            let mut lo = 0.0f64;
            let mut hi = 2.0 * (1.0 + a.frobenius_norm());
            for _ in 0..120 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if g(m1) < g(m2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let shifted = g(0.5 * (lo + hi));
            if shifted > spectral {
                (shifted, "lorentz_shift")
            } else {
                (spectral, "eigenvalue")
            }
        }
        ConeKind::Polyhedral { .. } => (spectral, "eigenvalue"),
        ConeKind::Rotated { q, base } => {
            let (bound, method) = certified_cap_lower_bound(&a.conjugated(q), base);
            (bound, method)
        }
    }
}

/// Existence criterion for the cone complementarity problem with
/// matrix `M`: find `x` in `K` with `Mx + q` in the dual cone and
/// `<x, Mx + q> = 0`.
///
/// If the quadratic form of `M` is strictly positive on the cap (strict
/// copositivity, a property of the symmetric part, which is what this
/// function takes), a solution exists for every `q`. The check computes
/// a certified lower bound on the cap minimum (spectral bound
/// everywhere; sharpened by the off-diagonal split on the orthant and
/// the shifted-eigenvalue bound on the Lorentz cone) and a descent
/// upper bound from `restarts` sampled starting points.
///
/// - lower bound > `margin`: [`NcpStatus::Guaranteed`];
/// - upper bound < `-margin`: [`NcpStatus::NotEstablished`];
/// - otherwise [`NcpStatus::Inconclusive`].
pub fn ncp_existence_check(
    m: &SymMatrix,
    cone: &Cone,
    margin: f64,
    restarts: u64,
    seed: RngSeed,
) -> Result<NcpReport> {
    if m.n() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: m.n(),
        });
    }
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "margin",
            reason: "must be a nonnegative finite number",
        });
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter {
            name: "restarts",
            reason: "need at least one descent start",
        });
    }

    let (lower_bound, lower_bound_method) = certified_cap_lower_bound(m, cone);

    let mut best: Option<OptResult> = None;
    for i in 0..restarts {
        let start = cone.sample_cap_point(seed.substream(TAG_NCP).substream(i));
        let run = projected_geodesic_descent(m, cone, start.coords(), DescentParams::default());
        let run = match run {
            Ok(r) => r,
            // A start that stalls is not evidence about the minimum;
            // keep the other restarts.
            Err(Error::StepUnderflow) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = best.ok_or(Error::StepUnderflow)?;

    let status = if lower_bound > margin {
        NcpStatus::Guaranteed
    } else if best.value < -margin {
        NcpStatus::NotEstablished
    } else {
        NcpStatus::Inconclusive
    };

    Ok(NcpReport {
        status,
        lower_bound,
        lower_bound_method,
        upper_bound: best.value,
        minimizer: best.argpoint,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::certify;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn sphere_minimum_is_smallest_eigenpair() {
        let a = SymMatrix::diag(&[3.0, 1.0, 2.0]).unwrap();
        let r = min_on_sphere(&a);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.method, OptMethod::Eigen);
        assert_abs_diff_eq!(r.argpoint.get(1), 1.0, epsilon = 1e-12);
        assert!(r.converged);

        let b = SymMatrix::new(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let rb = min_on_sphere(&b);
        assert_abs_diff_eq!(rb.value, 1.0, epsilon = 1e-12);
        // Canonical sign: leading significant coordinate positive.
        assert!(rb.argpoint.get(0) > 0.0);
        assert!(rb.argpoint.get(1) < 0.0);
        assert_abs_diff_eq!(
            b.quad_form(rb.argpoint.coords()),
            rb.value,
            epsilon = 1e-12
        );
    }

    #[test]
    fn certified_extremes_match_the_formulas() {
        let a = SymMatrix::diag(&[1.0, 2.0, 2.0]).unwrap();
        let cone = Cone::lorentz(3).unwrap();
        let verdict = certify(&a, &cone, 1e-9).unwrap();
        let ext = extremize_lorentz_certified(&a, &cone, &verdict).unwrap();
        assert_eq!(ext.min.value, 1.0);
        assert_eq!(ext.min.argpoint.coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(ext.max.value, 1.5);
        assert_eq!(
            ext.max.argpoint.coords(),
            &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]
        );
        assert_eq!(ext.min.method, OptMethod::ClosedForm);
        // The formula values agree with direct evaluation.
        assert_abs_diff_eq!(
            a.quad_form(ext.max.argpoint.coords()),
            ext.max.value,
            epsilon = 1e-15
        );
    }

    #[test]
    fn uncertified_forms_are_rejected() {
        let a = SymMatrix::diag(&[2.0, 1.0, 1.0]).unwrap();
        let cone = Cone::lorentz(3).unwrap();
        let verdict = certify(&a, &cone, 1e-9).unwrap();
        assert!(verdict.is_refuted());
        assert!(matches!(
            extremize_lorentz_certified(&a, &cone, &verdict),
            Err(Error::NotCertified)
        ));
    }

    #[test]
    fn certified_extremes_follow_rotations() {
        let q = crate::linalg::random_orthogonal(3, RngSeed(7));
        let base = Cone::lorentz(3).unwrap();
        let cone = Cone::rotated(q.clone(), base).unwrap();
        // Build the rotated matrix whose reduction is diag(1, 2, 2).
        let d = SymMatrix::diag(&[1.0, 2.0, 2.0]).unwrap();
        let a = d.conjugated(&q.transposed());
        let verdict = certify(&a, &cone, 1e-6).unwrap();
        assert!(verdict.is_certified());
        let ext = extremize_lorentz_certified(&a, &cone, &verdict).unwrap();
        assert_abs_diff_eq!(ext.min.value, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ext.max.value, 1.5, epsilon = 1e-9);
        // The minimizer is the rotated apex direction.
        let apex = q.apply(&[1.0, 0.0, 0.0]);
        let dev: f64 = ext
            .min
            .argpoint
            .coords()
            .iter()
            .zip(&apex)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-9);
        assert!(cone.contains(ext.max.argpoint.coords(), 1e-9));
    }

    #[test]
    fn descent_finds_the_lorentz_minimum() {
        let a = SymMatrix::diag(&[1.0, 2.0, 2.0]).unwrap();
        let cone = Cone::lorentz(3).unwrap();
        let start = [0.8, 0.4, 0.447213595499958]; // inside the cone
        let r =
            projected_geodesic_descent(&a, &cone, &start, DescentParams::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.argpoint.get(0), 1.0, epsilon = 1e-6);
        assert!(r.iterations > 0);
    }

    #[test]
    fn descent_respects_the_orthant_boundary() {
        // Minimum of (x1 - x2)^2 on the orthant cap is 0 on the
        // diagonal; from a boundary start the iterates stay feasible.
        let a = SymMatrix::new(2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        let cone = Cone::orthant(2).unwrap();
        let r = projected_geodesic_descent(&a, &cone, &[1.0, 0.0], DescentParams::default())
            .unwrap();
        assert!(r.converged);
        assert!(r.value.abs() <= 1e-9);
        assert_abs_diff_eq!(r.argpoint.get(0), FRAC_1_SQRT_2, epsilon = 1e-5);
        assert!(cone.contains(r.argpoint.coords(), 1e-12));
    }

    #[test]
    fn descent_converges_immediately_for_constant_forms() {
        let a = SymMatrix::identity(3).scaled(2.0);
        let cone = Cone::lorentz(3).unwrap();
        let r = projected_geodesic_descent(
            &a,
            &cone,
            &[1.0, 0.1, 0.0],
            DescentParams::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn descent_rejects_bad_input() {
        let a = SymMatrix::identity(2);
        let cone = Cone::orthant(2).unwrap();
        assert!(matches!(
            projected_geodesic_descent(&a, &cone, &[-1.0, 0.0], DescentParams::default()),
            Err(Error::InfeasibleStart)
        ));
        assert!(matches!(
            projected_geodesic_descent(&a, &cone, &[0.0, 0.0], DescentParams::default()),
            Err(Error::ZeroVector)
        ));
        let bad = DescentParams {
            step: 0.0,
            ..DescentParams::default()
        };
        assert!(matches!(
            projected_geodesic_descent(&a, &cone, &[1.0, 1.0], bad),
            Err(Error::InvalidParameter { name: "step", .. })
        ));
    }

    #[test]
    fn ncp_guaranteed_by_shifted_bound() {
        // Copositive on the cone but not positive semidefinite: the
        // spectral bound is negative while the shifted bound is 1/4.
        let a = SymMatrix::diag(&[1.0, -0.5, -0.5]).unwrap();
        let cone = Cone::lorentz(3).unwrap();
        let r = ncp_existence_check(&a, &cone, 1e-9, 10, RngSeed(11)).unwrap();
        assert_eq!(r.status, NcpStatus::Guaranteed);
        assert_eq!(r.lower_bound_method, "lorentz_shift");
        assert_abs_diff_eq!(r.lower_bound, 0.25, epsilon = 1e-9);
        // Descent agrees: cap minimum is 1/4 on the boundary circle.
        assert!(r.upper_bound >= r.lower_bound - 1e-8);
        assert_abs_diff_eq!(r.upper_bound, 0.25, epsilon = 1e-6);
    }

    #[test]
    fn ncp_not_established_with_negative_cap_point() {
        let m = SymMatrix::new(2, vec![1.0, -2.0, -2.0, 1.0]).unwrap();
        let cone = Cone::orthant(2).unwrap();
        let r = ncp_existence_check(&m, &cone, 1e-9, 10, RngSeed(11)).unwrap();
        assert_eq!(r.status, NcpStatus::NotEstablished);
        assert!(r.upper_bound <= -0.9);
        assert!(cone.contains(r.minimizer.coords(), 1e-9));
    }

    #[test]
    fn ncp_inconclusive_on_a_boundary_case() {
        // Cap minimum is exactly zero: no strict certificate, no
        // negative witness.
        let m = SymMatrix::new(2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        let cone = Cone::orthant(2).unwrap();
        let r = ncp_existence_check(&m, &cone, 1e-9, 10, RngSeed(4)).unwrap();
        assert_eq!(r.status, NcpStatus::Inconclusive);
        assert!(r.lower_bound <= 1e-9);
        assert!(r.upper_bound.abs() <= 1e-6);
    }

    #[test]
    fn ncp_bounds_are_ordered() {
        let m = SymMatrix::new(3, vec![2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.8])
            .unwrap();
        let cone = Cone::lorentz(3).unwrap();
        let r = ncp_existence_check(&m, &cone, 1e-9, 10, RngSeed(2)).unwrap();
        assert!(r.lower_bound <= r.upper_bound + 1e-9);
        assert_eq!(r.status, NcpStatus::Guaranteed);
    }
}
