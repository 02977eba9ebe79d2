//! Operator properties tied to cap convexity: order-theoretic sign
//! conditions on complementary pairs, copositivity, and positive
//! semidefiniteness.

use rayon::prelude::*;

use crate::cones::{lorentz_axis_pair, Cone, ConeKind, DualityClass};
use crate::error::{Error, Result};
use crate::linalg::{
    jacobi_eigen, sample_orthogonal_unit_with, RngSeed, SymMatrix, UnitVector,
};
use serde::Serialize;

use super::validate_tol;

const TAG_KZ: u64 = 0x4B;
const TAG_COPOSITIVE: u64 = 0x43;
const TAG_P5_COMPLEMENTARY: u64 = 0x51;
const TAG_P5_INTERIOR: u64 = 0x52;

/// Tolerance for the exact structural reductions (orthant pair checks
/// reduce to entrywise sign conditions).
const EXACT_STRUCT_TOL: f64 = 1e-12;

/// Entrywise Z-matrix test: every off-diagonal entry at most `tol`.
pub fn is_z_matrix(a: &SymMatrix, tol: f64) -> bool {
    let n = a.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && a.get(i, j) > tol {
                return false;
            }
        }
    }
    true
}

/// Whether the smallest eigenvalue is at least `-tol`.
pub fn psd_check(a: &SymMatrix, tol: f64) -> bool {
    jacobi_eigen(a).min_value() >= -tol
}

/// How a property report reached its conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    /// Decided by a structural reduction; `holds` is a theorem about
    /// the matrix.
    Exact,
    /// Decided by sampling; `holds` means no violation was found.
    Sampled,
}

/// One evaluated pair `(x, y)` with `value = <Ax, y>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairValue {
    pub x: UnitVector,
    pub y: UnitVector,
    pub value: f64,
}

/// Report for the complementary-pair sign checks.
///
/// The property under test quantifies over complementary pairs: `x` in
/// `K`, `y` in `K*`, `<x, y> = 0`. The one-sided form bounds `<Ax, y>`
/// above by zero; the two-sided form forces it to vanish.
#[derive(Debug, Clone, Serialize)]
pub struct KzReport {
    pub property: &'static str,
    pub method: CheckMethod,
    pub holds: bool,
    pub pairs_checked: u64,
    /// Largest `<Ax, y>` over the checked pairs for the one-sided
    /// property, largest `|<Ax, y>|` for the two-sided one; for the
    /// exact orthant reduction, the corresponding off-diagonal extreme.
    pub worst_value: f64,
    /// On the Lorentz cone, the deterministic boundary pairs
    /// `(e_1 +- e_i)/sqrt(2)` are always evaluated and recorded here,
    /// before any sampled pairs.
    pub canonical_pairs: Vec<PairValue>,
}

fn offdiag_extreme(a: &SymMatrix, absolute: bool) -> f64 {
    let n = a.n();
    let mut worst = f64::NEG_INFINITY;
    if n == 1 {
        return 0.0;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = if absolute { a.get(i, j).abs() } else { a.get(i, j) };
                worst = worst.max(v);
            }
        }
    }
    worst
}

fn kz_like(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
    two_sided: bool,
) -> Result<KzReport> {
    validate_tol(tol)?;
    if a.n() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: a.n(),
        });
    }
    let property = if two_sided { "lyapunov_like" } else { "kz" };

    match cone.kind() {
        // On the orthant, complementary pairs have disjoint supports, so
        // <Ax, y> ranges over nonnegative combinations of off-diagonal
        // entries: the one-sided property is the Z-matrix condition and
        // the two-sided one forces a diagonal matrix.
        ConeKind::Orthant { .. } => {
            let worst = offdiag_extreme(a, two_sided);
            Ok(KzReport {
                property,
                method: CheckMethod::Exact,
                holds: worst <= EXACT_STRUCT_TOL,
                pairs_checked: 0,
                worst_value: worst,
                canonical_pairs: Vec::new(),
            })
        }
        ConeKind::Rotated { q, base } => {
            let mut report = kz_like(&a.conjugated(q), base, samples, tol, seed, two_sided)?;
            // Map recorded pairs back to the outer coordinates; the
            // decision fields are carried from the reduced problem.
            for pair in &mut report.canonical_pairs {
                let x = UnitVector::new(q.apply(pair.x.coords()))?;
                let y = UnitVector::new(q.apply(pair.y.coords()))?;
                pair.value = a.bilinear(x.coords(), y.coords());
                pair.x = x;
                pair.y = y;
            }
            Ok(report)
        }
        ConeKind::Lorentz { .. } | ConeKind::Polyhedral { .. } => {
            let canonical_pairs: Vec<PairValue> = match cone.kind() {
                ConeKind::Lorentz { n } if n >= 2 => (1..n)
                    .map(|i| {
                        let (x, y) = lorentz_axis_pair(n, i);
                        let value = a.bilinear(x.coords(), y.coords());
                        PairValue { x, y, value }
                    })
                    .collect(),
                _ => Vec::new(),
            };
            if samples == 0 && canonical_pairs.is_empty() {
                return Err(Error::InvalidParameter {
                    name: "samples",
                    reason: "need at least one pair to check",
                });
            }
            let sampled: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let (x, y) =
                        cone.sample_complementary_pair(seed.substream(TAG_KZ).substream(i))?;
                    Ok(a.bilinear(x.coords(), y.coords()))
                })
                .collect::<Result<Vec<f64>>>()?;
            let fold = |acc: f64, v: f64| {
                let v = if two_sided { v.abs() } else { v };
                acc.max(v)
            };
            let worst = canonical_pairs
                .iter()
                .map(|p| p.value)
                .chain(sampled.iter().copied())
                .fold(f64::NEG_INFINITY, fold);
            Ok(KzReport {
                property,
                method: CheckMethod::Sampled,
                holds: worst <= tol,
                pairs_checked: samples + canonical_pairs.len() as u64,
                worst_value: worst,
                canonical_pairs,
            })
        }
    }
}

/// Checks `<Ax, y> <= 0` over complementary pairs (`x` in `K`, `y` in
/// `K*`, `<x, y> = 0`).
///
/// Exact on the orthant (equivalent to the Z-matrix sign pattern);
/// sampled elsewhere, with the deterministic boundary pairs always
/// included on the Lorentz cone. For rotated cones the decision is made
/// on the reduced problem `Q^T A Q` over the base cone and recorded
/// pairs are mapped back.
pub fn has_kz_property(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<KzReport> {
    kz_like(a, cone, samples, tol, seed, false)
}

/// Checks `<Ax, y> = 0` over complementary pairs, i.e. the one-sided
/// property for both `A` and `-A`. Exact on the orthant (forces a
/// diagonal matrix); sampled elsewhere.
pub fn is_lyapunov_like(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<KzReport> {
    kz_like(a, cone, samples, tol, seed, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CopositivityStatus {
    Certified,
    Refuted,
    Inconclusive,
}

/// A cap point with its quadratic-form value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapValue {
    pub x: UnitVector,
    pub value: f64,
}

/// Report of a copositivity check (`f >= 0` on the cone).
#[derive(Debug, Clone, Serialize)]
pub struct CopositivityReport {
    pub status: CopositivityStatus,
    pub method: &'static str,
    pub samples_checked: u64,
    /// Smallest sampled cap value.
    pub min_value_sampled: f64,
    /// Lorentz certificate: the shift `mu >= 0` with `A - mu J` positive
    /// semidefinite, `J = diag(1, -1, ..., -1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    /// Smallest eigenvalue of the certified matrix (`A - mu J` on the
    /// Lorentz cone, the nonpositive-off-diagonal part on the orthant).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_min_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CapValue>,
}

/// Checks whether `f(x) = <Ax, x>` is nonnegative on the cone.
///
/// A sampled screen over cap points refutes when it finds `f < -tol`.
/// Otherwise a cone-specific certificate is attempted:
///
/// - orthant: split `A = P + N` with `N` the positive off-diagonal
///   parts; if `P` is positive semidefinite then `f = x^T P x + x^T N x
///   >= 0` on the orthant;
/// - Lorentz: copositivity is equivalent to the existence of `mu >= 0`
///   with `A - mu J` positive semidefinite (`J = diag(1, -1, ..., -1)`),
///   because the cone union its negation is the set where `<Jx, x> >=
///   0` and `f` is even; `mu -> lambda_min(A - mu J)` is concave, so a
///   ternary search over `[0, 2(1 + ||A||_F)]` finds its maximum;
/// - generator cones: no certificate is attempted (the sampled screen
///   is the only refutation route), so surviving the screen reports
///   inconclusive;
/// - rotated cones reduce to `Q^T A Q` on the base, witnesses mapped
///   back and re-evaluated.
pub fn is_copositive(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<CopositivityReport> {
    validate_tol(tol)?;
    if a.n() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: a.n(),
        });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "need at least one sample",
        });
    }

    if let ConeKind::Rotated { q, base } = cone.kind() {
        let mut report = is_copositive(&a.conjugated(q), base, samples, tol, seed)?;
        if let Some(w) = report.witness.take() {
            let x = UnitVector::new(q.apply(w.x.coords()))?;
            let value = a.quad_form(x.coords());
            report.witness = Some(CapValue { x, value });
        }
        return Ok(report);
    }

    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let y = cone.sample_cap_point(seed.substream(TAG_COPOSITIVE).substream(i));
            a.quad_form(y.coords())
        })
        .collect();
    let mut min_index = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if v < values[min_index] {
            min_index = i;
        }
    }
    let min_value_sampled = values[min_index];

    if min_value_sampled < -tol {
        let x = cone.sample_cap_point(seed.substream(TAG_COPOSITIVE).substream(min_index as u64));
        return Ok(CopositivityReport {
            status: CopositivityStatus::Refuted,
            method: "sampled",
            samples_checked: samples,
            min_value_sampled,
            shift: None,
            certified_min_eigenvalue: None,
            witness: Some(CapValue {
                x,
                value: min_value_sampled,
            }),
        });
    }

    match cone.kind() {
        ConeKind::Orthant { n } => {
            let mut p = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let v = a.get(i, j);
                    p[i * n + j] = if i != j && v > 0.0 { 0.0 } else { v };
                }
            }
            let p = SymMatrix::new(n, p).expect("finite entries");
            let min_eig = jacobi_eigen(&p).min_value();
            let scale = 1.0 + a.frobenius_norm();
            if min_eig >= -1e-12 * scale {
                Ok(CopositivityReport {
                    status: CopositivityStatus::Certified,
                    method: "orthant_split",
                    samples_checked: samples,
                    min_value_sampled,
                    shift: None,
                    certified_min_eigenvalue: Some(min_eig),
                    witness: None,
                })
            } else {
                Ok(CopositivityReport {
                    status: CopositivityStatus::Inconclusive,
                    method: "orthant_split",
                    samples_checked: samples,
                    min_value_sampled,
                    shift: None,
                    certified_min_eigenvalue: None,
                    witness: None,
                })
            }
        }
        ConeKind::Lorentz { n } => {
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
            let mu = 0.5 * (lo + hi);
            let best = g(mu);
            if best >= -tol.max(1e-12 * (1.0 + a.frobenius_norm())) {
                Ok(CopositivityReport {
                    status: CopositivityStatus::Certified,
                    method: "lorentz_shift",
                    samples_checked: samples,
                    min_value_sampled,
                    shift: Some(mu),
                    certified_min_eigenvalue: Some(best),
                    witness: None,
                })
            } else {
                // The shift search is exact for this cone: a negative
                // optimum means f really does go negative somewhere on
                // the cone, but without a located point the honest
                // status is inconclusive rather than refuted.
                Ok(CopositivityReport {
                    status: CopositivityStatus::Inconclusive,
                    method: "lorentz_shift",
                    samples_checked: samples,
                    min_value_sampled,
                    shift: None,
                    certified_min_eigenvalue: Some(best),
                    witness: None,
                })
            }
        }
        ConeKind::Polyhedral { .. } => Ok(CopositivityReport {
            status: CopositivityStatus::Inconclusive,
            method: "sampled",
            samples_checked: samples,
            min_value_sampled,
            shift: None,
            certified_min_eigenvalue: None,
            witness: None,
        }),
        ConeKind::Rotated { .. } => unreachable!("handled above"),
    }
}

/// One quantified consequence, with the number of draws that met its
/// precondition and the largest deviation among them.
#[derive(Debug, Clone, Serialize)]
pub struct Prop5Item {
    pub label: &'static str,
    pub samples: u64,
    pub admissible: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

/// Report from [`check_prop5_consequences`].
#[derive(Debug, Clone, Serialize)]
pub struct Prop5Report {
    pub duality: DualityClass,
    pub items: Vec<Prop5Item>,
}

/// Measures consequences of cap convexity that involve the dual cone.
///
/// Requires a cone comparable with its dual (self-dual, or a generator
/// cone certified subdual by its Gram matrix); anything else errors with
/// `UnsupportedCone`.
///
/// - `complementary_equality`: for complementary boundary pairs, a form
///   convex on the cap takes equal values at both points; the item
///   records `|f(x) - f(y)|`.
/// - `interior_positive` / `interior_negative`: for a cap point `y` and
///   unit `x` orthogonal to `y`, the draw is admissible when `x`
///   (respectively `-x`) lies interior to the dual cone, and the item
///   records `|<Ax, y>|`. Interior dual vectors pair strictly
///   positively with every nonzero cone vector, so orthogonal draws are
///   never admissible and these items report zero admissible samples;
///   they are kept because they document that emptiness.
pub fn check_prop5_consequences(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<Prop5Report> {
    validate_tol(tol)?;
    if a.n() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: a.n(),
        });
    }
    if cone.dim() < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            got: cone.dim(),
        });
    }
    let duality = cone.duality_class();
    if !matches!(duality, DualityClass::Selfdual | DualityClass::Subdual) {
        return Err(Error::UnsupportedCone {
            reason: "needs a cone comparable with its dual (self-dual or Gram-certified subdual)",
        });
    }

    let complementary: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (x, y) = cone
                .sample_complementary_pair(seed.substream(TAG_P5_COMPLEMENTARY).substream(i))?;
            Ok((a.quad_form(x.coords()) - a.quad_form(y.coords())).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let comp_max = complementary.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let interior: Vec<(Option<f64>, Option<f64>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.substream(TAG_P5_INTERIOR).substream(i).rng();
            let y = cone.sample_cap_point_with(&mut rng);
            let x = sample_orthogonal_unit_with(&y, &mut rng);
            let value = a.bilinear(x.coords(), y.coords()).abs();
            let pos = cone
                .dual_interior_contains(x.coords(), 1e-12)
                .then_some(value);
            let neg = cone
                .dual_interior_contains(x.negated().coords(), 1e-12)
                .then_some(value);
            (pos, neg)
        })
        .collect();

    let reduce = |pick: fn(&(Option<f64>, Option<f64>)) -> Option<f64>| {
        let mut count = 0u64;
        let mut max_dev: Option<f64> = None;
        for entry in &interior {
            if let Some(v) = pick(entry) {
                count += 1;
                max_dev = Some(max_dev.map_or(v, |m: f64| m.max(v)));
            }
        }
        (count, max_dev)
    };
    let (pos_count, pos_max) = reduce(|e| e.0);
    let (neg_count, neg_max) = reduce(|e| e.1);

    Ok(Prop5Report {
        duality,
        items: vec![
            Prop5Item {
                label: "complementary_equality",
                samples,
                admissible: samples,
                max_deviation: (samples > 0).then_some(comp_max),
            },
            Prop5Item {
                label: "interior_positive",
                samples,
                admissible: pos_count,
                max_deviation: pos_max,
            },
            Prop5Item {
                label: "interior_negative",
                samples,
                admissible: neg_count,
                max_deviation: neg_max,
            },
        ],
    })
}
