//! Proper-cone descriptions and the cap geometry they induce.
//!
//! A [`Cone`] is one of: the nonnegative orthant, the second-order
//! (Lorentz) cone `x_1 >= ||x_tail||`, a pointed cone spanned by
//! explicit generators, or an orthogonal rotation of another cone.
//! Construction enforces the proper-cone contract where it is checkable:
//! generator cones must be pointed (phase-one simplex test), rotations
//! must be orthogonal. Membership, dual membership, projection, and the
//! cap samplers all run in the cone's own coordinates; rotated cones
//! reduce every query through `Q^T`.

mod nnls;
mod simplex;

use std::f64::consts::FRAC_1_SQRT_2;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, standard_normal_vec, Orthogonal, RngSeed, UnitVector};

/// Default membership tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Orthant {
        n: usize,
    },
    Lorentz {
        n: usize,
    },
    /// Generators are stored normalized.
    Polyhedral {
        generators: Vec<Vec<f64>>,
        n: usize,
    },
    Rotated {
        q: Orthogonal,
        base: Box<Cone>,
    },
}

/// Borrowed view of a cone's structure, for callers that dispatch on it.
#[derive(Debug, Clone, Copy)]
pub enum ConeKind<'a> {
    Orthant { n: usize },
    Lorentz { n: usize },
    Polyhedral { generators: &'a [Vec<f64>] },
    Rotated { q: &'a Orthogonal, base: &'a Cone },
}

/// Sub/super relation between a cone and its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualityClass {
    Subdual,
    Superdual,
    Selfdual,
    StronglySuperdual,
    None,
    Unknown,
}

/// Classification of a unit vector against the Lorentz cone by its first
/// coordinate (`InL`/`InMinusL` mean on the respective boundary).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LorentzMembership {
    InL,
    InMinusL,
    InteriorL,
    InteriorMinusL,
    OutsideBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointLocation {
    Interior,
    Boundary,
}

/// A unit vector known to lie in a cone cap, tagged interior/boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    point: UnitVector,
    location: PointLocation,
}

impl ConePoint {
    /// Checks `point` against `cone` at tolerance `tol` and records
    /// whether it is interior.
    pub fn classify(cone: &Cone, point: UnitVector, tol: f64) -> Result<ConePoint> {
        if !cone.contains(point.coords(), tol) {
            return Err(Error::NotInCone);
        }
        let location = if cone.interior_contains(point.coords(), tol) {
            PointLocation::Interior
        } else {
            PointLocation::Boundary
        };
        Ok(ConePoint { point, location })
    }

    pub fn point(&self) -> &UnitVector {
        &self.point
    }

    pub fn location(&self) -> PointLocation {
        self.location
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    kind: Kind,
}

impl Cone {
    pub fn orthant(n: usize) -> Result<Cone> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        Ok(Cone {
            kind: Kind::Orthant { n },
        })
    }

    pub fn lorentz(n: usize) -> Result<Cone> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        Ok(Cone {
            kind: Kind::Lorentz { n },
        })
    }

    /// Cone spanned by `generators` with nonnegative coefficients.
    /// Generators are normalized in storage; zero generators, dimension
    /// mismatches, and non-pointed spans are rejected.
    pub fn polyhedral(generators: Vec<Vec<f64>>) -> Result<Cone> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        let n = generators[0].len();
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let mut normalized = Vec::with_capacity(generators.len());
        for (index, mut g) in generators.into_iter().enumerate() {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
            if !g.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite {
                    context: "cone generator",
                });
            }
            let gn = norm(&g);
            if gn < 1e-12 {
                return Err(Error::ZeroGenerator { index });
            }
            // Skip the division when already unit so that emit/parse
            // cycles are bit-stable.
            if (gn - 1.0).abs() > 1e-12 {
                for x in &mut g {
                    *x /= gn;
                }
            }
            normalized.push(g);
        }
        if !simplex::is_pointed_lp(&normalized, n) {
            return Err(Error::NotPointed);
        }
        Ok(Cone {
            kind: Kind::Polyhedral {
                generators: normalized,
                n,
            },
        })
    }

    /// The image `Q base`.
    pub fn rotated(q: Orthogonal, base: Cone) -> Result<Cone> {
        if q.n() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: q.n(),
            });
        }
        Ok(Cone {
            kind: Kind::Rotated {
                q,
                base: Box::new(base),
            },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            Kind::Orthant { n } | Kind::Lorentz { n } | Kind::Polyhedral { n, .. } => *n,
            Kind::Rotated { base, .. } => base.dim(),
        }
    }

    pub fn kind(&self) -> ConeKind<'_> {
        match &self.kind {
            Kind::Orthant { n } => ConeKind::Orthant { n: *n },
            Kind::Lorentz { n } => ConeKind::Lorentz { n: *n },
            Kind::Polyhedral { generators, .. } => ConeKind::Polyhedral { generators },
            Kind::Rotated { q, base } => ConeKind::Rotated { q, base },
        }
    }

    /// Membership at tolerance `tol`. Orthant and Lorentz use their
    /// defining inequalities relaxed by `tol`; generator cones use the
    /// nonnegative-least-squares distance (so membership below the
    /// solver resolution of about `1e-12` is not decidable).
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(x.len(), self.dim(), "contains: dimension mismatch");
        match &self.kind {
            Kind::Orthant { .. } => x.iter().all(|&v| v >= -tol),
            Kind::Lorentz { .. } => x[0] >= norm(&x[1..]) - tol,
            Kind::Polyhedral { generators, .. } => {
                nnls::project_nnls(generators, x).distance <= tol
            }
            Kind::Rotated { q, base } => base.contains(&q.apply_transpose(x), tol),
        }
    }

    /// Strict membership with margin `tol`. For generator cones the test
    /// probes the `2n` points `x +- h e_i` (`h = max(tol, 1e-12) *
    /// (1 + ||x||)`): the cross-polytope they span contains a ball
    /// around `x`, so all probes inside certifies interiority at radius
    /// `h / sqrt(n)`.
    pub fn interior_contains(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(x.len(), self.dim(), "interior_contains: dimension mismatch");
        match &self.kind {
            Kind::Orthant { .. } => x.iter().all(|&v| v > tol),
            Kind::Lorentz { .. } => x[0] - norm(&x[1..]) > tol,
            Kind::Polyhedral { generators, .. } => {
                let h = tol.max(1e-12) * (1.0 + norm(x));
                let accept = (h * 1e-3).max(5e-13 * (1.0 + norm(x)));
                let mut probe = x.to_vec();
                for i in 0..x.len() {
                    for sign in [1.0f64, -1.0] {
                        probe[i] = sign.mul_add(h, x[i]);
                        let d = nnls::project_nnls(generators, &probe).distance;
                        if d > accept {
                            return false;
                        }
                    }
                    probe[i] = x[i];
                }
                true
            }
            Kind::Rotated { q, base } => base.interior_contains(&q.apply_transpose(x), tol),
        }
    }

    /// Membership in the dual cone `K* = {y : <x, y> >= 0 for all x in K}`.
    pub fn dual_contains(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(x.len(), self.dim(), "dual_contains: dimension mismatch");
        match &self.kind {
            // Orthant and Lorentz cones are self-dual.
            Kind::Orthant { .. } | Kind::Lorentz { .. } => self.contains(x, tol),
            Kind::Polyhedral { generators, .. } => {
                generators.iter().all(|g| dot(g, x) >= -tol)
            }
            Kind::Rotated { q, base } => base.dual_contains(&q.apply_transpose(x), tol),
        }
    }

    /// Strict membership in the dual cone. The dual of a generator cone
    /// has the explicit facet description `{v : <g_i, v> >= 0}`, so its
    /// interior is exactly the strict system; self-dual cones defer to
    /// their own interior test.
    pub fn dual_interior_contains(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(
            x.len(),
            self.dim(),
            "dual_interior_contains: dimension mismatch"
        );
        match &self.kind {
            Kind::Orthant { .. } | Kind::Lorentz { .. } => self.interior_contains(x, tol),
            Kind::Polyhedral { generators, .. } => {
                generators.iter().all(|g| dot(g, x) > tol)
            }
            Kind::Rotated { q, base } => {
                base.dual_interior_contains(&q.apply_transpose(x), tol)
            }
        }
    }

    /// Euclidean projection onto the cone.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "project: dimension mismatch");
        match &self.kind {
            Kind::Orthant { .. } => x.iter().map(|&v| v.max(0.0)).collect(),
            Kind::Lorentz { .. } => {
                let s = x[0];
                let tail = &x[1..];
                let nt = norm(tail);
                if nt <= -s {
                    vec![0.0; x.len()]
                } else if nt <= s {
                    x.to_vec()
                } else {
                    // Second-order cone closed form: scale onto the
                    // boundary ray through (||tail||, tail).
                    let alpha = 0.5 * (s + nt);
                    let mut out = Vec::with_capacity(x.len());
                    out.push(alpha);
                    for &v in tail {
                        out.push(alpha * (v / nt));
                    }
                    out
                }
            }
            Kind::Polyhedral { generators, .. } => nnls::project_nnls(generators, x).point,
            Kind::Rotated { q, base } => q.apply(&base.project(&q.apply_transpose(x))),
        }
    }

    /// Proper-cone pointedness. Construction already enforces this for
    /// generator cones; the check re-runs the underlying test.
    pub fn is_pointed(&self) -> bool {
        match &self.kind {
            Kind::Orthant { .. } | Kind::Lorentz { .. } => true,
            Kind::Polyhedral { generators, n } => simplex::is_pointed_lp(generators, *n),
            Kind::Rotated { base, .. } => base.is_pointed(),
        }
    }

    /// Relation to the dual cone. Orthant and Lorentz cones are
    /// self-dual. A generator cone is subdual (`K` contained in `K*`)
    /// exactly when its normalized Gram matrix is entrywise nonnegative;
    /// without a facet description nothing more is decided, so other
    /// generator cones report `Unknown`. Rotation preserves the class.
    pub fn duality_class(&self) -> DualityClass {
        match &self.kind {
            Kind::Orthant { .. } | Kind::Lorentz { .. } => DualityClass::Selfdual,
            Kind::Polyhedral { generators, .. } => {
                let subdual = generators.iter().enumerate().all(|(i, gi)| {
                    generators[i..].iter().all(|gj| dot(gi, gj) >= -1e-12)
                });
                if subdual {
                    DualityClass::Subdual
                } else {
                    DualityClass::Unknown
                }
            }
            Kind::Rotated { base, .. } => base.duality_class(),
        }
    }

    /// Draws a point of `K` intersected with the unit sphere. The draw is
    /// a deterministic function of `(cone, seed)`:
    /// - orthant: componentwise `|N(0,1)|`, normalized;
    /// - Lorentz: axis angle `phi` uniform on `[0, pi/4)` with a uniform
    ///   tail direction;
    /// - generators: a uniform-coefficient combination, normalized;
    /// - rotated: the base draw mapped through `Q`.
    pub fn sample_cap_point(&self, seed: RngSeed) -> UnitVector {
        let mut rng = seed.rng();
        self.sample_cap_point_with(&mut rng)
    }

    pub(crate) fn sample_cap_point_with(&self, rng: &mut ChaCha12Rng) -> UnitVector {
        let n = self.dim();
        match &self.kind {
            Kind::Orthant { .. } => loop {
                let z: Vec<f64> = standard_normal_vec(rng, n).iter().map(|v| v.abs()).collect();
                if norm(&z) >= 1e-8 {
                    return UnitVector::new(z).expect("finite nonzero draw");
                }
            },
            Kind::Lorentz { .. } => {
                if n == 1 {
                    return UnitVector::from_unit_unchecked(vec![1.0]);
                }
                let phi: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_4);
                let dir = loop {
                    let z = standard_normal_vec(rng, n - 1);
                    if norm(&z) >= 1e-8 {
                        break UnitVector::new(z).expect("finite nonzero draw");
                    }
                };
                let mut coords = Vec::with_capacity(n);
                coords.push(phi.cos());
                let s = phi.sin();
                coords.extend(dir.coords().iter().map(|d| s * d));
                UnitVector::from_unit_unchecked(coords)
            }
            Kind::Polyhedral { generators, .. } => loop {
                let mut p = vec![0.0; n];
                for g in generators {
                    let w: f64 = rng.random_range(0.0..1.0);
                    for k in 0..n {
                        p[k] = w.mul_add(g[k], p[k]);
                    }
                }
                if norm(&p) >= 1e-8 {
                    return UnitVector::new(p).expect("finite nonzero draw");
                }
            },
            Kind::Rotated { q, base } => {
                let y = base.sample_cap_point_with(rng);
                UnitVector::new(q.apply(y.coords())).expect("rotation preserves norm")
            }
        }
    }

    /// Draws `(x, y)` with `x` in `K`, `y` in `K*`, both unit, and
    /// `|<x, y>| <= 1e-10`:
    /// - orthant: disjoint random supports;
    /// - Lorentz: the boundary pair `x = (1, u)/sqrt(2)`,
    ///   `y = (1, -u)/sqrt(2)` for a random unit tail `u`;
    /// - generators: `x` a random generator ray, `y` found in the dual
    ///   face orthogonal to it by alternating projections (degenerate
    ///   faces are resampled; fails after 1000 rejections);
    /// - rotated: the base pair mapped through `Q`.
    pub fn sample_complementary_pair(&self, seed: RngSeed) -> Result<(UnitVector, UnitVector)> {
        let mut rng = seed.rng();
        self.sample_complementary_pair_with(&mut rng)
    }

    fn sample_complementary_pair_with(
        &self,
        rng: &mut ChaCha12Rng,
    ) -> Result<(UnitVector, UnitVector)> {
        let n = self.dim();
        match &self.kind {
            Kind::Orthant { .. } => {
                if n < 2 {
                    return Err(Error::DimensionTooSmall { min: 2, got: n });
                }
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                let k = rng.random_range(1..n);
                let (support_x, support_y) = idx.split_at(k);
                let mut x = vec![0.0; n];
                let mut y = vec![0.0; n];
                loop {
                    for &i in support_x {
                        x[i] = rng.sample::<f64, _>(rand_distr::StandardNormal).abs();
                    }
                    if norm(&x) >= 1e-8 {
                        break;
                    }
                }
                loop {
                    for &i in support_y {
                        y[i] = rng.sample::<f64, _>(rand_distr::StandardNormal).abs();
                    }
                    if norm(&y) >= 1e-8 {
                        break;
                    }
                }
                Ok((UnitVector::new(x)?, UnitVector::new(y)?))
            }
            Kind::Lorentz { .. } => {
                if n < 2 {
                    return Err(Error::DimensionTooSmall { min: 2, got: n });
                }
                let dir = loop {
                    let z = standard_normal_vec(rng, n - 1);
                    if norm(&z) >= 1e-8 {
                        break UnitVector::new(z).expect("finite nonzero draw");
                    }
                };
                let mut x = Vec::with_capacity(n);
                let mut y = Vec::with_capacity(n);
                x.push(FRAC_1_SQRT_2);
                y.push(FRAC_1_SQRT_2);
                for d in dir.coords() {
                    x.push(FRAC_1_SQRT_2 * d);
                    y.push(-(FRAC_1_SQRT_2 * d));
                }
                Ok((
                    UnitVector::from_unit_unchecked(x),
                    UnitVector::from_unit_unchecked(y),
                ))
            }
            Kind::Polyhedral { generators, .. } => {
                for _attempt in 0..1000 {
                    let gi = &generators[rng.random_range(0..generators.len())];
                    let mut v = standard_normal_vec(rng, n);
                    let mut converged = false;
                    for _ in 0..200 {
                        // Alternate: hyperplane orthogonal to the ray,
                        // then the dual cone via the Moreau identity
                        // P_{K*}(v) = v + P_K(-v).
                        let c = dot(&v, gi);
                        for k in 0..n {
                            v[k] = (-c).mul_add(gi[k], v[k]);
                        }
                        let neg: Vec<f64> = v.iter().map(|t| -t).collect();
                        let p = nnls::project_nnls(generators, &neg).point;
                        for k in 0..n {
                            v[k] += p[k];
                        }
                        let nv = norm(&v);
                        if nv < 1e-8 {
                            break;
                        }
                        let unit: Vec<f64> = v.iter().map(|t| t / nv).collect();
                        let ortho = dot(&unit, gi).abs() <= 1e-12;
                        let dual = generators.iter().all(|g| dot(g, &unit) >= -1e-12);
                        if ortho && dual {
                            v = unit;
                            converged = true;
                            break;
                        }
                    }
                    if converged {
                        return Ok((
                            UnitVector::from_unit_unchecked(gi.clone()),
                            UnitVector::from_unit_unchecked(v),
                        ));
                    }
                }
                Err(Error::SamplerExhausted { attempts: 1000 })
            }
            Kind::Rotated { q, base } => {
                let (x, y) = base.sample_complementary_pair_with(rng)?;
                Ok((
                    UnitVector::new(q.apply(x.coords()))?,
                    UnitVector::new(q.apply(y.coords()))?,
                ))
            }
        }
    }
}

/// The boundary pair `x = (e1 + e_axis)/sqrt(2)`, `y = (e1 - e_axis)/sqrt(2)`
/// of the Lorentz cone (`1 <= axis < n`). Both lie on the cone boundary
/// and are exactly orthogonal in coordinates.
pub fn lorentz_axis_pair(n: usize, axis: usize) -> (UnitVector, UnitVector) {
    assert!(n >= 2 && axis >= 1 && axis < n, "lorentz_axis_pair: bad axis");
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    x[0] = FRAC_1_SQRT_2;
    y[0] = FRAC_1_SQRT_2;
    x[axis] = FRAC_1_SQRT_2;
    y[axis] = -FRAC_1_SQRT_2;
    (
        UnitVector::from_unit_unchecked(x),
        UnitVector::from_unit_unchecked(y),
    )
}

const LORENTZ_BAND: f64 = 1e-12;

/// Classifies a unit vector against the Lorentz cone purely by its first
/// coordinate: on the unit sphere, `y` lies in `L` iff `y_1 >= 1/sqrt(2)`
/// and in `-L` iff `y_1 <= -1/sqrt(2)`, with the interior strict. Points
/// within `1e-12` of the threshold report the boundary variant.
pub fn lorentz_unit_membership(y: &UnitVector) -> LorentzMembership {
    let y1 = y.get(0);
    let d_plus = y1 - FRAC_1_SQRT_2;
    let d_minus = y1 + FRAC_1_SQRT_2;
    if d_plus > LORENTZ_BAND {
        LorentzMembership::InteriorL
    } else if d_plus.abs() <= LORENTZ_BAND {
        LorentzMembership::InL
    } else if d_minus < -LORENTZ_BAND {
        LorentzMembership::InteriorMinusL
    } else if d_minus.abs() <= LORENTZ_BAND {
        LorentzMembership::InMinusL
    } else {
        LorentzMembership::OutsideBoth
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ConeSpec {
    Orthant { n: usize },
    Lorentz { n: usize },
    Polyhedral { generators: Vec<Vec<f64>> },
    Rotated { q: Vec<Vec<f64>>, base: Box<ConeSpec> },
}

fn cone_to_spec(cone: &Cone) -> ConeSpec {
    match &cone.kind {
        Kind::Orthant { n } => ConeSpec::Orthant { n: *n },
        Kind::Lorentz { n } => ConeSpec::Lorentz { n: *n },
        Kind::Polyhedral { generators, .. } => ConeSpec::Polyhedral {
            generators: generators.clone(),
        },
        Kind::Rotated { q, base } => ConeSpec::Rotated {
            q: (0..q.n())
                .map(|i| (0..q.n()).map(|j| q.get(i, j)).collect())
                .collect(),
            base: Box::new(cone_to_spec(base)),
        },
    }
}

fn spec_to_cone(spec: ConeSpec) -> Result<Cone> {
    match spec {
        ConeSpec::Orthant { n } => Cone::orthant(n),
        ConeSpec::Lorentz { n } => Cone::lorentz(n),
        ConeSpec::Polyhedral { generators } => Cone::polyhedral(generators),
        ConeSpec::Rotated { q, base } => {
            let base = spec_to_cone(*base)?;
            let n = q.len();
            let mut entries = Vec::with_capacity(n * n);
            for row in &q {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: row.len(),
                    });
                }
                entries.extend_from_slice(row);
            }
            Cone::rotated(Orthogonal::new(n, entries)?, base)
        }
    }
}

/// Parses the cone JSON format, e.g. `{"type":"lorentz","n":3}` or
/// `{"type":"rotated","q":[[...]],"base":{...}}`. All construction
/// validation applies (pointedness, orthogonality, dimensions).
pub fn parse_cone_json(text: &str) -> Result<Cone> {
    let spec: ConeSpec = serde_json::from_str(text).map_err(|e| Error::ConeParse {
        msg: e.to_string(),
    })?;
    spec_to_cone(spec)
}

/// Emits the cone JSON format (generators appear normalized, as stored).
pub fn format_cone_json(cone: &Cone) -> String {
    serde_json::to_string(&cone_to_spec(cone)).expect("cone spec serializes")
}
