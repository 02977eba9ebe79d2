//! Convexity deciders, sampled verifiers, and related operator checks.
//!
//! Everything here answers questions about the quadratic form
//! `f(x) = <Ax, x>` restricted to a cone cap. The exact deciders
//! ([`certify`], [`certify_orthant`], [`certify_lorentz`]) return a
//! [`Verdict`]: either a structural [`Certificate`] that implies
//! convexity, a concrete [`Witness`] pair refuting it, or an honest
//! `inconclusive`. The sampled verifiers ([`verify_prop3`],
//! [`verify_prop4`], [`verify_prop2iii`]) test necessary inequalities at
//! random cap points; they can refute with a witness but never certify.

mod certify;
mod props;
mod verify;

pub use certify::{certify, certify_lorentz, certify_orthant};
pub use props::{
    check_prop5_consequences, has_kz_property, is_copositive, is_lyapunov_like, is_z_matrix,
    psd_check, CapValue, CheckMethod, CopositivityReport, CopositivityStatus, KzReport,
    PairValue, Prop5Item, Prop5Report,
};
pub use verify::{verify_detailed, verify_prop2iii, verify_prop3, verify_prop4, SampledRun};

use serde::Serialize;

use crate::linalg::UnitVector;

/// The three-way outcome of a convexity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Certified,
    Refuted,
    Inconclusive,
}

/// Structural certificate for convexity on a cap.
///
/// On the orthant the certified structure is `A = lambda I` (`a` is
/// absent); on the Lorentz cone it is `A = diag(a, lambda I)` with
/// `lambda >= a`. Either structure makes `f` convex along every minimal
/// geodesic of the cap, so the certificate is self-contained: it can be
/// checked against the matrix by inspection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub lambda: f64,
}

/// Which sampled inequality a witness violates.
///
/// - `Prop3`: `f(x) >= f(y)` for `y` in the cap and unit `x` orthogonal
///   to `y`;
/// - `Prop4`: `(f(x) + f(y)) <x, y> >= 2 <Ax, y>` for cap points `x`, `y`;
/// - `Prop2iii`: the `Prop3` inequality restricted to interior `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessCriterion {
    #[serde(rename = "prop3")]
    Prop3,
    #[serde(rename = "prop4")]
    Prop4,
    #[serde(rename = "prop2iii")]
    Prop2iii,
}

/// A concrete pair of points violating one of the necessary
/// inequalities, with both sides evaluated. `violation = rhs - lhs` is
/// positive and the inequality `lhs >= rhs` is the one that failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub criterion: WitnessCriterion,
    pub x: UnitVector,
    pub y: UnitVector,
    pub lhs: f64,
    pub rhs: f64,
    pub violation: f64,
}

impl Witness {
    pub fn new(
        criterion: WitnessCriterion,
        x: UnitVector,
        y: UnitVector,
        lhs: f64,
        rhs: f64,
    ) -> Witness {
        Witness {
            criterion,
            x,
            y,
            lhs,
            rhs,
            violation: rhs - lhs,
        }
    }
}

/// Outcome of a decider or verifier run.
///
/// Invariants enforced by the constructors: `certified` carries a
/// certificate and no witness, `refuted` carries a witness and no
/// certificate, `inconclusive` carries neither. `samples_checked` is 0
/// for the exact deciders. `worst_margin` is the minimum margin seen by
/// a sampled run (negative margins are violations).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    samples_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_margin: Option<f64>,
}

impl Verdict {
    pub fn certified(certificate: Certificate) -> Verdict {
        Verdict {
            status: VerdictStatus::Certified,
            certificate: Some(certificate),
            witness: None,
            samples_checked: 0,
            worst_margin: None,
        }
    }

    pub fn refuted(witness: Witness) -> Verdict {
        Verdict {
            status: VerdictStatus::Refuted,
            certificate: None,
            witness: Some(witness),
            samples_checked: 0,
            worst_margin: None,
        }
    }

    pub fn refuted_sampled(witness: Witness, samples_checked: u64, worst_margin: f64) -> Verdict {
        Verdict {
            status: VerdictStatus::Refuted,
            certificate: None,
            witness: Some(witness),
            samples_checked,
            worst_margin: Some(worst_margin),
        }
    }

    pub fn inconclusive(samples_checked: u64, worst_margin: Option<f64>) -> Verdict {
        Verdict {
            status: VerdictStatus::Inconclusive,
            certificate: None,
            witness: None,
            samples_checked,
            worst_margin,
        }
    }

    pub fn status(&self) -> VerdictStatus {
        self.status
    }

    pub fn is_certified(&self) -> bool {
        self.status == VerdictStatus::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == VerdictStatus::Refuted
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn samples_checked(&self) -> u64 {
        self.samples_checked
    }

    pub fn worst_margin(&self) -> Option<f64> {
        self.worst_margin
    }
}

fn validate_tol(tol: f64) -> crate::error::Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(crate::error::Error::InvalidParameter {
            name: "tol",
            reason: "must be finite and nonnegative",
        });
    }
    Ok(())
}
