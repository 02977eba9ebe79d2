//! Convexity certification for quadratic forms on cone caps.
//!
//! The objects here are a symmetric matrix `A`, the quadratic form
//! `f(x) = <Ax, x>`, and a proper cone `K`. The central question is
//! whether `f` restricted to the cap `K` intersected with the unit
//! sphere is convex along minimal geodesics. The crate provides
//!
//! - exact certify-or-refute deciders for orthant and Lorentz cones,
//!   returning either a structural certificate or a concrete witness
//!   pair of cap points where a convexity inequality fails,
//! - randomized samplers that probe the same inequalities on any
//!   supported cone, with reproducible seeds and margins,
//! - structural checks relating convexity to operator properties
//!   (off-diagonal sign, invariance of the cone order, copositivity),
//! - optimizers for `f` on the cap: closed forms in the certified
//!   Lorentz case, eigenvalue solves on the full sphere, and projected
//!   geodesic descent in general.
//!
//! All randomized routines take an explicit [`RngSeed`] and are
//! deterministic functions of it, independent of thread count.

pub mod cones;
pub mod convexity;
mod error;
pub mod linalg;
pub mod optimize;
pub mod sphere;

pub use cones::{
    Cone, ConeKind, ConePoint, DualityClass, LorentzMembership, PointLocation,
};
pub use convexity::{Certificate, Verdict, VerdictStatus, Witness, WitnessCriterion};
pub use error::{Error, Result};
pub use linalg::{
    EigenDecomposition, Orthogonal, ParsedMatrix, RngSeed, SymMatrix, UnitVector,
};
pub use optimize::{
    CapExtremes, DescentParams, NcpReport, NcpStatus, OptMethod, OptResult,
};
pub use sphere::{GeodesicSegment, ProbeOutcome};
