//! Randomized verification of necessary convexity inequalities.
//!
//! Each verifier draws sample pairs on the cap, evaluates one
//! inequality that spherical convexity of `f(x) = <Ax, x>` implies, and
//! reports the worst margin seen. A margin below `-tol` refutes with a
//! concrete witness; otherwise the run is inconclusive (sampling never
//! certifies).
//!
//! Sample `i` of a run is generated from
//! `seed.substream(tag).substream(i)`, where `tag` is fixed per
//! criterion. Margins are therefore a pure function of `(A, cone,
//! samples, seed)`: the parallel map preserves index order, and the
//! worst-margin scan breaks ties toward the lowest index, so results
//! are identical whatever the thread count.

use rayon::prelude::*;

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::linalg::{sample_orthogonal_unit_with, RngSeed, SymMatrix};

use super::certify::witness_from_pair;
use super::{validate_tol, Verdict, Witness, WitnessCriterion};

const TAG_PROP3: u64 = 0x33;
const TAG_PROP4: u64 = 0x34;
const TAG_PROP2III: u64 = 0x23;

/// Width of the strict-interiority band used when a criterion requires
/// interior cap points.
const INTERIOR_BAND: f64 = 1e-12;

fn tag(criterion: WitnessCriterion) -> u64 {
    match criterion {
        WitnessCriterion::Prop3 => TAG_PROP3,
        WitnessCriterion::Prop4 => TAG_PROP4,
        WitnessCriterion::Prop2iii => TAG_PROP2III,
    }
}

/// Draws the sample pair for `criterion` at `index` and evaluates both
/// sides of the inequality. Margin is `lhs - rhs`, negative on
/// violation.
fn sample_witness(
    a: &SymMatrix,
    cone: &Cone,
    criterion: WitnessCriterion,
    seed: RngSeed,
    index: u64,
) -> Result<Witness> {
    let mut rng = seed.substream(tag(criterion)).substream(index).rng();
    let (x, y) = match criterion {
        WitnessCriterion::Prop3 => {
            let y = cone.sample_cap_point_with(&mut rng);
            let x = sample_orthogonal_unit_with(&y, &mut rng);
            (x, y)
        }
        WitnessCriterion::Prop2iii => {
            let mut y = None;
            for _ in 0..1000 {
                let c = cone.sample_cap_point_with(&mut rng);
                if cone.interior_contains(c.coords(), INTERIOR_BAND) {
                    y = Some(c);
                    break;
                }
            }
            let y = y.ok_or(Error::SamplerExhausted { attempts: 1000 })?;
            let x = sample_orthogonal_unit_with(&y, &mut rng);
            (x, y)
        }
        WitnessCriterion::Prop4 => {
            let x = cone.sample_cap_point_with(&mut rng);
            let y = cone.sample_cap_point_with(&mut rng);
            (x, y)
        }
    };
    Ok(witness_from_pair(a, criterion, x, y))
}

/// A verifier run with its full margin trace, one entry per sample
/// index.
#[derive(Debug, Clone)]
pub struct SampledRun {
    pub verdict: Verdict,
    pub margins: Vec<f64>,
}

/// Runs the sampled verifier for `criterion` and keeps every margin.
pub fn verify_detailed(
    a: &SymMatrix,
    cone: &Cone,
    criterion: WitnessCriterion,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<SampledRun> {
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
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "need at least one sample",
        });
    }

    let margins = (0..samples)
        .into_par_iter()
        .map(|i| sample_witness(a, cone, criterion, seed, i).map(|w| -w.violation))
        .collect::<Result<Vec<f64>>>()?;

    let mut worst_index = 0usize;
    for (i, &m) in margins.iter().enumerate() {
        if m < margins[worst_index] {
            worst_index = i;
        }
    }
    let worst = margins[worst_index];
    let verdict = if worst < -tol {
        let witness = sample_witness(a, cone, criterion, seed, worst_index as u64)?;
        Verdict::refuted_sampled(witness, samples, worst)
    } else {
        Verdict::inconclusive(samples, Some(worst))
    };
    Ok(SampledRun { verdict, margins })
}

/// Samples the orthogonality inequality: for `y` on the cap and a unit
/// `x` orthogonal to `y`, convexity forces `f(x) >= f(y)`.
pub fn verify_prop3(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<Verdict> {
    verify_detailed(a, cone, WitnessCriterion::Prop3, samples, tol, seed)
        .map(|run| run.verdict)
}

/// Samples the pair inequality: for cap points `x`, `y`, convexity
/// forces `(f(x) + f(y)) <x, y> >= 2 <Ax, y>`.
pub fn verify_prop4(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<Verdict> {
    verify_detailed(a, cone, WitnessCriterion::Prop4, samples, tol, seed)
        .map(|run| run.verdict)
}

/// The orthogonality inequality restricted to interior cap points `y`.
/// Draws falling on the boundary band are rejected and redrawn; a cone
/// whose cap has no interior (a generator cone that is not
/// full-dimensional) exhausts the 1000-draw budget and errors out.
pub fn verify_prop2iii(
    a: &SymMatrix,
    cone: &Cone,
    samples: u64,
    tol: f64,
    seed: RngSeed,
) -> Result<Verdict> {
    verify_detailed(a, cone, WitnessCriterion::Prop2iii, samples, tol, seed)
        .map(|run| run.verdict)
}
