//! The five commands and their report types.

use std::path::Path;

use serde::Serialize;

use sphconvex::convexity::{
    certify, check_prop5_consequences, has_kz_property, is_copositive, is_lyapunov_like,
    is_z_matrix, psd_check, CopositivityReport, KzReport, Prop5Report,
};
use sphconvex::optimize::{
    extremize_lorentz_certified, ncp_existence_check, projected_geodesic_descent,
};
use sphconvex::sphere::geodesic_convexity_probe;
use sphconvex::{
    Cone, ConeKind, DescentParams, DualityClass, Error, GeodesicSegment, NcpReport, NcpStatus,
    OptMethod, OptResult, ProbeOutcome, RngSeed, SymMatrix, UnitVector, Verdict, VerdictStatus,
    Witness, WitnessCriterion,
};

use crate::io::{core_err, load_cone, load_matrix, write_margins, CliError};
use crate::render;
use crate::{CommonArgs, OptimizeArgs, ScreenArgs};
use crate::{EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED};

const TAG_PROBE: u64 = 0x50;
const TAG_MINIMIZE: u64 = 0x4D;
/// Grid resolution for the geodesic second-difference scan.
const PROBE_GRID: usize = 64;
/// Sampled refutations never use a tighter threshold than this; exact
/// certificates at `tol` must not be contradicted by margins within
/// sampling accuracy of zero.
const SAMPLED_TOL_FLOOR: f64 = 1e-7;

/// A renderable command report.
pub trait Report: Serialize {
    fn text(&self) -> String;
}

/// Inputs common to every command, validated and loaded.
pub struct Ctx {
    pub a: SymMatrix,
    pub cone: Cone,
    pub samples: u64,
    pub tol: f64,
    pub seed: RngSeed,
}

impl Ctx {
    pub fn load(common: &CommonArgs) -> Result<Ctx, CliError> {
        if common.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        if !(common.tol.is_finite() && common.tol > 0.0) {
            return Err(CliError::Usage(
                "--tol must be a positive finite number".into(),
            ));
        }
        let a = load_matrix(&common.matrix)?;
        let cone = load_cone(&common.cone)?;
        if a.n() != cone.dim() {
            return Err(CliError::Data(format!(
                "matrix is {0}x{0} but the cone lives in dimension {1}",
                a.n(),
                cone.dim()
            )));
        }
        Ok(Ctx {
            a,
            cone,
            samples: common.samples,
            tol: common.tol,
            seed: RngSeed(common.seed),
        })
    }

    fn sampled_tol(&self) -> f64 {
        self.tol.max(SAMPLED_TOL_FLOOR)
    }
}

/// The innermost cone kind, peeling rotations.
fn base_kind(cone: &Cone) -> ConeKind<'_> {
    match cone.kind() {
        ConeKind::Rotated { base, .. } => base_kind(base),
        other => other,
    }
}

fn has_exact_decider(cone: &Cone) -> bool {
    matches!(
        base_kind(cone),
        ConeKind::Orthant { .. } | ConeKind::Lorentz { .. }
    )
}

pub fn cone_label(cone: &Cone) -> String {
    match cone.kind() {
        ConeKind::Orthant { .. } => "orthant".into(),
        ConeKind::Lorentz { .. } => "lorentz".into(),
        ConeKind::Polyhedral { .. } => "polyhedral".into(),
        ConeKind::Rotated { base, .. } => format!("rotated({})", cone_label(base)),
    }
}

fn exit_for(status: VerdictStatus) -> i32 {
    match status {
        VerdictStatus::Certified => EXIT_OK,
        VerdictStatus::Refuted => EXIT_REFUTED,
        VerdictStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

const CRITERIA: [(WitnessCriterion, &str); 3] = [
    (WitnessCriterion::Prop3, "prop3"),
    (WitnessCriterion::Prop4, "prop4"),
    (WitnessCriterion::Prop2iii, "prop2iii"),
];

#[derive(Debug, Serialize)]
pub struct SampledSummary {
    pub criterion: &'static str,
    pub tol: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbeWorst {
    pub segment: u64,
    pub t: f64,
    pub second_difference: f64,
}

#[derive(Debug, Serialize)]
pub struct ProbeSummary {
    pub segments: u64,
    /// Segments that survived the degeneracy screen and were scanned.
    pub evaluated: u64,
    pub grid: usize,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<ProbeWorst>,
}

/// Runs every sampled criterion, collecting margins for the CSV dump.
/// Criteria whose sampler cannot run on this cone (no interior, or the
/// dimension is too small) are skipped rather than failed.
fn run_sampled(
    ctx: &Ctx,
    margins: &mut Vec<(&'static str, u64, f64)>,
) -> Result<Vec<SampledSummary>, CliError> {
    let stol = ctx.sampled_tol();
    let mut out = Vec::new();
    for (criterion, label) in CRITERIA {
        match sphconvex::convexity::verify_detailed(
            &ctx.a, &ctx.cone, criterion, ctx.samples, stol, ctx.seed,
        ) {
            Ok(run) => {
                for (i, m) in run.margins.iter().enumerate() {
                    margins.push((label, i as u64, *m));
                }
                out.push(SampledSummary {
                    criterion: label,
                    tol: stol,
                    verdict: run.verdict,
                });
            }
            Err(Error::SamplerExhausted { .. }) | Err(Error::DimensionTooSmall { .. }) => {}
            Err(e) => return Err(core_err(e)),
        }
    }
    Ok(out)
}

fn run_probe(ctx: &Ctx, segments: u64) -> Result<ProbeSummary, CliError> {
    let stol = ctx.sampled_tol();
    let mut evaluated = 0u64;
    let mut violations = 0u64;
    let mut worst: Option<ProbeWorst> = None;
    for i in 0..segments {
        let sub = ctx.seed.substream(TAG_PROBE).substream(i);
        let x = ctx.cone.sample_cap_point(sub.substream(0));
        let y = ctx.cone.sample_cap_point(sub.substream(1));
        let segment = match GeodesicSegment::new(x, y) {
            Ok(s) => s,
            // A coincident or antipodal draw carries no information.
            Err(_) => continue,
        };
        evaluated += 1;
        match geodesic_convexity_probe(&segment, &ctx.a, PROBE_GRID, stol).map_err(core_err)? {
            ProbeOutcome::Consistent => {}
            ProbeOutcome::Violated {
                t,
                second_difference,
            } => {
                violations += 1;
                let more_negative = worst
                    .as_ref()
                    .is_none_or(|w| second_difference < w.second_difference);
                if more_negative {
                    worst = Some(ProbeWorst {
                        segment: i,
                        t,
                        second_difference,
                    });
                }
            }
        }
    }
    Ok(ProbeSummary {
        segments,
        evaluated,
        grid: PROBE_GRID,
        violations,
        worst,
    })
}

fn dump_margins_if_asked(
    path: Option<&Path>,
    rows: &[(&'static str, u64, f64)],
) -> Result<(), CliError> {
    match path {
        Some(p) => write_margins(p, rows),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
pub struct CertifyReport {
    pub command: &'static str,
    pub n: usize,
    pub cone: String,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_tol: Option<f64>,
    pub status: VerdictStatus,
    /// Outcome of the exact decider, when the cone has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sampled: Vec<SampledSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSummary>,
}

pub fn certify_cmd(args: &ScreenArgs) -> Result<(CertifyReport, i32), CliError> {
    let ctx = Ctx::load(&args.common)?;
    let exact = if has_exact_decider(&ctx.cone) {
        Some(certify(&ctx.a, &ctx.cone, ctx.tol).map_err(core_err)?)
    } else {
        None
    };
    let mut status = exact
        .as_ref()
        .map_or(VerdictStatus::Inconclusive, Verdict::status);

    let mut margins = Vec::new();
    let mut sampled = Vec::new();
    if status == VerdictStatus::Inconclusive {
        sampled = run_sampled(&ctx, &mut margins)?;
        if sampled.iter().any(|s| s.verdict.is_refuted()) {
            status = VerdictStatus::Refuted;
        }
    }

    let probe = match args.probe_geodesics {
        Some(m) => {
            let summary = run_probe(&ctx, m)?;
            if summary.violations > 0 {
                status = VerdictStatus::Refuted;
            }
            Some(summary)
        }
        None => None,
    };

    dump_margins_if_asked(args.dump_margins.as_deref(), &margins)?;

    let exit = exit_for(status);
    let report = CertifyReport {
        command: "certify",
        n: ctx.a.n(),
        cone: cone_label(&ctx.cone),
        tol: ctx.tol,
        sampled_tol: (!sampled.is_empty()).then(|| ctx.sampled_tol()),
        status,
        exact,
        sampled,
        probe,
    };
    Ok((report, exit))
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub command: &'static str,
    pub n: usize,
    pub cone: String,
    pub tol: f64,
    pub sampled_tol: f64,
    /// Whether any violation was found by any route.
    pub found: bool,
    /// Witness from the deterministic families, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deterministic: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sampled: Vec<SampledSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSummary>,
}

pub fn search_cmd(args: &ScreenArgs) -> Result<(SearchReport, i32), CliError> {
    let ctx = Ctx::load(&args.common)?;
    let deterministic = if has_exact_decider(&ctx.cone) {
        certify(&ctx.a, &ctx.cone, ctx.tol)
            .map_err(core_err)?
            .witness()
            .cloned()
    } else {
        None
    };

    let mut margins = Vec::new();
    let sampled = run_sampled(&ctx, &mut margins)?;

    let probe = match args.probe_geodesics {
        Some(m) => Some(run_probe(&ctx, m)?),
        None => None,
    };

    dump_margins_if_asked(args.dump_margins.as_deref(), &margins)?;

    let found = deterministic.is_some()
        || sampled.iter().any(|s| s.verdict.is_refuted())
        || probe.as_ref().is_some_and(|p| p.violations > 0);
    let exit = if found { EXIT_REFUTED } else { EXIT_OK };
    let report = SearchReport {
        command: "search",
        n: ctx.a.n(),
        cone: cone_label(&ctx.cone),
        tol: ctx.tol,
        sampled_tol: ctx.sampled_tol(),
        found,
        deterministic,
        sampled,
        probe,
    };
    Ok((report, exit))
}

#[derive(Debug, Serialize)]
pub struct PropsReport {
    pub command: &'static str,
    pub n: usize,
    pub cone: String,
    pub tol: f64,
    pub sampled_tol: f64,
    pub duality: DualityClass,
    /// Off-diagonal entries all at most `tol`.
    pub z_matrix: bool,
    /// Smallest eigenvalue at least `-tol`.
    pub psd: bool,
    /// Exact convexity verdict, when the cone has a decider.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convexity: Option<Verdict>,
    pub kz: KzReport,
    pub lyapunov_like: KzReport,
    pub copositivity: CopositivityReport,
    /// Only for cones comparable with their dual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prop5: Option<Prop5Report>,
}

pub fn props_cmd(common: &CommonArgs) -> Result<(PropsReport, i32), CliError> {
    let ctx = Ctx::load(common)?;
    let stol = ctx.sampled_tol();
    let duality = ctx.cone.duality_class();
    let convexity = if has_exact_decider(&ctx.cone) {
        Some(certify(&ctx.a, &ctx.cone, ctx.tol).map_err(core_err)?)
    } else {
        None
    };
    let kz = has_kz_property(&ctx.a, &ctx.cone, ctx.samples, stol, ctx.seed).map_err(core_err)?;
    let lyapunov_like =
        is_lyapunov_like(&ctx.a, &ctx.cone, ctx.samples, stol, ctx.seed).map_err(core_err)?;
    let copositivity =
        is_copositive(&ctx.a, &ctx.cone, ctx.samples, stol, ctx.seed).map_err(core_err)?;
    let prop5 = if matches!(duality, DualityClass::Selfdual | DualityClass::Subdual)
        && ctx.cone.dim() >= 2
    {
        Some(
            check_prop5_consequences(&ctx.a, &ctx.cone, ctx.samples, stol, ctx.seed)
                .map_err(core_err)?,
        )
    } else {
        None
    };

    let report = PropsReport {
        command: "props",
        n: ctx.a.n(),
        cone: cone_label(&ctx.cone),
        tol: ctx.tol,
        sampled_tol: stol,
        duality,
        z_matrix: is_z_matrix(&ctx.a, ctx.tol),
        psd: psd_check(&ctx.a, ctx.tol),
        convexity,
        kz,
        lyapunov_like,
        copositivity,
        prop5,
    };
    Ok((report, EXIT_OK))
}

#[derive(Debug, Serialize)]
pub struct MinimizeReport {
    pub command: &'static str,
    pub n: usize,
    pub cone: String,
    pub tol: f64,
    pub result: OptResult,
    /// Number of descent starts, when descent ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<u64>,
}

/// The image of the first coordinate axis under the cone's rotations;
/// a cap point of any orthant or Lorentz cone, however rotated.
fn mapped_first_axis(cone: &Cone) -> UnitVector {
    match cone.kind() {
        ConeKind::Rotated { q, base } => {
            UnitVector::new(q.apply(mapped_first_axis(base).coords()))
                .expect("rotation preserves norms")
        }
        _ => {
            let mut v = vec![0.0; cone.dim()];
            v[0] = 1.0;
            UnitVector::new(v).expect("axis vector")
        }
    }
}

pub fn minimize_cmd(args: &OptimizeArgs) -> Result<(MinimizeReport, i32), CliError> {
    let ctx = Ctx::load(&args.common)?;
    if args.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }

    let verdict = if has_exact_decider(&ctx.cone) {
        Some(certify(&ctx.a, &ctx.cone, ctx.tol).map_err(core_err)?)
    } else {
        None
    };

    if let Some(v) = verdict.as_ref().filter(|v| v.is_certified()) {
        let cert = v.certificate().expect("certified verdicts carry one");
        let result = if cert.a.is_some() {
            extremize_lorentz_certified(&ctx.a, &ctx.cone, v)
                .map_err(core_err)?
                .min
        } else {
            // The certificate pins the matrix to lambda I, so the form
            // is constant on the sphere.
            OptResult {
                value: cert.lambda,
                argpoint: mapped_first_axis(&ctx.cone),
                iterations: 0,
                converged: true,
                method: OptMethod::ClosedForm,
            }
        };
        let report = MinimizeReport {
            command: "minimize",
            n: ctx.a.n(),
            cone: cone_label(&ctx.cone),
            tol: ctx.tol,
            result,
            restarts: None,
        };
        return Ok((report, EXIT_OK));
    }

    let mut best: Option<OptResult> = None;
    for i in 0..args.restarts {
        let start = ctx
            .cone
            .sample_cap_point(ctx.seed.substream(TAG_MINIMIZE).substream(i));
        match projected_geodesic_descent(
            &ctx.a,
            &ctx.cone,
            start.coords(),
            DescentParams::default(),
        ) {
            Ok(run) => {
                if best.as_ref().is_none_or(|b| run.value < b.value) {
                    best = Some(run);
                }
            }
            // A stalled line search from one start says nothing about
            // the others.
            Err(Error::StepUnderflow) => continue,
            Err(e) => return Err(core_err(e)),
        }
    }
    let result = best.ok_or_else(|| {
        CliError::Data("descent failed from every starting point".into())
    })?;
    let exit = if result.converged {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    let report = MinimizeReport {
        command: "minimize",
        n: ctx.a.n(),
        cone: cone_label(&ctx.cone),
        tol: ctx.tol,
        result,
        restarts: Some(args.restarts),
    };
    Ok((report, exit))
}

#[derive(Debug, Serialize)]
pub struct NcpCliReport {
    pub command: &'static str,
    pub n: usize,
    pub cone: String,
    pub margin: f64,
    pub result: NcpReport,
}

pub fn ncp_cmd(args: &OptimizeArgs) -> Result<(NcpCliReport, i32), CliError> {
    let ctx = Ctx::load(&args.common)?;
    if args.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    let result = ncp_existence_check(&ctx.a, &ctx.cone, ctx.tol, args.restarts, ctx.seed)
        .map_err(core_err)?;
    let exit = match result.status {
        NcpStatus::Guaranteed => EXIT_OK,
        NcpStatus::NotEstablished => EXIT_REFUTED,
        NcpStatus::Inconclusive => EXIT_INCONCLUSIVE,
    };
    let report = NcpCliReport {
        command: "ncp",
        n: ctx.a.n(),
        cone: cone_label(&ctx.cone),
        margin: ctx.tol,
        result,
    };
    Ok((report, exit))
}

impl Report for CertifyReport {
    fn text(&self) -> String {
        render::certify_text(self)
    }
}

impl Report for SearchReport {
    fn text(&self) -> String {
        render::search_text(self)
    }
}

impl Report for PropsReport {
    fn text(&self) -> String {
        render::props_text(self)
    }
}

impl Report for MinimizeReport {
    fn text(&self) -> String {
        render::minimize_text(self)
    }
}

impl Report for NcpCliReport {
    fn text(&self) -> String {
        render::ncp_text(self)
    }
}
