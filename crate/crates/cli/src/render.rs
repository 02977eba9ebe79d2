//! Text rendering: one report per command, floats at six significant
//! digits. The JSON format is the replayable one; this is for reading.

use std::fmt::Write as _;

use sphconvex::convexity::{CheckMethod, CopositivityStatus, KzReport, Prop5Report};
use sphconvex::{
    DualityClass, NcpStatus, OptMethod, OptResult, UnitVector, Verdict, VerdictStatus, Witness,
    WitnessCriterion,
};

use crate::commands::{
    CertifyReport, MinimizeReport, NcpCliReport, ProbeSummary, PropsReport, SampledSummary,
    SearchReport,
};

fn sig(x: f64) -> String {
    format!("{x:.5e}")
}

fn vector(v: &UnitVector) -> String {
    let entries: Vec<String> = v.coords().iter().map(|&c| sig(c)).collect();
    format!("[{}]", entries.join(", "))
}

fn status_str(s: VerdictStatus) -> &'static str {
    match s {
        VerdictStatus::Certified => "certified",
        VerdictStatus::Refuted => "refuted",
        VerdictStatus::Inconclusive => "inconclusive",
    }
}

fn criterion_str(c: WitnessCriterion) -> &'static str {
    match c {
        WitnessCriterion::Prop3 => "prop3",
        WitnessCriterion::Prop4 => "prop4",
        WitnessCriterion::Prop2iii => "prop2iii",
    }
}

fn duality_str(d: DualityClass) -> &'static str {
    match d {
        DualityClass::Subdual => "subdual",
        DualityClass::Superdual => "superdual",
        DualityClass::Selfdual => "selfdual",
        DualityClass::StronglySuperdual => "strongly_superdual",
        DualityClass::None => "none",
        DualityClass::Unknown => "unknown",
    }
}

fn method_str(m: OptMethod) -> &'static str {
    match m {
        OptMethod::ClosedForm => "closed_form",
        OptMethod::Eigen => "eigen",
        OptMethod::Descent => "descent",
    }
}

fn witness_block(out: &mut String, w: &Witness) {
    let _ = writeln!(
        out,
        "witness[{}]: violation={} lhs={} rhs={}",
        criterion_str(w.criterion),
        sig(w.violation),
        sig(w.lhs),
        sig(w.rhs)
    );
    let _ = writeln!(out, "  x = {}", vector(&w.x));
    let _ = writeln!(out, "  y = {}", vector(&w.y));
}

fn verdict_block(out: &mut String, label: &str, v: &Verdict) {
    let mut line = format!("{label}: {}", status_str(v.status()));
    if let Some(c) = v.certificate() {
        if let Some(a) = c.a {
            let _ = write!(line, " a={}", sig(a));
        }
        let _ = write!(line, " lambda={}", sig(c.lambda));
    }
    if let Some(worst) = v.worst_margin() {
        let _ = write!(
            line,
            " samples={} worst_margin={}",
            v.samples_checked(),
            sig(worst)
        );
    }
    let _ = writeln!(out, "{line}");
    if let Some(w) = v.witness() {
        witness_block(out, w);
    }
}

fn sampled_block(out: &mut String, runs: &[SampledSummary]) {
    for run in runs {
        verdict_block(
            out,
            &format!("sampled[{}] tol={}", run.criterion, sig(run.tol)),
            &run.verdict,
        );
    }
}

fn probe_block(out: &mut String, p: &ProbeSummary) {
    let _ = writeln!(
        out,
        "probe: segments={} evaluated={} grid={} violations={}",
        p.segments, p.evaluated, p.grid, p.violations
    );
    if let Some(w) = &p.worst {
        let _ = writeln!(
            out,
            "probe worst: segment={} t={} second_difference={}",
            w.segment,
            sig(w.t),
            sig(w.second_difference)
        );
    }
}

pub fn certify_text(r: &CertifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "certify: cone={} n={} tol={}",
        r.cone,
        r.n,
        sig(r.tol)
    );
    if let Some(exact) = &r.exact {
        verdict_block(&mut out, "exact", exact);
    }
    sampled_block(&mut out, &r.sampled);
    if let Some(p) = &r.probe {
        probe_block(&mut out, p);
    }
    let _ = writeln!(out, "status: {}", status_str(r.status));
    out
}

pub fn search_text(r: &SearchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "search: cone={} n={} tol={} sampled_tol={}",
        r.cone,
        r.n,
        sig(r.tol),
        sig(r.sampled_tol)
    );
    if let Some(w) = &r.deterministic {
        out.push_str("deterministic ");
        witness_block(&mut out, w);
    }
    sampled_block(&mut out, &r.sampled);
    if let Some(p) = &r.probe {
        probe_block(&mut out, p);
    }
    let _ = writeln!(out, "found: {}", r.found);
    out
}

fn kz_block(out: &mut String, r: &KzReport) {
    let method = match r.method {
        CheckMethod::Exact => "exact",
        CheckMethod::Sampled => "sampled",
    };
    let _ = writeln!(
        out,
        "{}[{}]: holds={} pairs={} worst={}",
        r.property,
        method,
        r.holds,
        r.pairs_checked,
        sig(r.worst_value)
    );
    for pair in &r.canonical_pairs {
        let _ = writeln!(
            out,
            "  canonical pair value={} x={} y={}",
            sig(pair.value),
            vector(&pair.x),
            vector(&pair.y)
        );
    }
}

fn prop5_block(out: &mut String, r: &Prop5Report) {
    let _ = writeln!(out, "dual-cone consequences ({}):", duality_str(r.duality));
    for item in &r.items {
        let mut line = format!(
            "  {}: admissible={}/{}",
            item.label, item.admissible, item.samples
        );
        if let Some(d) = item.max_deviation {
            let _ = write!(line, " max_deviation={}", sig(d));
        }
        let _ = writeln!(out, "{line}");
    }
}

pub fn props_text(r: &PropsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "props: cone={} n={} tol={} sampled_tol={}",
        r.cone,
        r.n,
        sig(r.tol),
        sig(r.sampled_tol)
    );
    let _ = writeln!(out, "duality: {}", duality_str(r.duality));
    let _ = writeln!(out, "z_matrix: {}", r.z_matrix);
    let _ = writeln!(out, "psd: {}", r.psd);
    if let Some(v) = &r.convexity {
        verdict_block(&mut out, "convexity", v);
    }
    kz_block(&mut out, &r.kz);
    kz_block(&mut out, &r.lyapunov_like);
    let c = &r.copositivity;
    let status = match c.status {
        CopositivityStatus::Certified => "certified",
        CopositivityStatus::Refuted => "refuted",
        CopositivityStatus::Inconclusive => "inconclusive",
    };
    let mut line = format!(
        "copositive[{}]: {} samples={} min_sampled={}",
        c.method,
        status,
        c.samples_checked,
        sig(c.min_value_sampled)
    );
    if let Some(shift) = c.shift {
        let _ = write!(line, " shift={}", sig(shift));
    }
    if let Some(eig) = c.certified_min_eigenvalue {
        let _ = write!(line, " certified_min_eigenvalue={}", sig(eig));
    }
    let _ = writeln!(out, "{line}");
    if let Some(w) = &c.witness {
        let _ = writeln!(
            out,
            "copositivity witness: value={} x={}",
            sig(w.value),
            vector(&w.x)
        );
    }
    if let Some(p5) = &r.prop5 {
        prop5_block(&mut out, p5);
    }
    out
}

fn opt_block(out: &mut String, label: &str, r: &OptResult) {
    let _ = writeln!(
        out,
        "{label}: method={} value={} iterations={} converged={}",
        method_str(r.method),
        sig(r.value),
        r.iterations,
        r.converged
    );
    let _ = writeln!(out, "argpoint = {}", vector(&r.argpoint));
}

pub fn minimize_text(r: &MinimizeReport) -> String {
    let mut out = String::new();
    let mut head = format!("minimize: cone={} n={} tol={}", r.cone, r.n, sig(r.tol));
    if let Some(k) = r.restarts {
        let _ = write!(head, " restarts={k}");
    }
    let _ = writeln!(out, "{head}");
    opt_block(&mut out, "result", &r.result);
    out
}

pub fn ncp_text(r: &NcpCliReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "ncp: cone={} n={} margin={} restarts={}",
        r.cone,
        r.n,
        sig(r.margin),
        r.result.restarts
    );
    let status = match r.result.status {
        NcpStatus::Guaranteed => "guaranteed",
        NcpStatus::NotEstablished => "not_established",
        NcpStatus::Inconclusive => "inconclusive",
    };
    let _ = writeln!(out, "status: {status}");
    let _ = writeln!(
        out,
        "lower_bound={} ({}) upper_bound={}",
        sig(r.result.lower_bound),
        r.result.lower_bound_method,
        sig(r.result.upper_bound)
    );
    let _ = writeln!(out, "minimizer = {}", vector(&r.result.minimizer));
    out
}
