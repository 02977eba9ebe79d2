//! Oracle-backed tests for the exact deciders, the sampled criteria,
//! and the structural property reports. Oracles recompute everything
//! with plain loops so a shared bug in the library cannot hide.

use proptest::prelude::*;
use sphconvex::convexity::{
    certify, certify_lorentz, certify_orthant, check_prop5_consequences, has_kz_property,
    is_copositive, verify_detailed, CopositivityStatus, WitnessCriterion,
};
use sphconvex::linalg::{random_orthogonal, RngSeed, SymMatrix};
use sphconvex::{Cone, VerdictStatus, Witness};

/// Quadratic form evaluated with naive accumulation, no fused ops.
fn quad_oracle(a: &SymMatrix, x: &[f64]) -> f64 {
    let n = a.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += a.get(i, j) * x[i] * x[j];
        }
    }
    acc
}

fn dot_oracle(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Max-norm distance from the nearest multiple of the identity.
fn identity_deviation(a: &SymMatrix) -> f64 {
    let n = a.n();
    let lambda = (0..n).map(|i| a.get(i, i)).sum::<f64>() / n as f64;
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { lambda } else { 0.0 };
            dev = dev.max((a.get(i, j) - target).abs());
        }
    }
    dev
}

/// Largest violation the deterministic orthant witness families can
/// produce, recomputed independently of the decider.
fn orthant_margin(a: &SymMatrix) -> f64 {
    let n = a.n();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut margin: f64 = 0.0;
    if n >= 2 {
        let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        margin = margin.max(hi - lo);
        for i in 0..n {
            for j in (i + 1)..n {
                margin = margin.max(2.0 * a.get(i, j));
            }
        }
    }
    if n >= 3 {
        for i in 0..n {
            for j in (i + 1)..n {
                if a.get(i, j) < 0.0 {
                    let k_best = (0..n)
                        .filter(|k| *k != i && *k != j)
                        .map(|k| diag[k])
                        .fold(f64::NEG_INFINITY, f64::max);
                    margin = margin.max(k_best - 0.5 * (diag[i] + diag[j]) - a.get(i, j));
                }
            }
        }
    }
    margin.max(0.0)
}

fn assert_witness_checks_out(a: &SymMatrix, cone: &Cone, w: &Witness, tol: f64) {
    let x = w.x.coords();
    let y = w.y.coords();
    assert!(cone.contains(y, 1e-9), "witness y escaped the cap");
    let (lhs, rhs) = match w.criterion {
        WitnessCriterion::Prop3 | WitnessCriterion::Prop2iii => {
            // These criteria compare a cap point against an orthogonal
            // unit direction.
            assert!(dot_oracle(x, y).abs() <= 1e-9, "witness pair not orthogonal");
            (quad_oracle(a, x), quad_oracle(a, y))
        }
        WitnessCriterion::Prop4 => {
            // The pair criterion ranges over arbitrary cap pairs.
            assert!(cone.contains(x, 1e-9), "witness x escaped the cap");
            let cross: f64 = {
                let ax: Vec<f64> = (0..a.n())
                    .map(|i| (0..a.n()).map(|j| a.get(i, j) * x[j]).sum::<f64>())
                    .collect();
                dot_oracle(&ax, y)
            };
            (
                (quad_oracle(a, x) + quad_oracle(a, y)) * dot_oracle(x, y),
                2.0 * cross,
            )
        }
    };
    let scale = 1.0 + a.frobenius_norm();
    assert!(
        (lhs - w.lhs).abs() <= 1e-9 * scale && (rhs - w.rhs).abs() <= 1e-9 * scale,
        "stored witness values disagree with direct evaluation"
    );
    assert!(
        w.violation > tol && (w.violation - (rhs - lhs)).abs() <= 1e-9 * scale,
        "violation {} inconsistent with lhs/rhs", w.violation
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn orthant_decider_certifies_exactly_the_near_identity_forms(
        n in 2usize..=6,
        lambda in -5.0..5.0f64,
        scale_pow in 0usize..6,
        raw in proptest::collection::vec(-1.0..1.0f64, 36),
    ) {
        let s = [0.0, 1e-12, 1e-10, 1e-8, 1e-4, 1.0][scale_pow];
        let mut entries = vec![0.0; n * n];
        for (k, e) in entries.iter_mut().enumerate() {
            *e = raw[k % raw.len()] * s;
        }
        for i in 0..n {
            entries[i * n + i] += lambda;
        }
        let a = SymMatrix::new(n, entries).unwrap();
        let v = certify_orthant(&a, 1e-9).unwrap();
        let dev = identity_deviation(&a);
        prop_assert_eq!(v.is_certified(), dev <= 1e-9, "deviation {}", dev);
        if v.is_certified() {
            let cert = v.certificate().unwrap();
            let trace_mean = (0..n).map(|i| a.get(i, i)).sum::<f64>() / n as f64;
            prop_assert!((cert.lambda - trace_mean).abs() <= 1e-12 * (1.0 + trace_mean.abs()));
        }
        if let Some(w) = v.witness() {
            assert_witness_checks_out(&a, &Cone::orthant(n).unwrap(), w, 1e-9);
        }
    }

    #[test]
    fn orthant_decider_refutes_when_structure_margin_is_large(
        n in 2usize..=6,
        raw in proptest::collection::vec(-3.0..3.0f64, 36),
    ) {
        let entries: Vec<f64> = raw.iter().copied().cycle().take(n * n).collect();
        let a = SymMatrix::new(n, entries).unwrap();
        let margin = orthant_margin(&a);
        prop_assume!(margin > 1e-3);
        let v = certify_orthant(&a, 1e-9).unwrap();
        prop_assert!(v.is_refuted(), "margin {} but status {:?}", margin, v.status());
        let w = v.witness().unwrap();
        prop_assert!(w.violation >= margin - 1e-9, "violation {} below margin {}", w.violation, margin);
        assert_witness_checks_out(&a, &Cone::orthant(n).unwrap(), w, 1e-9);
    }

    #[test]
    fn lorentz_decider_certifies_exactly_the_split_forms(
        n in 2usize..=6,
        a1 in -4.0..4.0f64,
        gap in 0.0..4.0f64,
        scale_pow in 0usize..5,
        raw in proptest::collection::vec(-1.0..1.0f64, 36),
    ) {
        let s = [0.0, 1e-12, 1e-10, 1e-7, 0.5][scale_pow];
        let lambda = a1 + gap;
        let mut entries = vec![0.0; n * n];
        for (k, e) in entries.iter_mut().enumerate() {
            *e = raw[k % raw.len()] * s;
        }
        entries[0] += a1;
        for i in 1..n {
            entries[i * n + i] += lambda;
        }
        let a = SymMatrix::new(n, entries).unwrap();
        let v = certify_lorentz(&a, 1e-9).unwrap();

        // Recompute the certificate conditions directly.
        let tail_mean = if n > 1 {
            (1..n).map(|i| a.get(i, i)).sum::<f64>() / (n - 1) as f64
        } else {
            a.get(0, 0)
        };
        let mut coupling: f64 = 0.0;
        let mut tail_dev: f64 = 0.0;
        for i in 1..n {
            coupling = coupling.max(a.get(0, i).abs());
            for j in 1..n {
                let target = if i == j { tail_mean } else { 0.0 };
                tail_dev = tail_dev.max((a.get(i, j) - target).abs());
            }
        }
        let expected =
            coupling <= 1e-9 && tail_dev <= 1e-9 && tail_mean >= a.get(0, 0) - 1e-9;
        prop_assert_eq!(v.is_certified(), expected);
        if v.is_certified() {
            let cert = v.certificate().unwrap();
            prop_assert!((cert.a.unwrap() - a.get(0, 0)).abs() <= 1e-12);
            prop_assert!((cert.lambda - tail_mean).abs() <= 1e-12 * (1.0 + tail_mean.abs()));
        }
        if let Some(w) = v.witness() {
            assert_witness_checks_out(&a, &Cone::lorentz(n).unwrap(), w, 1e-9);
        }
    }

    #[test]
    fn lorentz_decider_refutes_clearly_structured_violations(
        n in 3usize..=6,
        which in 0usize..3,
        size in 0.01..1.0f64,
        a1 in -2.0..2.0f64,
    ) {
        // One structural defect at a time: tail spread, coupling, or an
        // apex value above the tail.
        let mut entries = vec![0.0; n * n];
        entries[0] = a1;
        for i in 1..n {
            entries[i * n + i] = a1 + 1.0;
        }
        match which {
            0 => entries[n + 1] += size,            // tail spread
            1 => { entries[1] = size; entries[n] = size; } // coupling
            _ => entries[0] = a1 + 1.0 + size,      // apex above tail
        }
        let a = SymMatrix::new(n, entries).unwrap();
        let v = certify_lorentz(&a, 1e-9).unwrap();
        prop_assert!(v.is_refuted(), "defect {} of size {} not refuted", which, size);
        assert_witness_checks_out(&a, &Cone::lorentz(n).unwrap(), v.witness().unwrap(), 1e-9);
    }

    #[test]
    fn sampling_never_refutes_a_certified_form(
        n in 2usize..=5,
        a1 in -2.0..2.0f64,
        gap in 0.0..3.0f64,
        seed in 0u64..500,
        rotate in proptest::bool::ANY,
    ) {
        let lambda = a1 + gap;
        let mut d = vec![lambda; n];
        d[0] = a1;
        let diag = SymMatrix::diag(&d).unwrap();
        let (a, cone) = if rotate {
            let q = random_orthogonal(n, RngSeed(seed ^ 0xA5A5));
            (
                diag.conjugated(&q.transposed()),
                Cone::rotated(q, Cone::lorentz(n).unwrap()).unwrap(),
            )
        } else {
            (diag, Cone::lorentz(n).unwrap())
        };
        prop_assume!(certify(&a, &cone, 1e-9).unwrap().is_certified());
        for criterion in [
            WitnessCriterion::Prop3,
            WitnessCriterion::Prop4,
            WitnessCriterion::Prop2iii,
        ] {
            let run = verify_detailed(&a, &cone, criterion, 1500, 1e-7, RngSeed(seed)).unwrap();
            prop_assert!(
                run.verdict.status() != VerdictStatus::Refuted,
                "{criterion:?} refuted a certified form, worst {:?}",
                run.verdict.worst_margin()
            );
        }
    }
}

#[test]
fn sampled_prop4_matches_a_dense_grid_on_the_quarter_circle() {
    // For diag(1, 2) on the nonnegative quadrant the pair criterion
    // margin is an explicit function of two angles; a dense grid pins
    // the true minimum and sampling must land close to it.
    let a = SymMatrix::diag(&[1.0, 2.0]).unwrap();
    let cone = Cone::orthant(2).unwrap();
    let f = |t: f64| {
        let x = [t.cos(), t.sin()];
        quad_oracle(&a, &x)
    };
    let m = 600usize;
    let mut grid_min = f64::INFINITY;
    for i in 0..=m {
        for j in 0..=m {
            let al = std::f64::consts::FRAC_PI_2 * i as f64 / m as f64;
            let be = std::f64::consts::FRAC_PI_2 * j as f64 / m as f64;
            let x = [al.cos(), al.sin()];
            let y = [be.cos(), be.sin()];
            let cross = a.get(0, 0) * x[0] * y[0]
                + a.get(0, 1) * (x[0] * y[1] + x[1] * y[0])
                + a.get(1, 1) * x[1] * y[1];
            let margin = (f(al) + f(be)) * dot_oracle(&x, &y) - 2.0 * cross;
            grid_min = grid_min.min(margin);
        }
    }
    assert!(grid_min < -0.1, "expected a real violation, grid min {grid_min}");

    let run = verify_detailed(
        &a,
        &cone,
        WitnessCriterion::Prop4,
        20_000,
        1e-7,
        RngSeed(42),
    )
    .unwrap();
    let sampled_min = run.margins.iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(run.verdict.status(), VerdictStatus::Refuted);
    // Sampling cannot beat the true minimum (grid min up to resolution)
    // and with 2e4 draws it must get close to it.
    assert!(sampled_min >= grid_min - 1e-3, "sampled {sampled_min} vs grid {grid_min}");
    assert!(sampled_min <= grid_min + 0.02, "sampling missed the deep violation");
    assert_witness_checks_out(&a, &cone, run.verdict.witness().unwrap(), 1e-7);
}

#[test]
fn kz_decision_survives_rotation() {
    // A Z-matrix has the one-sided property on the orthant; the rotated
    // cone reduces to the same exact decision.
    let m = SymMatrix::from_rows(&[
        vec![2.0, -1.0, 0.0],
        vec![-1.0, 2.0, -0.5],
        vec![0.0, -0.5, 1.0],
    ])
    .unwrap();
    let orthant = Cone::orthant(3).unwrap();
    let direct = has_kz_property(&m, &orthant, 500, 1e-7, RngSeed(5)).unwrap();
    assert!(direct.holds);

    let q = random_orthogonal(3, RngSeed(77));
    let rotated = Cone::rotated(q.clone(), Cone::orthant(3).unwrap()).unwrap();
    let b = m.conjugated(&q.transposed());
    let via_rotation = has_kz_property(&b, &rotated, 500, 1e-7, RngSeed(5)).unwrap();
    assert_eq!(via_rotation.method, direct.method);
    assert!(via_rotation.holds);

    // Breaking the Z-structure flips the decision in both frames.
    let bad = SymMatrix::from_rows(&[
        vec![2.0, 1.0, 0.0],
        vec![1.0, 2.0, -0.5],
        vec![0.0, -0.5, 1.0],
    ])
    .unwrap();
    assert!(!has_kz_property(&bad, &orthant, 500, 1e-7, RngSeed(5)).unwrap().holds);
    let bad_rot = bad.conjugated(&q.transposed());
    assert!(!has_kz_property(&bad_rot, &rotated, 500, 1e-7, RngSeed(5)).unwrap().holds);
}

#[test]
fn copositivity_statuses_agree_with_a_dense_cap_grid() {
    let cone = Cone::orthant(2).unwrap();
    let mut rng = RngSeed(2024).rng();
    use rand::Rng;
    let mut certified = 0u32;
    let mut refuted = 0u32;
    for trial in 0..60u64 {
        let e: Vec<f64> = (0..4).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let a = SymMatrix::new(2, e).unwrap();
        let grid_min = (0..=4000)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_2 * k as f64 / 4000.0;
                quad_oracle(&a, &[t.cos(), t.sin()])
            })
            .fold(f64::INFINITY, f64::min);
        let report = is_copositive(&a, &cone, 4000, 1e-7, RngSeed(trial)).unwrap();
        match report.status {
            CopositivityStatus::Certified => {
                certified += 1;
                assert!(
                    grid_min >= -1e-6,
                    "certified but the grid found {grid_min} (trial {trial})"
                );
            }
            CopositivityStatus::Refuted => {
                refuted += 1;
                let w = report.witness.expect("refutation must carry a witness");
                let direct = quad_oracle(&a, w.x.coords());
                assert!(direct < 0.0, "witness value {direct} not negative");
                assert!((direct - w.value).abs() <= 1e-9);
                assert!(grid_min < 0.0);
            }
            CopositivityStatus::Inconclusive => {
                // Allowed only when the certificate machinery has a gap;
                // the sampled screen must at least not contradict it.
                assert!(report.min_value_sampled >= -1e-7);
            }
        }
    }
    assert!(certified >= 10, "grid oracle exercised too few certified cases: {certified}");
    assert!(refuted >= 10, "grid oracle exercised too few refuted cases: {refuted}");
}

#[test]
fn complementary_pairs_of_certified_forms_have_equal_values() {
    // Certified forms are constant on the relevant boundary rays, so
    // the complementary-slackness deviation must vanish.
    let orthant = Cone::orthant(4).unwrap();
    let id = SymMatrix::diag(&[1.5, 1.5, 1.5, 1.5]).unwrap();
    let r = check_prop5_consequences(&id, &orthant, 2000, 1e-7, RngSeed(9)).unwrap();
    let comp = &r.items[0];
    assert_eq!(comp.label, "complementary_equality");
    assert!(comp.max_deviation.unwrap() <= 1e-9, "{:?}", comp.max_deviation);

    let lorentz = Cone::lorentz(4).unwrap();
    let split = SymMatrix::diag(&[0.5, 2.0, 2.0, 2.0]).unwrap();
    let r = check_prop5_consequences(&split, &lorentz, 2000, 1e-7, RngSeed(9)).unwrap();
    assert!(r.items[0].max_deviation.unwrap() <= 1e-9);
    // Strict positive pairing with the dual interior leaves no
    // admissible orthogonal directions.
    assert_eq!(r.items[1].admissible, 0);
    assert_eq!(r.items[2].admissible, 0);
}

#[test]
fn prop5_requires_a_known_duality_class() {
    let obtuse = Cone::polyhedral(vec![vec![1.0, -5.0], vec![1.0, 5.0]]).unwrap();
    let a = SymMatrix::diag(&[1.0, 1.0]).unwrap();
    match check_prop5_consequences(&a, &obtuse, 100, 1e-7, RngSeed(1)) {
        Err(sphconvex::Error::UnsupportedCone { .. }) => {}
        other => panic!("expected an unsupported-cone error, got {other:?}"),
    }
}
