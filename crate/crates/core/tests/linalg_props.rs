//! Property tests for the dense kernels, checked against independent
//! oracles: cofactor determinants for the characteristic polynomial and
//! Rayleigh quotients for spectral bounds.

use proptest::prelude::*;
use sphconvex::linalg::{
    dot, format_matrix_text, jacobi_eigen, norm, parse_matrix_text, random_orthogonal, RngSeed,
    SymMatrix, UnitVector,
};

fn sym_matrix(max_n: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(-10.0..10.0f64, n * n)
            .prop_map(move |e| SymMatrix::new(n, e).unwrap())
    })
}

/// Determinant by recursive cofactor expansion; exponential, fine for
/// the small sizes used here.
fn det_cofactor(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0.0;
    for j in 0..n {
        let minor: Vec<Vec<f64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * m[0][j] * det_cofactor(&minor);
    }
    acc
}

fn shifted_rows(a: &SymMatrix, lambda: f64) -> Vec<Vec<f64>> {
    let n = a.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a.get(i, j) - if i == j { lambda } else { 0.0 })
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn eigendecomposition_reconstructs(a in sym_matrix(6)) {
        let eig = jacobi_eigen(&a);
        let r = eig.reconstruct();
        let scale = 1.0 + a.frobenius_norm();
        let mut dev: f64 = 0.0;
        for i in 0..a.n() {
            for j in 0..a.n() {
                dev = dev.max((r.get(i, j) - a.get(i, j)).abs());
            }
        }
        prop_assert!(dev <= 1e-11 * scale, "deviation {dev}");
        for k in 1..a.n() {
            prop_assert!(eig.values()[k] >= eig.values()[k - 1]);
        }
    }

    #[test]
    fn eigenvalues_are_characteristic_roots(a in sym_matrix(4)) {
        // det(A - lambda I) vanishes at every reported eigenvalue; the
        // determinant oracle shares no code with the Jacobi sweep.
        let eig = jacobi_eigen(&a);
        let scale = 1.0 + a.frobenius_norm();
        for k in 0..a.n() {
            let d = det_cofactor(&shifted_rows(&a, eig.values()[k]));
            prop_assert!(
                d.abs() <= 1e-8 * scale.powi(a.n() as i32),
                "det at eigenvalue {} is {d}",
                eig.values()[k]
            );
        }
    }

    #[test]
    fn rayleigh_quotients_respect_spectral_bounds(
        a in sym_matrix(8),
        raw in proptest::collection::vec(-1.0..1.0f64, 8),
    ) {
        let coords: Vec<f64> = raw.iter().copied().take(a.n()).collect();
        prop_assume!(norm(&coords) > 1e-3);
        let x = UnitVector::new(coords).unwrap();
        let eig = jacobi_eigen(&a);
        let r = a.quad_form(x.coords());
        prop_assert!(r >= eig.min_value() - 1e-9);
        prop_assert!(r <= eig.max_value() + 1e-9);
    }

    #[test]
    fn matrix_text_roundtrips_exactly(a in sym_matrix(6)) {
        let text = format_matrix_text(&a);
        let parsed = parse_matrix_text(&text).unwrap();
        prop_assert_eq!(parsed.max_asymmetry, 0.0);
        for i in 0..a.n() {
            for j in 0..a.n() {
                prop_assert_eq!(parsed.matrix.get(i, j).to_bits(), a.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn rotations_preserve_norms_and_quadratic_forms(
        seed in 0u64..1000,
        raw in proptest::collection::vec(-1.0..1.0f64, 5),
        entries in proptest::collection::vec(-10.0..10.0f64, 25),
    ) {
        let a = SymMatrix::new(5, entries).unwrap();
        prop_assume!(norm(&raw) > 1e-3);
        let q = random_orthogonal(5, RngSeed(seed));
        let rotated = q.apply(&raw);
        prop_assert!((norm(&rotated) - norm(&raw)).abs() <= 1e-12 * (1.0 + norm(&raw)));
        // <(Q^T A Q) x, x> = <A (Qx), Qx>.
        let reduced = a.conjugated(&q);
        let lhs = reduced.quad_form(&raw);
        let rhs = a.quad_form(&rotated);
        let scale = 1.0 + a.frobenius_norm() * dot(&raw, &raw).abs();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }
}

#[test]
fn parse_errors_locate_the_offending_token() {
    let err = parse_matrix_text("2\n1 0\n0 oops\n").unwrap_err();
    match err {
        sphconvex::Error::MatrixParse { line, col, .. } => {
            assert_eq!(line, 3);
            assert_eq!(col, 3);
        }
        other => panic!("unexpected error {other:?}"),
    }
}
