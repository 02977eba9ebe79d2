//! Nonnegative least squares for generator-spanned cones.
//!
//! `min_{c >= 0} ||G c - x||` where the columns of `G` are the cone
//! generators. Projected gradient with step `1/L`, `L = ||G^T G||_F`,
//! capped at 10^4 iterations; an active-set polish on the support
//! (rank-revealing QR solves plus the feasibility-restoring step)
//! tightens the final iterate so feasible points resolve to distances
//! near roundoff even when the bundle has nearly collinear generators.

use crate::linalg::{dot, norm};

pub(crate) struct NnlsResult {
    /// `G c`, the projection of `x` onto the cone.
    pub point: Vec<f64>,
    pub distance: f64,
}

const MAX_ITER: usize = 10_000;
const KKT_TOL: f64 = 1e-12;

fn combine(generators: &[Vec<f64>], coeffs: &[f64], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    for (g, &c) in generators.iter().zip(coeffs) {
        for k in 0..n {
            p[k] = c.mul_add(g[k], p[k]);
        }
    }
    p
}

fn residual(generators: &[Vec<f64>], coeffs: &[f64], x: &[f64]) -> (Vec<f64>, f64) {
    let p = combine(generators, coeffs, x.len());
    let r: Vec<f64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
    let d = norm(&r);
    (p, d)
}

/// Basic least-squares solution of `min ||A beta - x||` over the given
/// columns, by Householder QR with column pivoting. Columns that fall
/// below the rank threshold get a zero coefficient instead of poisoning
/// the solve, which is what makes nearly collinear bundles tractable.
fn qr_basic_solution(columns: &[&[f64]], x: &[f64]) -> Vec<f64> {
    let m = columns.len();
    let mut a: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
    let mut b = x.to_vec();
    let mut perm: Vec<usize> = (0..m).collect();
    let steps = m.min(x.len());
    let mut rank = 0;
    let mut first_pivot = 0.0f64;
    for k in 0..steps {
        let mut best = k;
        let mut best_norm = 0.0;
        for j in k..m {
            let t = norm(&a[j][k..]);
            if t > best_norm {
                best_norm = t;
                best = j;
            }
        }
        if k == 0 {
            first_pivot = best_norm;
        }
        if best_norm <= 1e-13 * first_pivot {
            break;
        }
        a.swap(k, best);
        perm.swap(k, best);

        // Householder reflector annihilating the tail of column k; the
        // sign choice keeps the leading entry away from cancellation.
        let alpha = -a[k][k].signum() * best_norm;
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vn = norm(&v);
        if vn > 0.0 {
            for t in v.iter_mut() {
                *t /= vn;
            }
            for col in a.iter_mut().skip(k) {
                let tail = &mut col[k..];
                let c = 2.0 * dot(tail, &v);
                for (t, w) in tail.iter_mut().zip(&v) {
                    *t -= c * *w;
                }
            }
            let tail = &mut b[k..];
            let c = 2.0 * dot(tail, &v);
            for (t, w) in tail.iter_mut().zip(&v) {
                *t -= c * *w;
            }
        }
        a[k][k] = alpha;
        rank = k + 1;
    }

    let mut beta_p = vec![0.0; m];
    for i in (0..rank).rev() {
        let mut s = b[i];
        for j in (i + 1)..rank {
            s -= a[j][i] * beta_p[j];
        }
        beta_p[i] = s / a[i][i];
    }
    let mut beta = vec![0.0; m];
    for (k, &j) in perm.iter().enumerate() {
        beta[j] = beta_p[k];
    }
    beta
}

/// Exact nonnegative least squares restricted to the support of
/// `coeffs`, seeded from that feasible iterate: unconstrained QR solves
/// alternate with the feasibility-restoring step of the active-set
/// method, shrinking the passive set until the restricted optimum is
/// nonnegative. Returns an improved coefficient vector if it lowers the
/// residual.
fn polish(
    generators: &[Vec<f64>],
    x: &[f64],
    coeffs: &[f64],
    best_distance: f64,
) -> Option<Vec<f64>> {
    let mut passive: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i] > 1e-10).collect();
    if passive.is_empty() {
        return None;
    }
    let mut current = vec![0.0; coeffs.len()];
    for &i in &passive {
        current[i] = coeffs[i];
    }

    let rounds = 2 * passive.len() + 2;
    for _ in 0..rounds {
        if passive.is_empty() {
            break;
        }
        let cols: Vec<&[f64]> = passive.iter().map(|&i| generators[i].as_slice()).collect();
        let beta = qr_basic_solution(&cols, x);
        if beta.iter().all(|&v| v >= 0.0) {
            current.fill(0.0);
            for (k, &i) in passive.iter().enumerate() {
                current[i] = beta[k];
            }
            break;
        }
        // Step from the feasible iterate toward the solve until the
        // first passive coefficient hits zero, then drop it.
        let mut alpha = 1.0f64;
        for (k, &i) in passive.iter().enumerate() {
            if beta[k] <= 0.0 {
                let denom = current[i] - beta[k];
                if denom > 0.0 {
                    alpha = alpha.min(current[i] / denom);
                }
            }
        }
        for (k, &i) in passive.iter().enumerate() {
            current[i] += alpha * (beta[k] - current[i]);
            if current[i] <= 1e-14 {
                current[i] = 0.0;
            }
        }
        passive.retain(|&i| current[i] > 0.0);
    }

    let (_, d) = residual(generators, &current, x);
    (d <= best_distance).then_some(current)
}

/// Projects `x` onto `cone(generators)`.
pub(crate) fn project_nnls(generators: &[Vec<f64>], x: &[f64]) -> NnlsResult {
    let n = x.len();
    let m = generators.len();
    let scale = 1.0 + norm(x);

    // L = ||G^T G||_F bounds the largest eigenvalue of G^T G.
    let mut l = 0.0f64;
    for gi in generators {
        for gj in generators {
            let g = dot(gi, gj);
            l = g.mul_add(g, l);
        }
    }
    let l = l.sqrt().max(1e-300);

    let mut coeffs = vec![0.0; m];
    let (_, mut best_distance) = residual(generators, &coeffs, x);
    let mut best = coeffs.clone();

    for iter in 0..MAX_ITER {
        let p = combine(generators, &coeffs, n);
        let r: Vec<f64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
        let grad: Vec<f64> = generators.iter().map(|g| dot(g, &r)).collect();

        let mut kkt = 0.0f64;
        for i in 0..m {
            let v = if coeffs[i] > 0.0 {
                grad[i].abs()
            } else {
                (-grad[i]).max(0.0)
            };
            kkt = kkt.max(v);
        }
        if kkt <= KKT_TOL * scale {
            break;
        }

        for i in 0..m {
            coeffs[i] = (coeffs[i] - grad[i] / l).max(0.0);
        }

        // Ties go to the newer iterate: the distance saturates in f64
        // (tangential error enters it quadratically) long before the
        // coefficients stop improving, and the step is monotone.
        let (_, d) = residual(generators, &coeffs, x);
        if d <= best_distance {
            best_distance = d;
            best.copy_from_slice(&coeffs);
        }

        if iter % 200 == 199 {
            if let Some(candidate) = polish(generators, x, &coeffs, best_distance) {
                let (_, d) = residual(generators, &candidate, x);
                best_distance = d;
                best = candidate.clone();
                coeffs = candidate;
            }
        }
    }

    if let Some(candidate) = polish(generators, x, &best, best_distance) {
        best = candidate;
    }
    let (point, distance) = residual(generators, &best, x);
    NnlsResult { point, distance }
}
