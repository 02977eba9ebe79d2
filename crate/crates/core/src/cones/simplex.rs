//! Pointedness test for generator-spanned cones.
//!
//! A cone spanned by nonzero generators is pointed exactly when the
//! origin is not a convex combination of the normalized generators, so
//! the feasibility system `sum c_i g_i = 0, sum c_i = 1, c >= 0` must be
//! infeasible. Phase one of the dense two-phase simplex method decides
//! this: artificial variables give the starting basis and Bland's rule
//! prevents cycling; the system is feasible iff the artificial objective
//! reaches (numerically) zero.

const PIVOT_TOL: f64 = 1e-12;
const FEASIBLE_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 10_000;

/// Returns `true` when `cone(generators)` (generators normalized by the
/// caller) is pointed.
pub(crate) fn is_pointed_lp(generators: &[Vec<f64>], n: usize) -> bool {
    let m = generators.len();
    let rows = n + 1;
    let cols = m + rows; // structural variables then artificials
    // Tableau: rows x (cols + 1), last column is the rhs.
    let width = cols + 1;
    let mut t = vec![0.0; rows * width];
    for (j, g) in generators.iter().enumerate() {
        for i in 0..n {
            t[i * width + j] = g[i];
        }
        t[n * width + j] = 1.0;
    }
    for i in 0..rows {
        t[i * width + m + i] = 1.0;
    }
    t[n * width + cols] = 1.0; // rhs: (0, ..., 0, 1)

    let mut basis: Vec<usize> = (m..m + rows).collect();

    // Objective row for min(sum of artificials), expressed in reduced
    // form over the current basis: z_j - c_j = sum of artificial rows.
    let mut obj = vec![0.0; width];
    for i in 0..rows {
        for k in 0..width {
            obj[k] += t[i * width + k];
        }
    }
    for j in m..cols {
        obj[j] = 0.0; // artificial columns have cost 1, reduced cost 0
    }

    for _ in 0..MAX_PIVOTS {
        // Bland: entering = lowest-index column with positive reduced
        // profit (we maximize -objective, i.e. pick obj[j] > tol).
        let mut enter = None;
        for j in 0..cols {
            if obj[j] > PIVOT_TOL {
                enter = Some(j);
                break;
            }
        }
        let Some(enter) = enter else { break };

        // Ratio test; Bland tie-break on the smallest basis variable.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..rows {
            let a = t[i * width + enter];
            if a > PIVOT_TOL {
                let ratio = t[i * width + cols] / a;
                let better = ratio < best_ratio - PIVOT_TOL
                    || (ratio < best_ratio + PIVOT_TOL
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded phase-one objective cannot happen (bounded by 0);
            // bail out conservatively.
            break;
        };

        let piv = t[leave * width + enter];
        for k in 0..width {
            t[leave * width + k] /= piv;
        }
        for i in 0..rows {
            if i != leave {
                let f = t[i * width + enter];
                if f != 0.0 {
                    for k in 0..width {
                        t[i * width + k] -= f * t[leave * width + k];
                    }
                }
            }
        }
        let f = obj[enter];
        if f != 0.0 {
            for k in 0..width {
                obj[k] -= f * t[leave * width + k];
            }
        }
        basis[leave] = enter;
    }

    // Artificial objective value = sum of artificial basic values.
    let mut artificial_mass = 0.0;
    for i in 0..rows {
        if basis[i] >= m {
            artificial_mass += t[i * width + cols];
        }
    }
    artificial_mass > FEASIBLE_TOL
}
