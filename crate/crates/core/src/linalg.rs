//! Dense symmetric linear algebra on plain `Vec<f64>` storage.
//!
//! Everything here is deterministic: the eigensolver is a fixed-order
//! cyclic Jacobi iteration, random sampling is driven by explicit
//! [`RngSeed`] values, and dot products accumulate with fused
//! multiply-adds so results do not depend on compiler flags or thread
//! schedules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Dot product with fused multiply-add accumulation.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s = x.mul_add(*y, s);
    }
    s
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn all_finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

/// 64-bit seed for every sampling entry point in this crate.
///
/// A seed names a reproducible stream: the same seed always yields the
/// same draws, on any thread count. Derived task streams come from
/// [`RngSeed::substream`], which steps the SplitMix64 sequence, so a
/// parallel verifier can hand sample `i` the stream `seed.substream(tag)
/// .substream(i)` and aggregate in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

const SPLITMIX_GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: u64) -> u64 {
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSeed {
    /// Derived seed for task `index`: the `(index + 1)`-th output of the
    /// SplitMix64 sequence started at this seed.
    pub fn substream(self, index: u64) -> RngSeed {
        RngSeed(splitmix64(
            self.0
                .wrapping_add(index.wrapping_add(1).wrapping_mul(SPLITMIX_GOLDEN)),
        ))
    }

    /// Counter-based generator (ChaCha12) keyed by this seed.
    pub fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }
}

/// Unit vector on the sphere, renormalized at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Normalizes `coords`. Rejects non-finite entries and vectors with
    /// norm below `1e-150`.
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        if !all_finite(&coords) {
            return Err(Error::NonFinite {
                context: "unit vector",
            });
        }
        let n = norm(&coords);
        if n < 1e-150 {
            return Err(Error::ZeroVector);
        }
        for c in &mut coords {
            *c /= n;
        }
        Ok(UnitVector { coords })
    }

    /// Wraps coordinates already known to be unit (callers guarantee
    /// `|norm - 1| <= 1e-12`).
    pub(crate) fn from_unit_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!((norm(&coords) - 1.0).abs() <= 1e-12);
        UnitVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.coords, &other.coords)
    }

    /// Antipode `-x`.
    pub fn negated(&self) -> UnitVector {
        UnitVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for UnitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // Validate instead of renormalizing so serialize -> parse is
        // bit-identical.
        let coords = Vec::<f64>::deserialize(deserializer)?;
        if !all_finite(&coords) {
            return Err(serde::de::Error::custom("non-finite entry in unit vector"));
        }
        let n = norm(&coords);
        if (n - 1.0).abs() > 1e-12 {
            return Err(serde::de::Error::custom(format!(
                "vector norm {n} is not 1 within 1e-12"
            )));
        }
        Ok(UnitVector { coords })
    }
}

/// Dense symmetric matrix, row-major. The constructor symmetrizes its
/// input as `(A + A^T)/2`, so every stored matrix is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Builds from row-major entries, symmetrizing. Rejects non-finite
    /// entries, `n = 0`, and length mismatches.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite { context: "matrix" });
        }
        let mut m = SymMatrix { n, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (m.entries[i * n + j] + m.entries[j * n + i]);
                m.entries[i * n + j] = v;
                m.entries[j * n + i] = v;
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        SymMatrix::new(n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        SymMatrix { n, entries }
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut a = SymMatrix::new(n, vec![0.0; n * n])?;
        for i in 0..n {
            a.entries[i * n + i] = d[i];
        }
        if !all_finite(d) {
            return Err(Error::NonFinite { context: "matrix" });
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// `A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec: dimension mismatch");
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `<A x, x>`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(&self.matvec(x), x)
    }

    /// `<A x, y>`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(&self.matvec(x), y)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.entries)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &SymMatrix, factor: f64) -> SymMatrix {
        assert_eq!(self.n, other.n, "add_scaled: dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| factor.mul_add(*b, *a))
            .collect();
        SymMatrix {
            n: self.n,
            entries,
        }
    }

    pub fn scaled(&self, factor: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Principal submatrix on the index set `keep` (in the given order).
    pub fn principal_submatrix(&self, keep: &[usize]) -> SymMatrix {
        let m = keep.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in keep {
            for &j in keep {
                entries.push(self.get(i, j));
            }
        }
        SymMatrix { n: m, entries }
    }

    /// `Q^T A Q` for orthogonal `Q`.
    pub fn conjugated(&self, q: &Orthogonal) -> SymMatrix {
        assert_eq!(self.n, q.n, "conjugated: dimension mismatch");
        let n = self.n;
        // B = A Q
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s = self.get(i, k).mul_add(q.get(k, j), s);
                }
                b[i * n + j] = s;
            }
        }
        // C = Q^T B, then force exact symmetry.
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s = q.get(k, i).mul_add(b[k * n + j], s);
                }
                c[i * n + j] = s;
            }
        }
        SymMatrix::new(n, c).expect("conjugation of a finite matrix is finite")
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    n: usize,
    values: Vec<f64>,
    // Row-major n x n; column k is the eigenvector for values[k].
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.n - 1]
    }

    /// Eigenvector for `values()[k]`.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vectors[i * self.n + k]).collect()
    }

    /// `V diag(values) V^T`, for residual checks.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.values[k] * self.vectors[i * n + k] * self.vectors[j * n + k];
                }
                entries[i * n + j] = s;
            }
        }
        SymMatrix { n, entries }
    }
}

fn off_diag_frobenius(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = a[i * n + j].mul_add(a[i * n + j], s);
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps row pairs in fixed order and rotates each nonzero off-diagonal
/// entry away; stops once the off-diagonal Frobenius norm falls below
/// `1e-13 * (1 + ||A||_F)`, with a hard cap of 100 sweeps. Output order
/// is ascending by eigenvalue, ties kept in sweep order, so the result
/// is deterministic.
pub fn jacobi_eigen(a: &SymMatrix) -> EigenDecomposition {
    let n = a.n;
    let mut m = a.entries.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = 1e-13 * (1.0 + a.frobenius_norm());

    for _sweep in 0..100 {
        if off_diag_frobenius(&m, n) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle from the standard two-sided Jacobi
                // formulas; `t` is tan(theta) of the smaller rotation.
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = m[p * n + p];
                let aqq = m[q * n + q];
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = m[k * n + p];
                        let akq = m[k * n + q];
                        m[k * n + p] = akp - s * (akq + tau * akp);
                        m[k * n + q] = akq + s * (akp - tau * akq);
                        m[p * n + k] = m[k * n + p];
                        m[q * n + k] = m[k * n + q];
                    }
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp - s * (vkq + tau * vkp);
                    v[k * n + q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .partial_cmp(&m[j * n + j])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    EigenDecomposition { n, values, vectors }
}

/// Orthonormal basis of the tangent space at `y`: Gram-Schmidt over the
/// standard basis with the pivot column (largest `|y_i|`, lowest index on
/// ties) dropped.
pub fn tangent_basis(y: &UnitVector) -> Vec<UnitVector> {
    let n = y.dim();
    let mut pivot = 0;
    for i in 1..n {
        if y.get(i).abs() > y.get(pivot).abs() {
            pivot = i;
        }
    }
    let mut frame: Vec<Vec<f64>> = vec![y.coords().to_vec()];
    for i in 0..n {
        if i == pivot {
            continue;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        // Two orthogonalization passes keep the frame orthonormal to
        // roundoff even when e_i is nearly parallel to the span.
        for _ in 0..2 {
            for w in &frame {
                let c = dot(&v, w);
                for k in 0..n {
                    v[k] = (-c).mul_add(w[k], v[k]);
                }
            }
        }
        let nv = norm(&v);
        assert!(
            nv > 1e-8,
            "tangent_basis: standard basis vector degenerated under projection"
        );
        for x in &mut v {
            *x /= nv;
        }
        frame.push(v);
    }
    frame
        .into_iter()
        .skip(1)
        .map(UnitVector::from_unit_unchecked)
        .collect()
}

pub(crate) fn standard_normal_vec(rng: &mut ChaCha12Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform unit vector orthogonal to `y`: a standard Gaussian draw is
/// projected onto the orthogonal complement of `y` (twice, for numeric
/// orthogonality) and normalized. Draws whose projection has norm below
/// `1e-8` are rejected and redrawn.
pub fn sample_orthogonal_unit(y: &UnitVector, seed: RngSeed) -> UnitVector {
    let mut rng = seed.rng();
    sample_orthogonal_unit_with(y, &mut rng)
}

pub(crate) fn sample_orthogonal_unit_with(y: &UnitVector, rng: &mut ChaCha12Rng) -> UnitVector {
    let n = y.dim();
    assert!(n >= 2, "sample_orthogonal_unit needs dimension >= 2");
    for _ in 0..10_000 {
        let mut z = standard_normal_vec(rng, n);
        for _ in 0..2 {
            let c = dot(&z, y.coords());
            for k in 0..n {
                z[k] = (-c).mul_add(y.get(k), z[k]);
            }
        }
        let nz = norm(&z);
        if nz < 1e-8 {
            continue;
        }
        for x in &mut z {
            *x /= nz;
        }
        return UnitVector::from_unit_unchecked(z);
    }
    unreachable!("Gaussian draws cannot all project to zero");
}

/// Orthogonal matrix, validated at construction
/// (`||Q^T Q - I||_F <= 1e-10`).
#[derive(Debug, Clone, PartialEq)]
pub struct Orthogonal {
    n: usize,
    entries: Vec<f64>,
}

impl Orthogonal {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite {
                context: "orthogonal matrix",
            });
        }
        let q = Orthogonal { n, entries };
        let dev = q.orthogonality_deviation();
        if dev > 1e-10 {
            return Err(Error::NotOrthogonal { deviation: dev });
        }
        Ok(q)
    }

    fn orthogonality_deviation(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut g = 0.0;
                for k in 0..n {
                    g = self.entries[k * n + i].mul_add(self.entries[k * n + j], g);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                s = (g - target).mul_add(g - target, s);
            }
        }
        s.sqrt()
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Orthogonal { n, entries }
    }

    /// `diag(1, Q_tail)`, the block rotation fixing the first axis.
    pub fn block_diag_one(tail: &Orthogonal) -> Orthogonal {
        let n = tail.n + 1;
        let mut entries = vec![0.0; n * n];
        entries[0] = 1.0;
        for i in 0..tail.n {
            for j in 0..tail.n {
                entries[(i + 1) * n + (j + 1)] = tail.get(i, j);
            }
        }
        Orthogonal { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `Q x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "apply: dimension mismatch");
        (0..self.n)
            .map(|i| dot(&self.entries[i * self.n..(i + 1) * self.n], x))
            .collect()
    }

    /// `Q^T x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "apply_transpose: dimension mismatch");
        let n = self.n;
        let mut out = vec![0.0; n];
        for k in 0..n {
            for i in 0..n {
                out[i] = self.entries[k * n + i].mul_add(x[k], out[i]);
            }
        }
        out
    }

    /// `Q^T`, which is also `Q^{-1}`.
    pub fn transposed(&self) -> Orthogonal {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        Orthogonal { n, entries }
    }
}

/// Haar-ish random orthogonal matrix: Gram-Schmidt applied to a Gaussian
/// matrix, with a second orthogonalization pass.
pub fn random_orthogonal(n: usize, seed: RngSeed) -> Orthogonal {
    assert!(n >= 1);
    let mut rng = seed.rng();
    'outer: loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v = standard_normal_vec(&mut rng, n);
            for _ in 0..2 {
                for w in &cols {
                    let c = dot(&v, w);
                    for k in 0..n {
                        v[k] = (-c).mul_add(w[k], v[k]);
                    }
                }
            }
            let nv = norm(&v);
            if nv < 1e-8 {
                continue 'outer;
            }
            for x in &mut v {
                *x /= nv;
            }
            cols.push(v);
        }
        let mut entries = vec![0.0; n * n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                entries[i * n + j] = col[i];
            }
        }
        return Orthogonal::new(n, entries).expect("Gram-Schmidt output is orthogonal");
    }
}

/// Matrix text parse result; `max_asymmetry` is the largest
/// `|a_ij - a_ji|` seen before symmetrization.
#[derive(Debug, Clone)]
pub struct ParsedMatrix {
    pub matrix: SymMatrix,
    pub max_asymmetry: f64,
}

/// Parses the matrix text format: first line is the dimension `n`,
/// followed by `n * n` whitespace-separated entries (row-major; line
/// breaks between rows are conventional but not required). The matrix is
/// symmetrized as `(A + A^T)/2`; callers decide whether `max_asymmetry`
/// warrants a warning.
pub fn parse_matrix_text(text: &str) -> Result<ParsedMatrix> {
    let mut tokens = text.lines().enumerate().flat_map(|(line_idx, line)| {
        line.split_whitespace().map(move |tok| {
            let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
            (line_idx + 1, col, tok)
        })
    });

    let (line, col, tok) = tokens.next().ok_or(Error::MatrixParse {
        line: 1,
        col: 1,
        msg: "empty file: expected dimension".into(),
    })?;
    let n: usize = tok.parse().map_err(|_| Error::MatrixParse {
        line,
        col,
        msg: format!("expected dimension (positive integer), got `{tok}`"),
    })?;
    if n == 0 {
        return Err(Error::MatrixParse {
            line,
            col,
            msg: "dimension must be positive".into(),
        });
    }
    if n > 4096 {
        return Err(Error::MatrixParse {
            line,
            col,
            msg: format!("dimension {n} exceeds the supported maximum 4096"),
        });
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut last = (line, col);
    for _ in 0..n * n {
        let (line, col, tok) = tokens.next().ok_or(Error::MatrixParse {
            line: last.0,
            col: last.1,
            msg: format!("expected {} entries, file ended early", n * n),
        })?;
        last = (line, col);
        let v: f64 = tok.parse().map_err(|_| Error::MatrixParse {
            line,
            col,
            msg: format!("expected a number, got `{tok}`"),
        })?;
        if !v.is_finite() {
            return Err(Error::MatrixParse {
                line,
                col,
                msg: format!("entry `{tok}` is not finite"),
            });
        }
        entries.push(v);
    }
    if let Some((line, col, tok)) = tokens.next() {
        return Err(Error::MatrixParse {
            line,
            col,
            msg: format!("unexpected trailing token `{tok}`"),
        });
    }

    let mut max_asymmetry: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asymmetry = max_asymmetry.max((entries[i * n + j] - entries[j * n + i]).abs());
        }
    }
    Ok(ParsedMatrix {
        matrix: SymMatrix::new(n, entries)?,
        max_asymmetry,
    })
}

/// Writes the matrix text format with full round-trip precision.
pub fn format_matrix_text(a: &SymMatrix) -> String {
    let mut out = format!("{}\n", a.n());
    for i in 0..a.n() {
        let row: Vec<String> = a.row(i).iter().map(|v| format!("{v}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
