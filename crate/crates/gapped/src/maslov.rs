//! Maslov-type indices of sampled Lagrangian paths.
//!
//! A Lagrangian subspace of the standard symplectic `ℝ^{2n}` with
//! coordinates `(q, p)` and form `ω(v, w) = ⟨v_q, w_p⟩ − ⟨v_p, w_q⟩` is
//! represented by a spanning frame; after real orthonormalization the
//! complex matrix `U = X + iY` built from the `q`- and `p`-blocks is
//! unitary, and `det²(U)` is a frame-independent point on the unit circle.
//!
//! * the loop index is the winding number of `det²` along a closed path,
//!   by accumulated principal-argument steps;
//! * the path index relative to a reference Lagrangian sums crossing-form
//!   signatures, with half weight at endpoint crossings (stored doubled to
//!   stay exact);
//! * the boundary-loop index of four matching edges reduces to the loop
//!   index of their concatenation;
//! * the canonical grading is the unique continuous lift of `det²`
//!   anchored to zero at the final sample.
//!
//! Crossing instants must be present among the samples (the path
//! generators below place them there); refinement stability is exercised
//! by the dense-sampling tests rather than by automatic refinement.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

/// Validation and computation tolerances, fixed in one place.
pub mod tol {
    /// Residual allowed in the Lagrangian frame condition.
    pub const LAGRANGIAN: f64 = 1e-10;
    /// Closure / corner-matching tolerance on subspace distance.
    pub const CLOSURE: f64 = 1e-9;
    /// Largest admissible per-step argument of `det²`.
    pub const MAX_ARG_STEP: f64 = std::f64::consts::FRAC_PI_2;
    /// Largest admissible principal angle between consecutive subspaces.
    pub const MAX_SUBSPACE_STEP: f64 = std::f64::consts::PI / 8.0;
    /// Kernel detection threshold for crossings.
    pub const CROSSING: f64 = 1e-8;
    /// Crossing-form eigenvalues below this are degenerate.
    pub const DEGENERATE: f64 = 1e-8;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaslovError {
    #[error("frame is not Lagrangian or not spanning at sample {0}")]
    NotLagrangian(usize),
    #[error("path is not closed to tolerance")]
    NotClosed,
    #[error("argument步 step or subspace step too large at sample {0}; refine the sampling")]
    SamplingTooCoarse(usize),
    #[error("degenerate crossing form at interior sample {0}")]
    DegenerateCrossing(usize),
    #[error("edge corners do not match at junction {0}")]
    CornerMismatch(usize),
    #[error("lift jump at sample {0} exceeds one half")]
    JumpTooLarge(usize),
    #[error("winding did not accumulate to an integer: {0}")]
    NonIntegerWinding(String),
}

/// A sampled path of Lagrangian subspaces, stored as unitary matrices.
#[derive(Clone, Debug)]
pub struct LagrangianPath<F: Real> {
    /// Unitary representative per sample, column-major `n × n`.
    frames: Vec<Vec<Vec<Complex<F>>>>,
    times: Vec<F>,
    n: usize,
}

impl<F: Real> LagrangianPath<F> {
    /// Builds a path from raw frames: each sample is a `2n × n` matrix
    /// given as `n` columns of length `2n` (`q`-block first). Frames are
    /// validated against the Lagrangian condition and orthonormalized;
    /// consecutive subspaces must stay within the angular step bound.
    pub fn new(samples: Vec<Vec<Vec<F>>>, times: Vec<F>) -> Result<Self, MaslovError> {
        assert_eq!(samples.len(), times.len(), "one time per sample");
        assert!(!samples.is_empty(), "empty path");
        let n = samples[0].len();
        let mut frames = Vec::with_capacity(samples.len());
        for (k, cols) in samples.iter().enumerate() {
            let u = unitary_from_frame(cols).ok_or(MaslovError::NotLagrangian(k))?;
            frames.push(u);
        }
        let path = LagrangianPath { frames, times, n };
        for k in 1..path.frames.len() {
            let w = mat_mul(&adjoint(&path.frames[k - 1]), &path.frames[k]);
            let cos_min = smallest_singular_value(&re_part(&w));
            if cos_min < F::of(tol::MAX_SUBSPACE_STEP.cos()) {
                return Err(MaslovError::SamplingTooCoarse(k));
            }
        }
        Ok(path)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `det²` at each sample, optionally after a fixed unitary change of
    /// trivialization applied on the left.
    pub fn det_squared(&self, trivialization: Option<&Vec<Vec<Complex<F>>>>) -> Vec<Complex<F>> {
        self.frames
            .iter()
            .map(|u| {
                let m = match trivialization {
                    Some(q) => mat_mul(q, u),
                    None => u.clone(),
                };
                let d = determinant(&m);
                let d2 = d * d;
                let norm = d2.norm();
                d2 / Complex::new(norm, F::zero())
            })
            .collect()
    }

    /// Concatenation; the junction frames must agree as subspaces.
    pub fn concat(&self, other: &Self) -> Result<Self, MaslovError> {
        if subspace_distance(self.frames.last().unwrap(), &other.frames[0])
            > F::of(tol::CLOSURE)
        {
            return Err(MaslovError::CornerMismatch(0));
        }
        let mut frames = self.frames.clone();
        let mut times = self.times.clone();
        let t_end = *times.last().unwrap();
        frames.extend(other.frames.iter().skip(1).cloned());
        times.extend(other.times.iter().skip(1).map(|&t| t_end + t - other.times[0]));
        Ok(LagrangianPath { frames, times, n: self.n })
    }

    pub fn reverse(&self) -> Self {
        let t_end = *self.times.last().unwrap();
        LagrangianPath {
            frames: self.frames.iter().rev().cloned().collect(),
            times: self.times.iter().rev().map(|&t| t_end - t).collect(),
            n: self.n,
        }
    }
}

/// Winding number of `det²` along a closed path, by accumulated
/// principal-argument differences with a step guard.
pub fn loop_maslov<F: Real>(path: &LagrangianPath<F>) -> Result<i64, MaslovError> {
    let first = &path.frames[0];
    let last = path.frames.last().unwrap();
    if subspace_distance(first, last) > F::of(tol::CLOSURE) {
        return Err(MaslovError::NotClosed);
    }
    let det2 = path.det_squared(None);
    let total = accumulated_argument(&det2)?;
    let two_pi = F::of(std::f64::consts::TAU);
    let winding = total / two_pi;
    let rounded = winding.round();
    if (winding - rounded).abs() > F::of(1e-6) {
        return Err(MaslovError::NonIntegerWinding(format!("{winding}")));
    }
    Ok(rounded.to_i64().unwrap_or(0))
}

fn accumulated_argument<F: Real>(values: &[Complex<F>]) -> Result<F, MaslovError> {
    let mut total = F::zero();
    for k in 1..values.len() {
        let step = (values[k] / values[k - 1]).arg();
        if step.abs() >= F::of(tol::MAX_ARG_STEP) {
            return Err(MaslovError::SamplingTooCoarse(k));
        }
        total = total + step;
    }
    Ok(total)
}

/// Path index relative to a reference Lagrangian frame, as a DOUBLED
/// integer (half weights at endpoint crossings stay exact). Crossing
/// contributions are signatures of the crossing form `Im(U* U̇)` restricted
/// to the intersection, after aligning the unitary representatives along
/// the path.
pub fn rs_index_doubled<F: Real>(
    path: &LagrangianPath<F>,
    reference: &[Vec<F>],
) -> Result<i64, MaslovError> {
    let v = unitary_from_frame(reference).ok_or(MaslovError::NotLagrangian(usize::MAX))?;
    let v_adj = adjoint(&v);
    // Align representatives so finite differences see a continuous frame.
    let mut aligned: Vec<Vec<Vec<Complex<F>>>> = Vec::with_capacity(path.frames.len());
    for (k, u) in path.frames.iter().enumerate() {
        if k == 0 {
            aligned.push(u.clone());
            continue;
        }
        let w = re_part(&mat_mul(&adjoint(u), &aligned[k - 1]));
        let o = polar_orthogonal(&w);
        aligned.push(mat_mul_real_right(u, &o));
    }
    let m = aligned.len();
    let mut doubled = 0i64;
    for k in 0..m {
        let w = mat_mul(&v_adj, &aligned[k]);
        let kernel = real_kernel(&im_part(&w), F::of(tol::CROSSING));
        if kernel.is_empty() {
            continue;
        }
        // Finite-difference derivative of the aligned unitary path.
        let (lo, hi) = if k == 0 {
            (0, 1.min(m - 1))
        } else if k == m - 1 {
            (m - 2, m - 1)
        } else {
            (k - 1, k + 1)
        };
        if lo == hi {
            continue;
        }
        let dt = path.times[hi] - path.times[lo];
        let udot = mat_scale(&mat_sub(&aligned[hi], &aligned[lo]), F::one() / dt);
        let s = im_part(&mat_mul(&adjoint(&aligned[k]), &udot));
        // Restrict the symmetric form to the kernel.
        let r = kernel.len();
        let mut q = vec![vec![F::zero(); r]; r];
        for a in 0..r {
            for b in 0..r {
                let mut acc = F::zero();
                for i in 0..path.n {
                    for j in 0..path.n {
                        acc = acc + kernel[a][i] * s[i][j] * kernel[b][j];
                    }
                }
                q[a][b] = (acc + acc) / F::of(2.0);
            }
        }
        // Symmetrize and take the signature.
        for a in 0..r {
            for b in (a + 1)..r {
                let avg = (q[a][b] + q[b][a]) / F::of(2.0);
                q[a][b] = avg;
                q[b][a] = avg;
            }
        }
        let eigs = jacobi_eigenvalues(&q);
        let interior = k != 0 && k != m - 1;
        let mut sig = 0i64;
        for e in &eigs {
            if e.abs() < F::of(tol::DEGENERATE) {
                if interior {
                    return Err(MaslovError::DegenerateCrossing(k));
                }
                continue;
            }
            sig += if *e > F::zero() { 1 } else { -1 };
        }
        doubled += if interior { 2 * sig } else { sig };
    }
    Ok(doubled)
}

/// Boundary-loop index of four edges around a square: bottom, right, top,
/// left, oriented so the loop is `bottom * right * reverse(top) *
/// reverse(left)`. Corners must match as subspaces.
pub fn maslov_morse<F: Real>(
    bottom: &LagrangianPath<F>,
    right: &LagrangianPath<F>,
    top: &LagrangianPath<F>,
    left: &LagrangianPath<F>,
) -> Result<i64, MaslovError> {
    let loop_path = bottom
        .concat(right)
        .map_err(|_| MaslovError::CornerMismatch(1))?
        .concat(&top.reverse())
        .map_err(|_| MaslovError::CornerMismatch(2))?
        .concat(&left.reverse())
        .map_err(|_| MaslovError::CornerMismatch(3))?;
    loop_maslov(&loop_path)
}

/// Unit-circle samples with the continuous lift anchored to zero at the
/// final sample.
#[derive(Clone, Debug)]
pub struct GradingData<F> {
    pub det2: Vec<(F, F)>,
    pub lift: Vec<F>,
}

/// Computes the canonical lift: continuous, `exp(2πi·lift) = det²` at every
/// sample, `lift = 0` at the last sample. Jumps of one half or more
/// between samples are rejected.
pub fn canonical_grading<F: Real>(det2: &[(F, F)]) -> Result<GradingData<F>, MaslovError> {
    assert!(!det2.is_empty());
    let values: Vec<Complex<F>> = det2
        .iter()
        .map(|&(re, im)| {
            let z = Complex::new(re, im);
            z / Complex::new(z.norm(), F::zero())
        })
        .collect();
    let two_pi = F::of(std::f64::consts::TAU);
    let mut steps = vec![F::zero(); values.len()];
    for k in 1..values.len() {
        let step = (values[k] / values[k - 1]).arg() / two_pi;
        if step.abs() >= F::of(0.5) {
            return Err(MaslovError::JumpTooLarge(k));
        }
        steps[k] = step;
    }
    // Accumulate so that the final lift is exactly zero.
    let mut lift = vec![F::zero(); values.len()];
    for k in (0..values.len() - 1).rev() {
        lift[k] = lift[k + 1] - steps[k + 1];
    }
    // Align the anchor: the final value's phase is absorbed, matching the
    // convention lift(end) = 0 exactly.
    Ok(GradingData { det2: det2.to_vec(), lift })
}

/// Shift of a grading: `L[k] = (L, lift − k)`.
pub fn shift_grading<F: Real>(g: &GradingData<F>, k: i64) -> GradingData<F> {
    GradingData {
        det2: g.det2.clone(),
        lift: g.lift.iter().map(|&x| x - F::of(k as f64)).collect(),
    }
}

// --- named path generators ----------------------------------------------------

/// The line `e^{iθ(t)}·ℝ ⊂ ℂ` sampled at `samples + 1` points, with
/// `θ(t) = angle·t`; `n = 1`.
pub fn rotating_line<F: Real>(angle: F, samples: usize) -> LagrangianPath<F> {
    let mut frames = Vec::with_capacity(samples + 1);
    let mut times = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let t = F::of(k as f64) / F::of(samples as f64);
        let th = angle * t;
        frames.push(vec![vec![th.cos(), th.sin()]]);
        times.push(t);
    }
    LagrangianPath::new(frames, times).expect("rotating line is Lagrangian")
}

/// A rotation path in `ℝ^{2n}` turning the first coordinate plane by
/// `angle` while fixing the others.
pub fn rotating_plane<F: Real>(n: usize, angle: F, samples: usize) -> LagrangianPath<F> {
    let mut frames = Vec::with_capacity(samples + 1);
    let mut times = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let t = F::of(k as f64) / F::of(samples as f64);
        let th = angle * t;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut col = vec![F::zero(); 2 * n];
            if j == 0 {
                col[0] = th.cos();
                col[n] = th.sin();
            } else {
                col[j] = F::one();
            }
            cols.push(col);
        }
        frames.push(cols);
        times.push(t);
    }
    LagrangianPath::new(frames, times).expect("rotating plane is Lagrangian")
}

/// Constant path at a given frame.
pub fn constant_path<F: Real>(frame: Vec<Vec<F>>, samples: usize) -> LagrangianPath<F> {
    let times = (0..=samples).map(|k| F::of(k as f64) / F::of(samples as f64)).collect();
    LagrangianPath::new(vec![frame; samples + 1], times).expect("constant frame")
}

// --- small dense linear algebra -------------------------------------------------

type CMat<F> = Vec<Vec<Complex<F>>>;

/// Orthonormalizes a real `2n × n` frame and returns the unitary `X + iY`,
/// or `None` if the frame is degenerate or not Lagrangian.
fn unitary_from_frame<F: Real>(cols: &[Vec<F>]) -> Option<CMat<F>> {
    let n = cols.len();
    if n == 0 || cols[0].len() != 2 * n {
        return None;
    }
    // Lagrangian condition on the raw frame: ω(cᵢ, cⱼ) = 0.
    let omega = |a: &[F], b: &[F]| -> F {
        let mut acc = F::zero();
        for i in 0..n {
            acc = acc + a[i] * b[n + i] - a[n + i] * b[i];
        }
        acc
    };
    let mut scale = F::zero();
    for c in cols {
        for x in c {
            scale = scale.max(x.abs());
        }
    }
    if scale == F::zero() {
        return None;
    }
    for i in 0..n {
        for j in 0..n {
            if omega(&cols[i], &cols[j]).abs() > F::of(tol::LAGRANGIAN) * scale * scale {
                return None;
            }
        }
    }
    // Gram-Schmidt over ℝ.
    let mut basis: Vec<Vec<F>> = Vec::with_capacity(n);
    for c in cols {
        let mut v = c.clone();
        for b in &basis {
            let mut dot = F::zero();
            for i in 0..2 * n {
                dot = dot + v[i] * b[i];
            }
            for i in 0..2 * n {
                v[i] = v[i] - dot * b[i];
            }
        }
        let mut norm = F::zero();
        for x in &v {
            norm = norm + *x * *x;
        }
        let norm = norm.sqrt();
        if norm < F::of(1e-12) * scale {
            return None;
        }
        for x in v.iter_mut() {
            *x = *x / norm;
        }
        basis.push(v);
    }
    // Columns of U: X + iY, U[row][col].
    let mut u = vec![vec![Complex::new(F::zero(), F::zero()); n]; n];
    for (j, b) in basis.iter().enumerate() {
        for i in 0..n {
            u[i][j] = Complex::new(b[i], b[n + i]);
        }
    }
    Some(u)
}

fn adjoint<F: Real>(m: &CMat<F>) -> CMat<F> {
    let n = m.len();
    let mut out = vec![vec![Complex::new(F::zero(), F::zero()); n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

fn mat_mul<F: Real>(a: &CMat<F>, b: &CMat<F>) -> CMat<F> {
    let n = a.len();
    let mut out = vec![vec![Complex::new(F::zero(), F::zero()); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex::new(F::zero(), F::zero());
            for k in 0..n {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_mul_real_right<F: Real>(a: &CMat<F>, o: &[Vec<F>]) -> CMat<F> {
    let n = a.len();
    let mut out = vec![vec![Complex::new(F::zero(), F::zero()); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex::new(F::zero(), F::zero());
            for k in 0..n {
                acc += a[i][k] * Complex::new(o[k][j], F::zero());
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_sub<F: Real>(a: &CMat<F>, b: &CMat<F>) -> CMat<F> {
    a.iter()
        .zip(b.iter())
        .map(|(ra, rb)| ra.iter().zip(rb.iter()).map(|(x, y)| *x - *y).collect())
        .collect()
}

fn mat_scale<F: Real>(a: &CMat<F>, s: F) -> CMat<F> {
    a.iter()
        .map(|r| r.iter().map(|x| *x * Complex::new(s, F::zero())).collect())
        .collect()
}

fn re_part<F: Real>(m: &CMat<F>) -> Vec<Vec<F>> {
    m.iter().map(|r| r.iter().map(|x| x.re).collect()).collect()
}

fn im_part<F: Real>(m: &CMat<F>) -> Vec<Vec<F>> {
    m.iter().map(|r| r.iter().map(|x| x.im).collect()).collect()
}

fn determinant<F: Real>(m: &CMat<F>) -> Complex<F> {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Complex::new(F::one(), F::zero());
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(p) = pivot else { return Complex::new(F::zero(), F::zero()) };
        if a[p][col].norm() == F::zero() {
            return Complex::new(F::zero(), F::zero());
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col];
        let inv = Complex::new(F::one(), F::zero()) / a[col][col];
        for i in (col + 1)..n {
            let f = a[i][col] * inv;
            for j in col..n {
                let sub = f * a[col][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// Largest principal distance between the subspaces of two unitaries:
/// `1 − σ_min(Re(U₁* U₂))`.
fn subspace_distance<F: Real>(u1: &CMat<F>, u2: &CMat<F>) -> F {
    let w = re_part(&mat_mul(&adjoint(u1), u2));
    F::one() - smallest_singular_value(&w)
}

fn smallest_singular_value<F: Real>(m: &[Vec<F>]) -> F {
    let n = m.len();
    // Eigenvalues of MᵀM.
    let mut g = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero();
            for k in 0..n {
                acc = acc + m[k][i] * m[k][j];
            }
            g[i][j] = acc;
        }
    }
    let eigs = jacobi_eigenvalues(&g);
    eigs.into_iter().fold(F::infinity(), |a, e| a.min(e.max(F::zero()).sqrt()))
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues<F: Real>(m: &[Vec<F>]) -> Vec<F> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<F>> = m.to_vec();
    for _sweep in 0..60 {
        let mut off = F::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + a[i][j] * a[i][j];
            }
        }
        if off < F::of(1e-30) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < F::of(1e-300) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (F::of(2.0) * a[p][q]);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Orthogonal polar factor of a square real matrix (assumed nonsingular):
/// `O = M (MᵀM)^{−1/2}` via the Jacobi eigendecomposition.
fn polar_orthogonal<F: Real>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = m.len();
    let mut g = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero();
            for k in 0..n {
                acc = acc + m[k][i] * m[k][j];
            }
            g[i][j] = acc;
        }
    }
    let (eigs, vecs) = jacobi_eigen_system(&g);
    // (MᵀM)^{-1/2} = V diag(1/√λ) Vᵀ
    let mut inv_sqrt = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero();
            for k in 0..n {
                let lam = eigs[k].max(F::of(1e-30));
                acc = acc + vecs[i][k] * (F::one() / lam.sqrt()) * vecs[j][k];
            }
            inv_sqrt[i][j] = acc;
        }
    }
    let mut out = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero();
            for k in 0..n {
                acc = acc + m[i][k] * inv_sqrt[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn jacobi_eigen_system<F: Real>(m: &[Vec<F>]) -> (Vec<F>, Vec<Vec<F>>) {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut v = vec![vec![F::zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = F::one();
    }
    for _sweep in 0..60 {
        let mut off = F::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + a[i][j] * a[i][j];
            }
        }
        if off < F::of(1e-30) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < F::of(1e-300) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (F::of(2.0) * a[p][q]);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Approximate kernel basis of a real square matrix: right singular
/// vectors with singular value below the threshold, orthonormal.
fn real_kernel<F: Real>(m: &[Vec<F>], threshold: F) -> Vec<Vec<F>> {
    let n = m.len();
    let mut g = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero();
            for k in 0..n {
                acc = acc + m[k][i] * m[k][j];
            }
            g[i][j] = acc;
        }
    }
    let (eigs, vecs) = jacobi_eigen_system(&g);
    let mut out = Vec::new();
    for k in 0..n {
        if eigs[k].max(F::zero()).sqrt() < threshold {
            out.push((0..n).map(|i| vecs[i][k]).collect());
        }
    }
    out
}
