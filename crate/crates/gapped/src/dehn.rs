//! The model Dehn twist on the cotangent bundle of the round sphere.
//!
//! Points are pairs `(u, v) ∈ ℝ^{n+1} × ℝ^{n+1}` with `‖v‖ = 1` and
//! `⟨u, v⟩ = 0`: `v` is the base point, `u` the fiber coordinate, and
//! `μ(u, v) = ‖u‖` the fiber length. The normalized geodesic flow
//!
//! ```text
//!   σ_t(u, v) = (cos t · u − sin t ‖u‖ v,  cos t · v + sin t · u/‖u‖)
//! ```
//!
//! rotates by angle `t` in the plane spanned by `v` and `u/‖u‖`; `σ_π` is
//! the antipodal involution. The twist with profile `R` and scale `λ` is
//! `τ_λ(y) = σ_{2πR'(μ(y)/λ)}(y)` off the zero section and the antipodal
//! map on it; points with `μ ≥ λ` are fixed exactly since `R'` vanishes
//! identically beyond one.
//!
//! With the Liouville form `θ = Σ uᵢ dvᵢ` and `ω = −dθ`, the twist is
//! exact: `τ_λ*θ − θ = dK_λ` for
//!
//! ```text
//!   K_λ(y) = 2π ( μ·R'_λ(μ) − R_λ(μ) ),   μ = μ(y),
//! ```
//!
//! the primitive of the generating Hamiltonian; the checks below verify
//! this identity by finite differences. The quadric chart `Φ` identifies
//! the punctured zero fiber `{Σ xₖ² = 0} ∖ {0} ⊂ ℂ^{n+1}` with the
//! punctured bundle via `Φ(a + ib) = (b‖a‖, a/‖a‖)`, equivariantly for
//! the orthogonal group and pulling `θ` back to the restriction of
//! `(i/4) Σ (xₖ dx̄ₖ − x̄ₖ dxₖ)`.

use num_complex::Complex;
use rand::Rng;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DehnError {
    #[error("rotation is undefined on the zero section for this angle")]
    ZeroSection,
    #[error("point does not satisfy the bundle constraints")]
    InvalidPoint,
    #[error("the chart is singular at the origin")]
    OnSingularity,
}

/// Point of the cotangent bundle: unit base `v`, fiber `u ⟂ v`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint<F = f64> {
    pub u: Vec<F>,
    pub v: Vec<F>,
}

/// Constraint tolerance for stored points.
pub const POINT_TOL: f64 = 1e-12;
/// Drift threshold beyond which re-projection is reported as failed.
pub const PROJECTION_TOL: f64 = 1e-9;
/// Central-difference step for Jacobians and pullbacks.
pub const FD_STEP: f64 = 1e-5;

impl<F: Real> CotangentPoint<F> {
    pub fn new(u: Vec<F>, v: Vec<F>) -> Result<Self, DehnError> {
        let p = CotangentPoint { u, v };
        if !p.constraints_ok(F::of(POINT_TOL)) {
            return Err(DehnError::InvalidPoint);
        }
        Ok(p)
    }

    pub fn constraints_ok(&self, tolerance: F) -> bool {
        (norm(&self.v) - F::one()).abs() <= tolerance && dot(&self.u, &self.v).abs() <= tolerance
    }

    /// Fiber length `μ = ‖u‖`.
    pub fn mu(&self) -> F {
        norm(&self.u)
    }

    pub fn antipode(&self) -> Self {
        CotangentPoint {
            u: self.u.iter().map(|x| -*x).collect(),
            v: self.v.iter().map(|x| -*x).collect(),
        }
    }

    /// Re-projects onto the constraint set: `v` to the unit sphere, `u`
    /// to the orthogonal complement of `v`.
    pub fn project(u: &[F], v: &[F]) -> Self {
        let nv = norm(v);
        let v2: Vec<F> = v.iter().map(|x| *x / nv).collect();
        let d = dot(u, &v2);
        let u2: Vec<F> = u.iter().zip(v2.iter()).map(|(x, w)| *x - d * *w).collect();
        CotangentPoint { u: u2, v: v2 }
    }
}

fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b.iter()).map(|(x, y)| *x * *y).sum()
}

fn norm<F: Real>(a: &[F]) -> F {
    dot(a, a).sqrt()
}

/// Normalized geodesic flow for time `t`; requires `u ≠ 0` unless
/// `t ∈ {0, π}` where the formula degenerates to the identity or the
/// antipodal map.
pub fn sigma<F: Real>(p: &CotangentPoint<F>, t: F) -> Result<CotangentPoint<F>, DehnError> {
    if t == F::zero() {
        return Ok(p.clone());
    }
    let mu = p.mu();
    if mu == F::zero() {
        let pi = F::of(std::f64::consts::PI);
        if (t - pi).abs() <= F::of(POINT_TOL) {
            return Ok(p.antipode());
        }
        return Err(DehnError::ZeroSection);
    }
    let (c, s) = (t.cos(), t.sin());
    let u: Vec<F> =
        p.u.iter().zip(p.v.iter()).map(|(ui, vi)| c * *ui - s * mu * *vi).collect();
    let v: Vec<F> =
        p.v.iter().zip(p.u.iter()).map(|(vi, ui)| c * *vi + s * *ui / mu).collect();
    Ok(CotangentPoint { u, v })
}

/// Twist profile: `R' = ½(1 − S)` on `[0, 1]` with the cubic shape
/// `S(t) = s₀ t + (3 − 2s₀) t² + (s₀ − 2) t³`, zero beyond one, and
/// `R(−t) = R(t) − t` on `[−1/2, 0)`. Any shape parameter `s₀ ∈ (0, 3/2)`
/// keeps `R'' < 0 where `R' > 0`, so the profile is wobbly for every
/// positive `δ`.
#[derive(Clone, Debug)]
pub struct TwistProfile<F = f64> {
    /// Initial slope of the interior shape, in `(0, 3/2)`.
    pub shape: F,
    /// Wobble threshold used by the profile check.
    pub delta: F,
    /// Optional flat plateau `[t₁, t₂]` at height `R' = 2δ`, for building
    /// profiles that intentionally fail the wobble condition.
    flat_spot: Option<(F, F)>,
}

impl<F: Real> Default for TwistProfile<F> {
    fn default() -> Self {
        TwistProfile { shape: F::one(), delta: F::of(0.1), flat_spot: None }
    }
}

impl<F: Real> TwistProfile<F> {
    pub fn new(shape: F, delta: F) -> Self {
        TwistProfile { shape, delta, flat_spot: None }
    }

    pub fn with_flat_spot(mut self, from: F, to: F) -> Self {
        self.flat_spot = Some((from, to));
        self
    }

    fn s_cubic(&self, t: F) -> F {
        let s0 = self.shape;
        s0 * t + (F::of(3.0) - F::of(2.0) * s0) * t * t
            + (s0 - F::of(2.0)) * t * t * t
    }

    fn s_cubic_prime(&self, t: F) -> F {
        let s0 = self.shape;
        s0 + F::of(2.0) * (F::of(3.0) - F::of(2.0) * s0) * t
            + F::of(3.0) * (s0 - F::of(2.0)) * t * t
    }

    /// Integral `∫₀ᵗ (1 − S)`.
    fn p_integral(&self, t: F) -> F {
        let s0 = self.shape;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        t - (s0 * t2 / F::of(2.0)
            + (F::of(3.0) - F::of(2.0) * s0) * t3 / F::of(3.0)
            + (s0 - F::of(2.0)) * t4 / F::of(4.0))
    }

    /// `R'(t)`: one half at zero, zero at and beyond one, nonincreasing.
    pub fn r_prime(&self, t: F) -> F {
        if let Some((a, b)) = self.flat_spot {
            return self.flat_profile_prime(t, a, b);
        }
        if t >= F::one() {
            F::zero()
        } else if t >= F::zero() {
            F::of(0.5) * (F::one() - self.s_cubic(t))
        } else {
            // R'(−t) = 1 − R'(t).
            F::one() - self.r_prime(-t)
        }
    }

    /// `R''(t)` for `t ≥ 0`.
    pub fn r_second(&self, t: F) -> F {
        if let Some((a, b)) = self.flat_spot {
            let h = F::of(FD_STEP);
            return (self.flat_profile_prime(t + h, a, b) - self.flat_profile_prime(t - h, a, b))
                / (F::of(2.0) * h);
        }
        if t >= F::one() || t < F::zero() {
            F::zero()
        } else {
            -F::of(0.5) * self.s_cubic_prime(t)
        }
    }

    /// `R(t)`, normalized so that `R ≡ 0` beyond one.
    pub fn r(&self, t: F) -> F {
        if t >= F::one() {
            F::zero()
        } else if t >= F::zero() {
            -F::of(0.5) * (self.p_integral(F::one()) - self.p_integral(t))
        } else {
            // Functional equation R(−t) = R(t) − t on |t| ≤ 1/2.
            self.r(-t) + t
        }
    }

    /// Piecewise-linear slope with a plateau at height `2δ`, used only to
    /// exercise the negative branch of the wobble check.
    fn flat_profile_prime(&self, t: F, a: F, b: F) -> F {
        let half = F::of(0.5);
        let plateau = F::of(2.0) * self.delta;
        if t < F::zero() {
            F::one() - self.flat_profile_prime(-t, a, b)
        } else if t < a {
            half - (half - plateau) * t / a
        } else if t <= b {
            plateau
        } else if t < F::one() {
            plateau * (F::one() - t) / (F::one() - b)
        } else {
            F::zero()
        }
    }

    /// Samples the wobble conditions on a uniform grid: `R' ≥ 0`
    /// everywhere, and `R'' < 0` wherever `R' ≥ δ`. Passing `None`
    /// disables the concavity condition (the `δ = +∞` sentinel).
    pub fn wobble_check(&self, delta: Option<F>, grid: usize) -> bool {
        for k in 0..=grid {
            let t = F::of(1.2) * F::of(k as f64) / F::of(grid as f64);
            let rp = self.r_prime(t);
            if rp < F::zero() {
                return false;
            }
            if let Some(d) = delta {
                if rp >= d && self.r_second(t) >= F::zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// The model twist `τ_λ`: antipodal on the zero section, the profile
/// rotation elsewhere, the identity (exactly) for `μ ≥ λ`.
pub fn model_dehn_twist<F: Real>(
    p: &CotangentPoint<F>,
    profile: &TwistProfile<F>,
    lambda: F,
) -> CotangentPoint<F> {
    let mu = p.mu();
    if mu == F::zero() {
        return p.antipode();
    }
    if mu >= lambda {
        return p.clone();
    }
    let two_pi = F::of(std::f64::consts::TAU);
    let angle = two_pi * profile.r_prime(mu / lambda);
    sigma(p, angle).expect("off the zero section")
}

/// Primitive of the exactness identity:
/// `K_λ(μ) = 2π (μ R'(μ/λ) − λ R(μ/λ))`.
pub fn k_lambda<F: Real>(profile: &TwistProfile<F>, lambda: F, mu: F) -> F {
    let two_pi = F::of(std::f64::consts::TAU);
    two_pi * (mu * profile.r_prime(mu / lambda) - lambda * profile.r(mu / lambda))
}

/// Liouville form `θ = Σ uᵢ dvᵢ` at `p` on a tangent vector.
pub fn liouville<F: Real>(p: &CotangentPoint<F>, xi: &Tangent<F>) -> F {
    dot(&p.u, &xi.dv)
}

/// Symplectic form `ω = −dθ`: `ω(ξ, η) = ⟨ξ_v, η_u⟩ − ⟨ξ_u, η_v⟩`.
pub fn symplectic_form<F: Real>(xi: &Tangent<F>, eta: &Tangent<F>) -> F {
    dot(&xi.dv, &eta.du) - dot(&xi.du, &eta.dv)
}

/// Tangent vector at a bundle point.
#[derive(Clone, Debug)]
pub struct Tangent<F> {
    pub du: Vec<F>,
    pub dv: Vec<F>,
}

/// Projects an ambient direction to the tangent space at `p`:
/// `⟨dv, v⟩ = 0` and `⟨du, v⟩ + ⟨u, dv⟩ = 0`.
pub fn project_tangent<F: Real>(p: &CotangentPoint<F>, du: &[F], dv: &[F]) -> Tangent<F> {
    let a = dot(dv, &p.v);
    let dv2: Vec<F> = dv.iter().zip(p.v.iter()).map(|(x, w)| *x - a * *w).collect();
    let b = dot(du, &p.v) + dot(&p.u, &dv2);
    let du2: Vec<F> = du.iter().zip(p.v.iter()).map(|(x, w)| *x - b * *w).collect();
    Tangent { du: du2, dv: dv2 }
}

/// Walks along the retraction `h ↦ project(u + h·du, v + h·dv)` to push a
/// tangent vector through a map by central differences.
pub fn push_forward<F: Real>(
    map: impl Fn(&CotangentPoint<F>) -> CotangentPoint<F>,
    p: &CotangentPoint<F>,
    xi: &Tangent<F>,
    step: F,
) -> Tangent<F> {
    let plus = map(&retract(p, xi, step));
    let minus = map(&retract(p, xi, -step));
    let inv = F::one() / (F::of(2.0) * step);
    Tangent {
        du: plus.u.iter().zip(minus.u.iter()).map(|(a, b)| (*a - *b) * inv).collect(),
        dv: plus.v.iter().zip(minus.v.iter()).map(|(a, b)| (*a - *b) * inv).collect(),
    }
}

fn retract<F: Real>(p: &CotangentPoint<F>, xi: &Tangent<F>, h: F) -> CotangentPoint<F> {
    let u: Vec<F> = p.u.iter().zip(xi.du.iter()).map(|(x, d)| *x + h * *d).collect();
    let v: Vec<F> = p.v.iter().zip(xi.dv.iter()).map(|(x, d)| *x + h * *d).collect();
    CotangentPoint::project(&u, &v)
}

/// Directional derivative of a scalar function along the retraction.
pub fn differential<F: Real>(
    f: impl Fn(&CotangentPoint<F>) -> F,
    p: &CotangentPoint<F>,
    xi: &Tangent<F>,
    step: F,
) -> F {
    (f(&retract(p, xi, step)) - f(&retract(p, xi, -step))) / (F::of(2.0) * step)
}

/// Maximum exactness residual `|(τ_λ*θ − θ − dK_λ)(ξ)|` over the supplied
/// points, testing `vectors_per_point` random tangent directions at each by
/// central differences with step [`FD_STEP`].
pub fn exactness_check<F: Real, G: Rng>(
    profile: &TwistProfile<F>,
    lambda: F,
    points: &[CotangentPoint<F>],
    vectors_per_point: usize,
    rng: &mut G,
) -> F {
    let step = F::of(FD_STEP);
    let mut worst = F::zero();
    for p in points {
        for _ in 0..vectors_per_point {
            let xi = random_tangent(rng, p);
            let map = |pt: &CotangentPoint<F>| model_dehn_twist(pt, profile, lambda);
            let q = map(p);
            let dxi = push_forward(map, p, &xi, step);
            let pulled = liouville(&q, &dxi);
            let here = liouville(p, &xi);
            let dk = differential(
                |pt: &CotangentPoint<F>| k_lambda(profile, lambda, pt.mu()),
                p,
                &xi,
                step,
            );
            worst = worst.max((pulled - here - dk).abs());
        }
    }
    worst
}

// --- quadric chart --------------------------------------------------------------

/// Value of `q(x) = Σ xₖ²`.
pub fn quadric_value<F: Real>(x: &[Complex<F>]) -> Complex<F> {
    x.iter().map(|z| *z * *z).fold(Complex::new(F::zero(), F::zero()), |a, b| a + b)
}

/// Chart from the punctured zero fiber of the quadric to the punctured
/// bundle: `Φ(a + ib) = (b·‖a‖, a/‖a‖)`.
pub fn phi_map<F: Real>(x: &[Complex<F>]) -> Result<CotangentPoint<F>, DehnError> {
    let a: Vec<F> = x.iter().map(|z| z.re).collect();
    let b: Vec<F> = x.iter().map(|z| z.im).collect();
    let na = norm(&a);
    if na == F::zero() {
        return Err(DehnError::OnSingularity);
    }
    let u: Vec<F> = b.iter().map(|y| *y * na).collect();
    let v: Vec<F> = a.iter().map(|y| *y / na).collect();
    Ok(CotangentPoint { u, v })
}

/// Newton projection of a nearby ambient point onto the zero fiber.
pub fn project_to_quadric<F: Real>(x: &[Complex<F>]) -> Vec<Complex<F>> {
    let mut y = x.to_vec();
    for _ in 0..4 {
        let q = quadric_value(&y);
        if q.norm() < F::of(1e-28) {
            break;
        }
        let n2: F = y.iter().map(|z| z.norm_sqr()).sum();
        let f = q / Complex::new(F::of(2.0) * n2, F::zero());
        for z in y.iter_mut() {
            let corr = f * z.conj();
            *z -= corr;
        }
    }
    y
}

/// Restriction of the ambient primitive one-form
/// `θ = (i/4) Σ (x̄ₖ dxₖ − xₖ dx̄ₖ)` to the quadric:
/// `θ(ξ) = (⟨b, c⟩ − ⟨a, d⟩)/2` for `x = a + ib`, `ξ = c + id`.
///
/// This is the primitive with `−dθ = Σ dqₖ ∧ dpₖ`; it is the sign for
/// which the chart pulls the bundle form `Σ uᵢ dvᵢ` back to `θ`.
pub fn quadric_liouville<F: Real>(x: &[Complex<F>], xi: &[Complex<F>]) -> F {
    let mut acc = F::zero();
    for (z, w) in x.iter().zip(xi.iter()) {
        acc = acc + z.im * w.re - z.re * w.im;
    }
    acc / F::of(2.0)
}

/// Projects an ambient complex direction into the tangent space of the
/// quadric at `x`: kills the component with `dq(ξ) = 2Σ xₖ ξₖ ≠ 0`.
pub fn project_quadric_tangent<F: Real>(x: &[Complex<F>], xi: &[Complex<F>]) -> Vec<Complex<F>> {
    let w: Complex<F> =
        x.iter().zip(xi.iter()).map(|(a, b)| *a * *b).fold(Complex::new(F::zero(), F::zero()), |p, q| p + q);
    let n2: F = x.iter().map(|z| z.norm_sqr()).sum();
    let f = w / Complex::new(n2, F::zero());
    x.iter().zip(xi.iter()).map(|(a, b)| *b - f * a.conj()).collect()
}

// --- seeded sampling -------------------------------------------------------------

/// Random bundle point with fiber length in `(lo, hi)`.
pub fn random_point<F: Real, G: Rng>(rng: &mut G, n: usize, lo: F, hi: F) -> CotangentPoint<F> {
    loop {
        let v: Vec<F> = (0..=n).map(|_| F::of(rng.gen_range(-1.0..1.0))).collect();
        let nv = norm(&v);
        if nv < F::of(0.1) {
            continue;
        }
        let v: Vec<F> = v.iter().map(|x| *x / nv).collect();
        let raw: Vec<F> = (0..=n).map(|_| F::of(rng.gen_range(-1.0..1.0))).collect();
        let d = dot(&raw, &v);
        let u0: Vec<F> = raw.iter().zip(v.iter()).map(|(x, w)| *x - d * *w).collect();
        let nu = norm(&u0);
        if nu < F::of(0.1) {
            continue;
        }
        let target = lo + (hi - lo) * F::of(rng.gen_range(0.05..0.95));
        let u: Vec<F> = u0.iter().map(|x| *x * target / nu).collect();
        return CotangentPoint { u, v };
    }
}

/// Random tangent vector at `p` with entries of order one.
pub fn random_tangent<F: Real, G: Rng>(rng: &mut G, p: &CotangentPoint<F>) -> Tangent<F> {
    let du: Vec<F> = (0..p.u.len()).map(|_| F::of(rng.gen_range(-1.0..1.0))).collect();
    let dv: Vec<F> = (0..p.v.len()).map(|_| F::of(rng.gen_range(-1.0..1.0))).collect();
    project_tangent(p, &du, &dv)
}

/// Random orthogonal matrix by Gram-Schmidt on a random square matrix.
pub fn random_orthogonal<F: Real, G: Rng>(rng: &mut G, n: usize) -> Vec<Vec<F>> {
    loop {
        let cols: Vec<Vec<F>> =
            (0..n).map(|_| (0..n).map(|_| F::of(rng.gen_range(-1.0..1.0))).collect()).collect();
        let mut basis: Vec<Vec<F>> = Vec::new();
        let mut ok = true;
        for c in &cols {
            let mut v = c.clone();
            for b in &basis {
                let d = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b.iter()) {
                    *x = *x - d * *y;
                }
            }
            let nv = norm(&v);
            if nv < F::of(1e-3) {
                ok = false;
                break;
            }
            for x in v.iter_mut() {
                *x = *x / nv;
            }
            basis.push(v);
        }
        if ok {
            // Return as a matrix acting on column vectors: rows of the
            // output are the standard coordinates.
            let mut m = vec![vec![F::zero(); n]; n];
            for (j, b) in basis.iter().enumerate() {
                for i in 0..n {
                    m[i][j] = b[i];
                }
            }
            return m;
        }
    }
}

pub fn apply_matrix<F: Real>(m: &[Vec<F>], x: &[F]) -> Vec<F> {
    (0..m.len()).map(|i| (0..x.len()).map(|j| m[i][j] * x[j]).sum()).collect()
}
