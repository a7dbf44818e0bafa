//! Horizontal lifts and holonomy on the Hopf bundle `S³ → S²`.
//!
//! A unit quaternion `q = w + xi + yj + zk` is read as the pair
//! `(z₁, z₂) ∈ ℂ²` with `q = z₁ + j z₂`, so the fibre action `q ↦ q e^{iφ}`
//! multiplies both components by `e^{iφ}`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral;

const NORM_TOL: f64 = 1e-8;
const PERIODICITY_TOL: f64 = 1e-8;
const DRIFT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Normalizes `(w, x, y, z)`; fails on the zero quaternion.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Norm { norm: n });
        }
        Ok(Self { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    /// Accepts `(w, x, y, z)` only if it is already unit within `10⁻⁸`.
    pub fn checked(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let q = Self { w, x, y, z };
        q.check()?;
        Ok(q)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Norm { norm: n });
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    pub fn conj(self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn to_c2(self) -> (Complex64, Complex64) {
        (Complex64::new(self.w, self.x), Complex64::new(self.y, -self.z))
    }

    /// Inverse of [`to_c2`](Self::to_c2); does not normalize.
    pub fn from_c2(z1: Complex64, z2: Complex64) -> Self {
        Self { w: z1.re, x: z1.im, y: z2.re, z: -z2.im }
    }

    /// `exp(v)` of the pure quaternion `v = v₀i + v₁j + v₂k`.
    pub fn exp_pure(v: [f64; 3]) -> Self {
        let a = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        // sin(a)/a, with its Taylor series near 0
        let s = if a < 1e-8 { 1.0 - a * a / 6.0 } else { a.sin() / a };
        Self { w: a.cos(), x: s * v[0], y: s * v[1], z: s * v[2] }
    }

    /// Fibre action `q · e^{iφ}`.
    pub fn fibre_shift(self, phi: f64) -> Self {
        self * Self { w: phi.cos(), x: phi.sin(), y: 0.0, z: 0.0 }
    }

    /// `q v q̄` for a 3-vector `v` read as a pure quaternion.
    pub fn rotate(self, v: [f64; 3]) -> [f64; 3] {
        let p = self * Self { w: 0.0, x: v[0], y: v[1], z: v[2] } * self.conj();
        [p.x, p.y, p.z]
    }

    pub fn distance(&self, o: &Self) -> f64 {
        (*self - *o).norm()
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

impl Mul<UnitQuaternion> for f64 {
    type Output = UnitQuaternion;
    fn mul(self, q: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion { w: self * q.w, x: self * q.x, y: self * q.y, z: self * q.z }
    }
}

impl Add for UnitQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { w: self.w + o.w, x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }
}

impl Sub for UnitQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { w: self.w - o.w, x: self.x - o.x, y: self.y - o.y, z: self.z - o.z }
    }
}

impl Neg for UnitQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        -1.0 * self
    }
}

/// `(|z₁|² − |z₂|², 2 Re z₁z̄₂, 2 Im z₁z̄₂)`.
pub fn hopf_project(q: &UnitQuaternion) -> Result<[f64; 3]> {
    q.check()?;
    Ok(project_unchecked(q.to_c2()))
}

fn project_unchecked((z1, z2): (Complex64, Complex64)) -> [f64; 3] {
    let c = 2.0 * z1 * z2.conj();
    [z1.norm_sqr() - z2.norm_sqr(), c.re, c.im]
}

/// A point of the fibre over `p`.
pub fn section(p: [f64; 3]) -> Result<UnitQuaternion> {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::Norm { norm: n });
    }
    if p[0] <= -1.0 + 1e-12 {
        return Ok(UnitQuaternion::from_c2(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
    }
    let a = ((1.0 + p[0]) / 2.0).sqrt();
    let z2 = Complex64::new(p[1], -p[2]) / (2.0 * a);
    Ok(UnitQuaternion::from_c2(Complex64::new(a, 0.0), z2).normalized())
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Closed path on `S²` sampled at `θ_m = 2πm/K`, `m = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePath {
    samples: Vec<[f64; 3]>,
}

impl SpherePath {
    /// `samples` holds `K + 1` points with the last equal to the first.
    pub fn from_samples(samples: Vec<[f64; 3]>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::ShapeMismatch(format!("a sphere path needs at least 3 samples, got {}", samples.len())));
        }
        for p in &samples {
            let n = norm3(*p);
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::Norm { norm: n });
            }
        }
        let (a, b) = (samples[0], samples[samples.len() - 1]);
        let gap = norm3([a[0] - b[0], a[1] - b[1], a[2] - b[2]]);
        if gap > 1e-10 {
            return Err(Error::ShapeMismatch(format!("sphere path is not closed: gap {gap:e}")));
        }
        Ok(Self { samples })
    }

    pub fn from_fn(k: usize, f: impl Fn(f64) -> [f64; 3]) -> Result<Self> {
        let mut samples: Vec<[f64; 3]> = (0..k).map(|m| f(TAU * m as f64 / k as f64)).collect();
        samples.push(samples[0]);
        Self::from_samples(samples)
    }

    /// The equator `(cos θ, sin θ, 0)`.
    pub fn great_circle(k: usize) -> Result<Self> {
        Self::from_fn(k, |t| [t.cos(), t.sin(), 0.0])
    }

    /// Latitude circle at height `z` around the third axis.
    pub fn latitude_circle(k: usize, z: f64) -> Result<Self> {
        if !(z.abs() < 1.0) {
            return Err(Error::Config(vec![format!("latitude must lie in (-1, 1), got {z}")]));
        }
        let r = (1.0 - z * z).sqrt();
        Self::from_fn(k, |t| [r * t.cos(), r * t.sin(), z])
    }

    pub fn constant(k: usize, p: [f64; 3]) -> Result<Self> {
        Self::from_fn(k, |_| p)
    }

    /// Number of intervals `K`.
    pub fn k(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[[f64; 3]] {
        &self.samples
    }

    /// `dρ/dθ` on the doubled grid `θ = πm/K`, `m = 0..2K`.
    fn velocity_half_grid(&self) -> [Vec<f64>; 3] {
        let k = self.k();
        std::array::from_fn(|c| {
            let comp: Vec<f64> = self.samples[..k].iter().map(|p| p[c]).collect();
            spectral::upsample(&spectral::derivative(&comp, 1), 2)
        })
    }
}

/// `ς` sampled at `θ_m = 2πm/K`, `m = 0..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerticalProfile {
    pub values: Vec<f64>,
}

impl VerticalProfile {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::ShapeMismatch(format!("a profile needs at least 3 samples, got {}", values.len())));
        }
        let gap = (values[0] - values[values.len() - 1]).abs();
        if gap > 1e-10 {
            return Err(Error::Periodicity { gap });
        }
        Ok(Self { values })
    }

    pub fn from_fn(k: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values: Vec<f64> = (0..k).map(|m| f(TAU * m as f64 / k as f64)).collect();
        values.push(values[0]);
        Self::from_values(values)
    }

    pub fn constant(k: usize, c: f64) -> Self {
        Self { values: vec![c; k + 1] }
    }

    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    /// `∫₀^{2π} ς dθ` (trapezoidal, spectrally exact for periodic data).
    pub fn integral(&self) -> f64 {
        let k = self.k();
        self.values[..k].iter().sum::<f64>() * TAU / k as f64
    }

    fn half_grid(&self) -> Vec<f64> {
        spectral::upsample(&self.values[..self.k()], 2)
    }
}

/// Periodic solution of `ς' = f^v`, `ς(0) = ς₀` on `K` intervals.
pub fn vertical_ode(fv: impl Fn(f64) -> f64, sigma0: f64, k: usize) -> Result<VerticalProfile> {
    if k < 2 {
        return Err(Error::ShapeMismatch(format!("need K >= 2, got {k}")));
    }
    let f: Vec<f64> = (0..k).map(|m| fv(TAU * m as f64 / k as f64)).collect();
    let mean = f.iter().sum::<f64>() / k as f64;
    let gap = (TAU * mean).abs();
    if gap > PERIODICITY_TOL {
        return Err(Error::Periodicity { gap });
    }
    let mut spec = spectral::forward(&f);
    for (idx, z) in spec.iter_mut().enumerate() {
        let kk = spectral::wavenumber(idx, k);
        *z = if idx == 0 || (k % 2 == 0 && idx == k / 2) {
            Complex64::new(0.0, 0.0)
        } else {
            *z / Complex64::new(0.0, kk)
        };
    }
    let anti = spectral::inverse_real(spec);
    let mut values: Vec<f64> = anti.iter().map(|a| sigma0 + a - anti[0]).collect();
    values.push(sigma0);
    Ok(VerticalProfile { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyResult {
    /// Fibre angle in `(−π, π]`.
    pub phase: f64,
    /// `|s(2π) − s(0)|` in `ℝ⁴`.
    pub closure_error: f64,
}

impl HolonomyResult {
    /// Distance of `phase` from `target` on the circle.
    pub fn phase_error(&self, target: f64) -> f64 {
        wrap(self.phase - target).abs()
    }
}

/// Maps an angle into `(−π, π]`.
pub fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub path: Vec<UnitQuaternion>,
    pub holonomy: HolonomyResult,
    /// `max_m |π(s(θ_m)) − ρ(θ_m)|`.
    pub drift: f64,
}

// ṡ = horizontal lift of ρ̇ − ς i s, in ℂ² coordinates
fn lift_rhs(s: (Complex64, Complex64), rho_dot: [f64; 3], sigma: f64) -> (Complex64, Complex64) {
    let (z1, z2) = s;
    let (u1, u2) = (-z2.conj(), z1.conj());
    let dpi = |w1: Complex64, w2: Complex64| {
        let c = 2.0 * (w1 * z2.conj() + z1 * w2.conj());
        [2.0 * (z1.conj() * w1 - z2.conj() * w2).re, c.re, c.im]
    };
    let i = Complex64::i();
    let a = dpi(u1, u2);
    let b = dpi(i * u1, i * u2);
    let dot = |p: [f64; 3], q: [f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let lambda = Complex64::new(dot(rho_dot, a), dot(rho_dot, b)) / 4.0;
    (lambda * u1 - sigma * i * z1, lambda * u2 - sigma * i * z2)
}

/// Horizontal lift of `ρ` for `𝒜 + ς dθ` from `s0`, by RK4 with per-step
/// renormalization. `ρ̇` and `ς` at half steps come from band-limited
/// interpolation of the samples. Fails with `ProjectionDrift` if the lift
/// strays more than `10⁻⁶` from `ρ`.
pub fn horizontal_lift(rho: &SpherePath, sigma: &VerticalProfile, s0: UnitQuaternion) -> Result<Lift> {
    let lift = lift_unchecked(rho, sigma, s0)?;
    if lift.drift > DRIFT_TOL {
        return Err(Error::ProjectionDrift { drift: lift.drift });
    }
    Ok(lift)
}

/// [`horizontal_lift`] without the drift bound, for coarse step counts.
pub fn lift_unchecked(rho: &SpherePath, sigma: &VerticalProfile, s0: UnitQuaternion) -> Result<Lift> {
    let k = rho.k();
    if sigma.k() != k {
        return Err(Error::LengthMismatch { expected: k + 1, got: sigma.k() + 1 });
    }
    let p0 = hopf_project(&s0)?;
    let r0 = rho.samples()[0];
    let gap0 = norm3([p0[0] - r0[0], p0[1] - r0[1], p0[2] - r0[2]]);
    if gap0 > NORM_TOL {
        return Err(Error::ProjectionDrift { drift: gap0 });
    }
    let vel = rho.velocity_half_grid();
    let sig = sigma.half_grid();
    let at = |m2: usize| -> ([f64; 3], f64) {
        let m2 = m2 % (2 * k);
        ([vel[0][m2], vel[1][m2], vel[2][m2]], sig[m2])
    };
    let h = TAU / k as f64;
    let axpy = |s: (Complex64, Complex64), a: f64, d: (Complex64, Complex64)| (s.0 + a * d.0, s.1 + a * d.1);

    let mut path = Vec::with_capacity(k + 1);
    let mut s = s0.to_c2();
    path.push(s0);
    let mut drift = 0.0f64;
    for m in 0..k {
        let (v0, g0) = at(2 * m);
        let (v1, g1) = at(2 * m + 1);
        let (v2, g2) = at(2 * m + 2);
        let k1 = lift_rhs(s, v0, g0);
        let k2 = lift_rhs(axpy(s, 0.5 * h, k1), v1, g1);
        let k3 = lift_rhs(axpy(s, 0.5 * h, k2), v1, g1);
        let k4 = lift_rhs(axpy(s, h, k3), v2, g2);
        let next = (
            s.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            s.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        let q = UnitQuaternion::from_c2(next.0, next.1);
        let n = q.norm();
        if (n - 1.0).abs() > 1e-3 {
            return Err(Error::Norm { norm: n });
        }
        let q = q.normalized();
        s = q.to_c2();
        let p = project_unchecked(s);
        let r = rho.samples()[m + 1];
        drift = drift.max(norm3([p[0] - r[0], p[1] - r[1], p[2] - r[2]]));
        path.push(q);
    }
    let (a, b) = (s0.to_c2(), s);
    let pairing = a.0 * b.0.conj() + a.1 * b.1.conj();
    let phase = if pairing.norm() == 0.0 { 0.0 } else { wrap(pairing.arg()) };
    let closure_error = s0.distance(path.last().expect("non-empty"));
    Ok(Lift { path, holonomy: HolonomyResult { phase, closure_error }, drift })
}

/// [`horizontal_lift`] from the canonical point over `ρ(0)`.
pub fn holonomy(rho: &SpherePath, sigma: &VerticalProfile) -> Result<HolonomyResult> {
    let s0 = section(rho.samples()[0])?;
    Ok(horizontal_lift(rho, sigma, s0)?.holonomy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyReport {
    pub phase: f64,
    pub closure_error: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub profile: String,
}

impl HolonomyReport {
    pub fn new(result: HolonomyResult, k: usize, profile: impl Into<String>) -> Self {
        Self { phase: result.phase, closure_error: result.closure_error, k, profile: profile.into() }
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        (0..3).all(|i| (a[i] - b[i]).abs() < tol)
    }

    #[test]
    fn projection_examples() {
        let c = |a: f64, b: f64, c: f64, d: f64| UnitQuaternion::from_c2(Complex64::new(a, b), Complex64::new(c, d));
        assert!(close(hopf_project(&c(1.0, 0.0, 0.0, 0.0)).unwrap(), [1.0, 0.0, 0.0], 1e-15));
        assert!(close(hopf_project(&c(0.0, 0.0, 1.0, 0.0)).unwrap(), [-1.0, 0.0, 0.0], 1e-15));
        let r = 0.5f64.sqrt();
        assert!(close(hopf_project(&c(r, 0.0, r, 0.0)).unwrap(), [0.0, 1.0, 0.0], 1e-15));
        let bad = UnitQuaternion { w: 1.1, x: 0.0, y: 0.0, z: 0.0 };
        assert!(matches!(hopf_project(&bad), Err(Error::Norm { .. })));
    }

    #[test]
    fn quaternion_algebra() {
        let i = UnitQuaternion { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
        let j = UnitQuaternion { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };
        let k = UnitQuaternion { w: 0.0, x: 0.0, y: 0.0, z: 1.0 };
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(i * i, -UnitQuaternion::IDENTITY);
        let e = UnitQuaternion::exp_pure([0.0, PI / 2.0, 0.0]);
        assert!(e.distance(&j) < 1e-15);
    }

    #[test]
    fn section_projects_back() {
        for p in [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.36, 0.48, -0.8]] {
            assert!(close(hopf_project(&section(p).unwrap()).unwrap(), p, 1e-14));
        }
    }

    proptest! {
        #[test]
        fn fibre_invariance(w in -1.0..1.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, phi in -10.0..10.0f64) {
            prop_assume!(w * w + x * x + y * y + z * z > 1e-3);
            let q = UnitQuaternion::new(w, x, y, z).unwrap();
            let a = hopf_project(&q).unwrap();
            let b = hopf_project(&q.fibre_shift(phi).normalized()).unwrap();
            prop_assert!(close(a, b, 1e-12));
        }
    }

    #[test]
    fn vertical_ode_examples() {
        let p = vertical_ode(|t| t.cos(), -0.5, 64).unwrap();
        for (m, v) in p.values.iter().enumerate() {
            let t = TAU * m as f64 / 64.0;
            assert!((v - (t.sin() - 0.5)).abs() < 1e-13);
        }
        assert!((p.integral() + PI).abs() < 1e-13);
        let c = vertical_ode(|_| 0.0, 0.7, 16).unwrap();
        assert!(c.values.iter().all(|v| (v - 0.7).abs() < 1e-15));
        assert!(matches!(vertical_ode(|_| 1.0, 0.0, 16), Err(Error::Periodicity { .. })));
    }

    #[test]
    fn great_circle_holonomy_is_pi() {
        let h = holonomy(&SpherePath::great_circle(10_000).unwrap(), &VerticalProfile::constant(10_000, 0.0)).unwrap();
        assert!(h.phase_error(PI) < 1e-6, "{h:?}");
        assert!((h.closure_error - 2.0).abs() < 1e-6);
    }

    #[test]
    fn sine_profile_cancels_holonomy() {
        let k = 2_000;
        let sigma = vertical_ode(|t| t.cos(), -0.5, k).unwrap();
        let h = holonomy(&SpherePath::great_circle(k).unwrap(), &sigma).unwrap();
        assert!(h.phase.abs() < 1e-6, "{h:?}");
        assert!(h.closure_error < 1e-6);
    }

    #[test]
    fn constant_profile_shifts_phase() {
        let k = 1_000;
        let rho = SpherePath::great_circle(k).unwrap();
        for c in [0.0, -0.25, -0.5, 0.1] {
            let h = holonomy(&rho, &VerticalProfile::constant(k, c)).unwrap();
            assert!(h.phase_error(PI + TAU * c) < 1e-6, "c = {c}: {h:?}");
        }
    }

    #[test]
    fn latitude_holonomy_follows_the_enclosed_area() {
        // half the solid angle of the cap around the pole
        let z = 0.4;
        let k = 1_000;
        let h = holonomy(&SpherePath::latitude_circle(k, z).unwrap(), &VerticalProfile::constant(k, 0.0)).unwrap();
        let cap = TAU * (1.0 - z);
        assert!(h.phase_error(cap / 2.0).min(h.phase_error(-cap / 2.0)) < 1e-6, "{h:?}");
    }

    #[test]
    fn constant_path_has_trivial_holonomy() {
        let rho = SpherePath::constant(100, [0.0, 0.0, 1.0]).unwrap();
        let h = holonomy(&rho, &VerticalProfile::constant(100, 0.0)).unwrap();
        assert_eq!(h.phase, 0.0);
        assert!(h.closure_error < 1e-15);
    }

    #[test]
    fn lift_projects_onto_the_path() {
        let rho = SpherePath::from_fn(512, |t| {
            let (a, b) = (0.3 * (2.0 * t).sin(), t);
            [a.cos() * b.cos(), a.cos() * b.sin(), a.sin()]
        })
        .unwrap();
        let lift = horizontal_lift(&rho, &VerticalProfile::constant(512, 0.2), section(rho.samples()[0]).unwrap()).unwrap();
        assert!(lift.drift < 1e-8);
        assert!(lift.path.iter().all(|q| (q.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn phase_error_decays_at_fourth_order() {
        let err = |k: usize| {
            let sigma = vertical_ode(|t| (3.0 * t).cos(), 0.0, k).unwrap();
            let rho = SpherePath::latitude_circle(k, 0.3).unwrap();
            let target = wrap(PI * (1.0 - 0.3));
            let h = holonomy(&rho, &sigma).unwrap();
            h.phase_error(target).min(h.phase_error(-target))
        };
        let (e1, e2) = (err(128), err(256));
        let order = (e1 / e2).log2();
        assert!(order > 3.5, "{e1:e} {e2:e} order {order}");
    }

    #[test]
    fn mismatched_start_is_rejected() {
        let rho = SpherePath::great_circle(16).unwrap();
        let r = horizontal_lift(&rho, &VerticalProfile::constant(16, 0.0), section([0.0, 0.0, 1.0]).unwrap());
        assert!(matches!(r, Err(Error::ProjectionDrift { .. })));
    }

    #[test]
    fn report_round_trips() {
        let r = HolonomyReport::new(HolonomyResult { phase: PI, closure_error: 2.0 }, 10, "zero");
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"K\":10"));
        let back: HolonomyReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
