//! Discrete differential geometry of closed plane curves.
//!
//! A [`DiscreteCurve`] samples an embedded, positively oriented closed curve
//! on the uniform parameter grid `θ_j = 2πj/N`. Frames follow one convention
//! throughout the crate: `J` is the counterclockwise quarter turn and
//! `n = J t`, so on a counterclockwise circle the normal points to the
//! center and the curvature is positive.

mod io;
mod shapes;
mod vec2;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use io::{read_curve_csv, read_curve_csv_file, write_curve_csv, write_curve_csv_file};
pub use shapes::{Reparam, Shape};
pub use vec2::Vec2;

use crate::error::{check_len, Error, Result};
use crate::spectral::{self, TrigInterpolant};

/// Relative regularity floor for chords and parametrization speed.
pub const EPS_REG: f64 = 1e-6;

/// How θ-derivatives of periodic samples are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivBackend {
    /// Discrete Fourier differentiation.
    #[default]
    Spectral,
    /// Second-order central differences.
    CentralDifference,
}

impl DerivBackend {
    pub fn d1(self, f: &[f64]) -> Vec<f64> {
        match self {
            DerivBackend::Spectral => spectral::derivative(f, 1),
            DerivBackend::CentralDifference => {
                let n = f.len();
                let inv = n as f64 / (2.0 * TAU);
                (0..n).map(|j| (f[(j + 1) % n] - f[(j + n - 1) % n]) * inv).collect()
            }
        }
    }

    pub fn d2(self, f: &[f64]) -> Vec<f64> {
        match self {
            DerivBackend::Spectral => spectral::derivative(f, 2),
            DerivBackend::CentralDifference => {
                let n = f.len();
                let h = TAU / n as f64;
                let inv = 1.0 / (h * h);
                (0..n)
                    .map(|j| (f[(j + 1) % n] - 2.0 * f[j] + f[(j + n - 1) % n]) * inv)
                    .collect()
            }
        }
    }
}

/// Periodic samples of a closed plane curve on the uniform θ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    points: Vec<Vec2>,
}

impl DiscreteCurve {
    /// Validates and wraps the samples.
    ///
    /// Requires an even sample count of at least 8, chords longer than
    /// `EPS_REG · perimeter / N`, and positive signed area.
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        let n = points.len();
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidCurve(format!(
                "sample count must be even and at least 8, got {n}"
            )));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        let chords: Vec<f64> = (0..n).map(|j| (points[(j + 1) % n] - points[j]).norm()).collect();
        let perimeter: f64 = chords.iter().sum();
        let floor = EPS_REG * perimeter / n as f64;
        if let Some((j, &c)) = chords.iter().enumerate().find(|(_, &c)| !(c > floor)) {
            return Err(Error::InvalidCurve(format!(
                "chord {j} has length {c:e}, below the regularity floor {floor:e}"
            )));
        }
        let curve = Self { points };
        let area = curve.signed_area();
        if !(area > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "curve must be positively oriented (signed area {area:e})"
            )));
        }
        Ok(curve)
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Vec2) -> Result<Self> {
        Self::new(spectral::grid(n).into_iter().map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec2> {
        self.points
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.y).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        spectral::grid(self.len())
    }

    /// Shoelace area; positive for counterclockwise curves.
    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        0.5 * (0..n).map(|j| self.points[j].cross(self.points[(j + 1) % n])).sum::<f64>()
    }

    /// Spectrally accurate length `∮|c_θ| dθ`.
    pub fn perimeter(&self) -> f64 {
        let dx = spectral::derivative(&self.xs(), 1);
        let dy = spectral::derivative(&self.ys(), 1);
        let n = self.len();
        dx.iter().zip(&dy).map(|(a, b)| a.hypot(*b)).sum::<f64>() * TAU / n as f64
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.len() as f64;
        let s = self.points.iter().fold(Vec2::ZERO, |acc, &p| acc + p);
        Vec2::new(s.x / n, s.y / n)
    }

    /// Rigid translation.
    pub fn translated(&self, by: Vec2) -> Self {
        Self { points: self.points.iter().map(|&p| p + by).collect() }
    }

    /// Band-limited evaluation of the curve at arbitrary parameter values.
    pub fn interpolant(&self) -> CurveInterpolant {
        CurveInterpolant {
            x: TrigInterpolant::new(&self.xs()),
            y: TrigInterpolant::new(&self.ys()),
        }
    }

    /// `c ∘ φ`: resamples the band-limited curve at `φ(θ_j)`.
    pub fn reparametrized(&self, phi: &Reparam) -> Result<Self> {
        let interp = self.interpolant();
        Self::new(self.thetas().into_iter().map(|t| interp.eval(phi.eval(t))).collect())
    }
}

/// Trigonometric interpolant of both coordinates of a curve.
#[derive(Debug, Clone)]
pub struct CurveInterpolant {
    x: TrigInterpolant,
    y: TrigInterpolant,
}

impl CurveInterpolant {
    pub fn eval(&self, theta: f64) -> Vec2 {
        Vec2::new(self.x.eval(theta), self.y.eval(theta))
    }

    pub fn eval_derivative(&self, theta: f64) -> Vec2 {
        Vec2::new(self.x.eval_derivative(theta), self.y.eval_derivative(theta))
    }
}

/// Frenet frame, curvature and parametrization speed at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetData {
    pub tangent: Vec<Vec2>,
    pub normal: Vec<Vec2>,
    pub curvature: Vec<f64>,
    /// `|c_θ|`, length per radian.
    pub speed: Vec<f64>,
    pub backend: DerivBackend,
}

impl FrenetData {
    pub fn len(&self) -> usize {
        self.speed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speed.is_empty()
    }

    /// `∮ κ dl` by the trapezoidal rule.
    pub fn total_curvature(&self) -> f64 {
        let h = TAU / self.len() as f64;
        self.curvature.iter().zip(&self.speed).map(|(k, s)| k * s).sum::<f64>() * h
    }

    /// Length element `|c_θ| dθ` at each sample.
    pub fn dl(&self) -> Vec<f64> {
        let h = TAU / self.len() as f64;
        self.speed.iter().map(|s| s * h).collect()
    }
}

/// Frenet frame of a curve.
pub fn frenet(curve: &DiscreteCurve, backend: DerivBackend) -> Result<FrenetData> {
    let xs = curve.xs();
    let ys = curve.ys();
    let (dx, dy) = (backend.d1(&xs), backend.d1(&ys));
    let (ddx, ddy) = (backend.d2(&xs), backend.d2(&ys));
    let n = curve.len();

    let speed: Vec<f64> = dx.iter().zip(&dy).map(|(a, b)| a.hypot(*b)).collect();
    let mean_speed = speed.iter().sum::<f64>() / n as f64;
    let floor = EPS_REG * mean_speed;
    if let Some((index, &s)) = speed.iter().enumerate().find(|(_, &s)| !(s >= floor)) {
        return Err(Error::Regularity { index, speed: s, floor });
    }

    let mut tangent = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    for j in 0..n {
        let c1 = Vec2::new(dx[j], dy[j]);
        let c2 = Vec2::new(ddx[j], ddy[j]);
        let t = (1.0 / speed[j]) * c1;
        tangent.push(t);
        normal.push(t.perp());
        curvature.push(c1.cross(c2) / speed[j].powi(3));
    }
    Ok(FrenetData { tangent, normal, curvature, speed, backend })
}

/// `D_θ f = (1/|c_θ|) ∂_θ f` with the frame's derivative backend.
pub fn arclength_derivative(frenet: &FrenetData, f: &[f64]) -> Result<Vec<f64>> {
    check_len(frenet.len(), f.len())?;
    let d = frenet.backend.d1(f);
    Ok(d.iter().zip(&frenet.speed).map(|(a, s)| a / s).collect())
}

/// Splits a vector field along the curve into tangential and normal parts,
/// `u = v t + h n`. Returns `(v, h)`.
pub fn decompose_velocity(frenet: &FrenetData, u: &[Vec2]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len(frenet.len(), u.len())?;
    let v = u.iter().zip(&frenet.tangent).map(|(a, t)| a.dot(*t)).collect();
    let h = u.iter().zip(&frenet.normal).map(|(a, n)| a.dot(*n)).collect();
    Ok((v, h))
}

/// Inverse of [`decompose_velocity`].
pub fn recompose_velocity(frenet: &FrenetData, v: &[f64], h: &[f64]) -> Result<Vec<Vec2>> {
    check_len(frenet.len(), v.len())?;
    check_len(frenet.len(), h.len())?;
    Ok((0..frenet.len())
        .map(|j| v[j] * frenet.tangent[j] + h[j] * frenet.normal[j])
        .collect())
}

/// Parameter values `θ` at which the arc length from sample 0 equals
/// `k·L/m`, `k = 0..m`. Newton iteration on the band-limited arc-length
/// function, safeguarded by bisection.
pub(crate) fn arclength_inverse(curve: &DiscreteCurve, m: usize) -> Result<(Vec<f64>, f64)> {
    let frame = frenet(curve, DerivBackend::Spectral)?;
    let speed = TrigInterpolant::new(&frame.speed);
    let length = TAU * speed.mean();
    let n = curve.len();

    // cumulative trapezoid on the sample grid brackets each target
    let h = TAU / n as f64;
    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0.0);
    for j in 0..n {
        let s_next = speed.integral_from_zero(h * (j + 1) as f64);
        cumulative.push(s_next);
    }
    cumulative[n] = length;

    let mut out = Vec::with_capacity(m);
    let mut seg = 0usize;
    for k in 0..m {
        let target = length * k as f64 / m as f64;
        while seg + 1 < n && cumulative[seg + 1] <= target {
            seg += 1;
        }
        let (mut lo, mut hi) = (h * seg as f64, h * (seg + 1) as f64);
        let (s_lo, s_hi) = (cumulative[seg], cumulative[seg + 1]);
        let mut theta = lo + (hi - lo) * (target - s_lo) / (s_hi - s_lo);
        for _ in 0..60 {
            let g = speed.integral_from_zero(theta) - target;
            if g > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let step = g / speed.eval(theta);
            let mut next = theta - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - theta).abs() < 1e-15 * TAU;
            theta = next;
            if done {
                break;
            }
        }
        out.push(theta);
    }
    Ok((out, length))
}

/// Resamples to `m` points equally spaced in arc length, starting at the
/// position of sample 0. The result traces the same band-limited image.
pub fn resample_by_arclength(curve: &DiscreteCurve, m: usize) -> Result<DiscreteCurve> {
    if m < 8 || m % 2 != 0 {
        return Err(Error::InvalidCurve(format!(
            "resample size must be even and at least 8, got {m}"
        )));
    }
    let (thetas, _) = arclength_inverse(curve, m)?;
    let interp = curve.interpolant();
    DiscreteCurve::new(thetas.into_iter().map(|t| interp.eval(t)).collect())
}

fn as_complex(c: &DiscreteCurve) -> Vec<Complex64> {
    c.points().iter().map(|p| Complex64::new(p.x, p.y)).collect()
}

fn rms_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).sum();
    (s / a.len() as f64).sqrt()
}

/// Shifts uniformly sampled periodic data by `delta` samples (band-limited).
fn fractional_shift(spec: &[Complex64], delta: f64) -> Vec<Complex64> {
    let m = spec.len();
    let shifted: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let k = spectral::wavenumber(idx, m);
            if m % 2 == 0 && idx == m / 2 {
                // real-symmetric treatment of the Nyquist mode
                z * (std::f64::consts::PI * delta).cos()
            } else {
                z * Complex64::from_polar(1.0, TAU * k * delta / m as f64)
            }
        })
        .collect();
    spectral::inverse_complex(shifted)
}

/// Distance between the shapes of two curves.
///
/// Both curves are resampled uniformly in arc length to a common size; the
/// root-mean-square pointwise distance is then minimized over the base
/// point: first over circular index shifts (FFT correlation), then over a
/// sub-sample shift of the band-limited resampled curve.
pub fn shape_distance(c1: &DiscreteCurve, c2: &DiscreteCurve) -> Result<f64> {
    if c1 == c2 {
        return Ok(0.0);
    }
    let m = c1.len().max(c2.len());
    let a = as_complex(&resample_by_arclength(c1, m)?);
    let b = as_complex(&resample_by_arclength(c2, m)?);

    let corr = spectral::cross_correlation(&a, &b);
    let energy = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let (ea, eb) = (energy(&a), energy(&b));
    let mut best = 0usize;
    let mut best_d2 = f64::INFINITY;
    for (s, r) in corr.iter().enumerate() {
        let d2 = ea + eb - 2.0 * r.re;
        if d2 < best_d2 {
            best_d2 = d2;
            best = s;
        }
    }

    // b(j + s + δ), δ ∈ [-1, 1], by golden-section search
    let b_spec = spectral::forward_complex(&b);
    let dist_at = |delta: f64| rms_distance(&a, &fractional_shift(&b_spec, best as f64 + delta));
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (-1.0, 1.0);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let (mut f1, mut f2) = (dist_at(x1), dist_at(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = dist_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = dist_at(x2);
        }
    }
    let refined = f1.min(f2);
    let coarse = rms_distance(&a, &fractional_shift(&b_spec, best as f64));
    Ok(refined.min(coarse))
}
