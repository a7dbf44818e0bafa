//! Fourier machinery for periodic data sampled on the uniform grid
//! `θ_j = 2πj/N`.
//!
//! All transforms are unnormalized forward / normalized inverse, so
//! `coefficients(f)[k] / N` are the Fourier coefficients of the trigonometric
//! interpolant. For even `N` the Nyquist mode is split symmetrically, which
//! keeps the interpolant real.

use std::cell::RefCell;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Signed wavenumber of FFT bin `idx` on an `n`-point grid. The Nyquist bin
/// (even `n`) is reported as `+n/2`.
pub fn wavenumber(idx: usize, n: usize) -> f64 {
    if idx <= n / 2 {
        idx as f64
    } else {
        idx as f64 - n as f64
    }
}

pub fn forward(f: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    plan(buf.len(), false).process(&mut buf);
    buf
}

pub fn forward_complex(f: &[Complex64]) -> Vec<Complex64> {
    let mut buf = f.to_vec();
    plan(buf.len(), false).process(&mut buf);
    buf
}

/// Inverse transform, normalized, returning the real part.
pub fn inverse_real(mut spec: Vec<Complex64>) -> Vec<f64> {
    let n = spec.len();
    plan(n, true).process(&mut spec);
    let scale = 1.0 / n as f64;
    spec.into_iter().map(|z| z.re * scale).collect()
}

pub fn inverse_complex(mut spec: Vec<Complex64>) -> Vec<Complex64> {
    let n = spec.len();
    plan(n, true).process(&mut spec);
    let scale = 1.0 / n as f64;
    spec.into_iter().map(|z| z * scale).collect()
}

/// Multiplies every Fourier mode by `symbol(k)` and transforms back.
pub fn apply_symbol(f: &[f64], symbol: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = f.len();
    let mut spec = forward(f);
    for (idx, z) in spec.iter_mut().enumerate() {
        *z *= symbol(wavenumber(idx, n));
    }
    inverse_real(spec)
}

/// `order`-th derivative in θ of periodic samples. Odd derivatives drop the
/// Nyquist mode, whose derivative is not representable on the grid.
pub fn derivative(f: &[f64], order: u32) -> Vec<f64> {
    let n = f.len();
    let mut spec = forward(f);
    let ik = |idx: usize| Complex64::new(0.0, wavenumber(idx, n));
    for (idx, z) in spec.iter_mut().enumerate() {
        if order % 2 == 1 && n % 2 == 0 && idx == n / 2 {
            *z = Complex64::new(0.0, 0.0);
        } else {
            *z *= ik(idx).powu(order);
        }
    }
    inverse_real(spec)
}

/// Periodic band-limited interpolation onto a grid `factor` times finer.
pub fn upsample(f: &[f64], factor: usize) -> Vec<f64> {
    let n = f.len();
    let m = n * factor;
    let spec = forward(f);
    let mut fine = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    for idx in 0..n {
        let k = wavenumber(idx, n) as i64;
        if n % 2 == 0 && idx == half {
            // split the Nyquist mode between +n/2 and -n/2
            fine[half] += spec[idx] * 0.5;
            fine[m - half] += spec[idx] * 0.5;
        } else {
            let dst = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            fine[dst] += spec[idx];
        }
    }
    inverse_real(fine).into_iter().map(|x| x * factor as f64).collect()
}

/// Trigonometric interpolant of periodic samples, evaluable anywhere.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    /// (k, c_k) pairs with the Nyquist mode already split.
    modes: Vec<(f64, Complex64)>,
}

impl TrigInterpolant {
    pub fn new(f: &[f64]) -> Self {
        let n = f.len();
        let spec = forward(f);
        let scale = 1.0 / n as f64;
        let mut modes = Vec::with_capacity(n + 1);
        for (idx, z) in spec.into_iter().enumerate() {
            let k = wavenumber(idx, n);
            if n % 2 == 0 && idx == n / 2 {
                modes.push((k, z * scale * 0.5));
                modes.push((-k, z * scale * 0.5));
            } else {
                modes.push((k, z * scale));
            }
        }
        Self { modes }
    }

    pub fn mean(&self) -> f64 {
        self.modes
            .iter()
            .find(|(k, _)| *k == 0.0)
            .map(|(_, c)| c.re)
            .unwrap_or(0.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(k, c)| (c * Complex64::from_polar(1.0, k * theta)).re)
            .sum()
    }

    pub fn eval_derivative(&self, theta: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(k, c)| (c * Complex64::new(0.0, k) * Complex64::from_polar(1.0, k * theta)).re)
            .sum()
    }

    /// `∫_0^θ f`, exact for the interpolant.
    pub fn integral_from_zero(&self, theta: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(k, c)| {
                if k == 0.0 {
                    c.re * theta
                } else {
                    let e = Complex64::from_polar(1.0, k * theta) - 1.0;
                    (c * e / Complex64::new(0.0, k)).re
                }
            })
            .sum()
    }
}

/// Circular cross-correlation `r[s] = Σ_j a[j] · conj(b[j + s])` of complex
/// sequences, via the FFT.
pub fn cross_correlation(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let fa = forward_complex(a);
    let fb = forward_complex(b);
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    // inverse of conj(A)·B gives Σ conj(a_j) b_{j+s}; conjugate for the stated form
    inverse_complex(prod).into_iter().map(|z| z.conj()).collect()
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}
