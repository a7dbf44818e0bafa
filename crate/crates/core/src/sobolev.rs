//! The curve-independent Sobolev metric operator `P = 1 − A² ∂θ²` on the
//! periodic θ grid, with its inverse and the metric pairing it induces.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::curvegeo::{FrenetData, Vec2};
use crate::error::{check_len, Error, Result};
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevBackend {
    #[default]
    Spectral,
    /// Three-point second difference; solved with a cyclic Thomas sweep.
    TridiagonalDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevOperator {
    a: f64,
    n: usize,
    backend: SobolevBackend,
}

impl SobolevOperator {
    pub fn new(a: f64, n: usize, backend: SobolevBackend) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Config(vec![format!("operator.A must be >= 0, got {a}")]));
        }
        if n < 8 || n % 2 != 0 {
            return Err(Error::Config(vec![format!("grid size must be even and >= 8, got {n}")]));
        }
        Ok(Self { a, n, backend })
    }

    pub fn spectral(a: f64, n: usize) -> Result<Self> {
        Self::new(a, n, SobolevBackend::Spectral)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> SobolevBackend {
        self.backend
    }

    fn h(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Multiplier of `P` on the Fourier mode `e^{ikθ}`.
    pub fn symbol(&self, k: f64) -> f64 {
        let a2 = self.a * self.a;
        match self.backend {
            SobolevBackend::Spectral => 1.0 + a2 * k * k,
            SobolevBackend::TridiagonalDifference => {
                let h = self.h();
                1.0 + a2 * (2.0 - 2.0 * (k * h).cos()) / (h * h)
            }
        }
    }

    /// `f − A² ∂θ² f`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, f.len())?;
        let a2 = self.a * self.a;
        if a2 == 0.0 {
            return Ok(f.to_vec());
        }
        Ok(match self.backend {
            SobolevBackend::Spectral => spectral::apply_symbol(f, |k| 1.0 + a2 * k * k),
            SobolevBackend::TridiagonalDifference => {
                let n = self.n;
                let c = a2 / (self.h() * self.h());
                (0..n)
                    .map(|j| f[j] - c * (f[(j + 1) % n] - 2.0 * f[j] + f[(j + n - 1) % n]))
                    .collect()
            }
        })
    }

    /// The unique `f` with `apply(f) = g`.
    pub fn solve(&self, g: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, g.len())?;
        let a2 = self.a * self.a;
        if a2 == 0.0 {
            return Ok(g.to_vec());
        }
        Ok(match self.backend {
            SobolevBackend::Spectral => spectral::apply_symbol(g, |k| 1.0 / (1.0 + a2 * k * k)),
            SobolevBackend::TridiagonalDifference => {
                let c = a2 / (self.h() * self.h());
                cyclic_tridiagonal_solve(1.0 + 2.0 * c, -c, g)
            }
        })
    }

    /// Applies `P` to each Cartesian component.
    pub fn apply_vec(&self, u: &[Vec2]) -> Result<Vec<Vec2>> {
        let xs: Vec<f64> = u.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = u.iter().map(|p| p.y).collect();
        let (px, py) = (self.apply(&xs)?, self.apply(&ys)?);
        Ok(px.into_iter().zip(py).map(|(x, y)| Vec2::new(x, y)).collect())
    }

    /// `g_P(u, w) = ∮ ⟨u, P w⟩ dl`, trapezoidal in θ, `P` acting componentwise.
    pub fn metric_pair(&self, frenet: &FrenetData, u: &[Vec2], w: &[Vec2]) -> Result<f64> {
        check_len(self.n, frenet.len())?;
        check_len(self.n, u.len())?;
        let pw = self.apply_vec(w)?;
        let h = self.h();
        Ok(u.iter()
            .zip(&pw)
            .zip(&frenet.speed)
            .map(|((a, b), s)| a.dot(*b) * s)
            .sum::<f64>()
            * h)
    }

    /// `∮ f · P g dl` for scalar fields along the curve.
    pub fn scalar_pair(&self, frenet: &FrenetData, f: &[f64], g: &[f64]) -> Result<f64> {
        check_len(self.n, frenet.len())?;
        check_len(self.n, f.len())?;
        let pg = self.apply(g)?;
        Ok(f.iter().zip(&pg).zip(&frenet.speed).map(|((a, b), s)| a * b * s).sum::<f64>() * self.h())
    }
}

/// Solves the symmetric circulant tridiagonal system with constant diagonal
/// `d` and off-diagonal `e` (including the periodic corners) by the
/// Sherman–Morrison correction of a Thomas sweep.
fn cyclic_tridiagonal_solve(d: f64, e: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    // A = T + u vᵀ with u = (γ, 0, …, 0, e), v = (1, 0, …, 0, e/γ)
    let gamma = -d;
    let mut diag = vec![d; n];
    diag[0] = d - gamma;
    diag[n - 1] = d - e * e / gamma;

    let thomas = |b: &[f64]| -> Vec<f64> {
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        c_prime[0] = e / diag[0];
        d_prime[0] = b[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - e * c_prime[i - 1];
            c_prime[i] = e / m;
            d_prime[i] = (b[i] - e * d_prime[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d_prime[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d_prime[i] - c_prime[i] * x[i + 1];
        }
        x
    };

    let y = thomas(rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = e;
    let z = thomas(&u);
    let v_dot = |w: &[f64]| w[0] + e / gamma * w[n - 1];
    let factor = v_dot(&y) / (1.0 + v_dot(&z));
    y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect()
}
