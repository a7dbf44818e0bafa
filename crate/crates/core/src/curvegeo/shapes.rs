use serde::{Deserialize, Serialize};

use super::{DiscreteCurve, Vec2};
use crate::error::{Error, Result};

/// Built-in analytic closed curves, all counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    /// Polar curve `r (cos⁴θ + sin⁴θ)^{-1/4}`: a square with rounded corners.
    RoundedSquare { r: f64 },
}

impl Shape {
    pub fn eval(&self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        match *self {
            Shape::Circle { r } => Vec2::new(r * c, r * s),
            Shape::Ellipse { a, b } => Vec2::new(a * c, b * s),
            Shape::RoundedSquare { r } => {
                let rho = r * (c.powi(4) + s.powi(4)).powf(-0.25);
                Vec2::new(rho * c, rho * s)
            }
        }
    }

    /// Curvature at parameter `theta`, in closed form.
    pub fn curvature(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        match *self {
            Shape::Circle { r } => 1.0 / r,
            Shape::Ellipse { a, b } => a * b / (a * a * s * s + b * b * c * c).powf(1.5),
            Shape::RoundedSquare { r } => {
                // polar formula (ρ² + 2ρ'² − ρρ'') / (ρ² + ρ'²)^{3/2} via
                // finite differences of the closed-form radius
                let rho = |t: f64| {
                    let (s, c) = t.sin_cos();
                    (c.powi(4) + s.powi(4)).powf(-0.25)
                };
                let h = 1e-4;
                let r0 = rho(theta);
                let r1 = (rho(theta + h) - rho(theta - h)) / (2.0 * h);
                let r2 = (rho(theta + h) - 2.0 * r0 + rho(theta - h)) / (h * h);
                (r0 * r0 + 2.0 * r1 * r1 - r0 * r2) / (r0 * r0 + r1 * r1).powf(1.5) / r
            }
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let ok = match *self {
            Shape::Circle { r } => r > 0.0 && r.is_finite(),
            Shape::Ellipse { a, b } => a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite(),
            Shape::RoundedSquare { r } => r > 0.0 && r.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("shape parameters must be positive and finite: {self:?}"))
        }
    }

    /// Samples `c(φ(θ_j))` on an `n`-point grid.
    pub fn sample(&self, n: usize, phi: &Reparam) -> Result<DiscreteCurve> {
        self.validate().map_err(Error::InvalidCurve)?;
        DiscreteCurve::from_fn(n, |t| self.eval(phi.eval(t)))
    }
}

/// Orientation-preserving circle diffeomorphisms used to reparametrize curves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reparam {
    #[default]
    Identity,
    /// `θ ↦ θ + a sin θ`, a diffeomorphism for `|a| < 1`.
    Sine { amplitude: f64 },
    /// Rigid rotation `θ ↦ θ + offset`.
    Shift { offset: f64 },
}

impl Reparam {
    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            Reparam::Identity => theta,
            Reparam::Sine { amplitude } => theta + amplitude * theta.sin(),
            Reparam::Shift { offset } => theta + offset,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            Reparam::Sine { amplitude } if !(amplitude.abs() < 1.0) => {
                Err(format!("sine reparametrization needs |amplitude| < 1, got {amplitude}"))
            }
            Reparam::Shift { offset } if !offset.is_finite() => Err("shift offset must be finite".into()),
            _ => Ok(()),
        }
    }
}
