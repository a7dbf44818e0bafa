//! Euler–Poincaré and zero-curvature residuals for σ-models on
//! `SU(2)/U(1) ≅ S²`, and reconstruction of the map from its Lie-algebra data.
//!
//! `𝔰𝔲(2) ≅ ℝ³` with `[a, b] = 2 a × b`, `𝔥 = span(e₃)`, `𝔪 = span(e₁, e₂)`.
//! Fields live on the `(M_x+1)×(M_t+1)` lattice of `[0,1]²`, row-major in `x`.

use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::UnitQuaternion;

const FLATNESS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LieValue(pub [f64; 3]);

impl LieValue {
    pub const ZERO: Self = Self([0.0; 3]);
    pub const E1: Self = Self([1.0, 0.0, 0.0]);
    pub const E2: Self = Self([0.0, 1.0, 0.0]);
    pub const E3: Self = Self([0.0, 0.0, 1.0]);

    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self([a, b, c])
    }

    pub fn bracket(self, o: Self) -> Self {
        let (a, b) = (self.0, o.0);
        Self([
            2.0 * (a[1] * b[2] - a[2] * b[1]),
            2.0 * (a[2] * b[0] - a[0] * b[2]),
            2.0 * (a[0] * b[1] - a[1] * b[0]),
        ])
    }

    pub fn m_part(self) -> Self {
        Self([self.0[0], self.0[1], 0.0])
    }

    pub fn h_part(self) -> Self {
        Self([0.0, 0.0, self.0[2]])
    }

    pub fn norm(self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// As the pure quaternion `a₁i + a₂j + a₃k`.
    pub fn to_quaternion(self) -> UnitQuaternion {
        UnitQuaternion { w: 0.0, x: self.0[0], y: self.0[1], z: self.0[2] }
    }
}

impl Add for LieValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for LieValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for LieValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<LieValue> for f64 {
    type Output = LieValue;
    fn mul(self, v: LieValue) -> LieValue {
        LieValue(v.0.map(|x| self * x))
    }
}

/// `[𝔥, 𝔪] ⊆ 𝔪` on the basis, to machine precision.
pub fn is_reductive() -> bool {
    [LieValue::E1, LieValue::E2].iter().all(|m| LieValue::E3.bracket(*m).h_part() == LieValue::ZERO)
}

/// The two components `ς_t`, `ς_x` of a `𝔤`-valued 1-form on `[0,1]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieField {
    mx: usize,
    mt: usize,
    pub sigma_t: Vec<LieValue>,
    pub sigma_x: Vec<LieValue>,
}

impl LieField {
    pub fn new(mx: usize, mt: usize, sigma_t: Vec<LieValue>, sigma_x: Vec<LieValue>) -> Result<Self> {
        if mx < 2 || mt < 2 {
            return Err(Error::ShapeMismatch(format!("lattice needs M_x, M_t >= 2, got {mx}×{mt}")));
        }
        let n = (mx + 1) * (mt + 1);
        if sigma_t.len() != n || sigma_x.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n} nodes, got ς_t: {}, ς_x: {}",
                sigma_t.len(),
                sigma_x.len()
            )));
        }
        Ok(Self { mx, mt, sigma_t, sigma_x })
    }

    /// `f(x, t) = (ς_t, ς_x)`.
    pub fn from_fn(mx: usize, mt: usize, f: impl Fn(f64, f64) -> (LieValue, LieValue)) -> Result<Self> {
        let (mut st, mut sx) = (Vec::new(), Vec::new());
        for i in 0..=mx {
            for j in 0..=mt {
                let (a, b) = f(i as f64 / mx as f64, j as f64 / mt as f64);
                st.push(a);
                sx.push(b);
            }
        }
        Self::new(mx, mt, st, sx)
    }

    pub fn constant(mx: usize, mt: usize, sigma_t: LieValue, sigma_x: LieValue) -> Result<Self> {
        Self::from_fn(mx, mt, |_, _| (sigma_t, sigma_x))
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    pub fn mt(&self) -> usize {
        self.mt
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.mt + 1) + j
    }

    pub fn t_at(&self, i: usize, j: usize) -> LieValue {
        self.sigma_t[self.idx(i, j)]
    }

    pub fn x_at(&self, i: usize, j: usize) -> LieValue {
        self.sigma_x[self.idx(i, j)]
    }

    fn interior(&self, f: impl Fn(usize, usize) -> LieValue + Sync) -> InteriorArray {
        let values = (1..self.mx)
            .into_par_iter()
            .flat_map_iter(|i| (1..self.mt).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        InteriorArray { mx: self.mx, mt: self.mt, values }
    }
}

/// Values at the interior nodes `1 ≤ i < M_x`, `1 ≤ j < M_t`, row-major in `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorArray {
    pub mx: usize,
    pub mt: usize,
    pub values: Vec<LieValue>,
}

impl InteriorArray {
    pub fn get(&self, i: usize, j: usize) -> LieValue {
        self.values[(i - 1) * (self.mt - 1) + (j - 1)]
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

/// `∂_t(ς_t)_𝔪 + ∂_x(ς_x)_𝔪 + [(ς_t)_𝔥, (ς_t)_𝔪] + [(ς_x)_𝔥, (ς_x)_𝔪]`.
pub fn ep_residual(field: &LieField) -> InteriorArray {
    let (ht, hx) = (2.0 / field.mt as f64, 2.0 / field.mx as f64);
    field.interior(|i, j| {
        let dt = (1.0 / ht) * (field.t_at(i, j + 1).m_part() - field.t_at(i, j - 1).m_part());
        let dx = (1.0 / hx) * (field.x_at(i + 1, j).m_part() - field.x_at(i - 1, j).m_part());
        let (st, sx) = (field.t_at(i, j), field.x_at(i, j));
        dt + dx + st.h_part().bracket(st.m_part()) + sx.h_part().bracket(sx.m_part())
    })
}

/// `∂_t ς_x − ∂_x ς_t + [ς_t, ς_x]`.
pub fn flatness_residual(field: &LieField) -> InteriorArray {
    let (ht, hx) = (2.0 / field.mt as f64, 2.0 / field.mx as f64);
    field.interior(|i, j| {
        let dt = (1.0 / ht) * (field.x_at(i, j + 1) - field.x_at(i, j - 1));
        let dx = (1.0 / hx) * (field.t_at(i + 1, j) - field.t_at(i - 1, j));
        dt - dx + field.t_at(i, j).bracket(field.x_at(i, j))
    })
}

/// Cubic interpolation of `f` half-way between samples `m` and `m + 1`.
fn midpoint(f: &[LieValue], m: usize) -> LieValue {
    let n = f.len();
    let (a, b, c, d) = if m == 0 {
        (f[0], f[1], f[2], f[3])
    } else if m + 2 >= n {
        (f[n - 4], f[n - 3], f[n - 2], f[n - 1])
    } else {
        (f[m - 1], f[m], f[m + 1], f[m + 2])
    };
    // weights at the midpoint of the inner (or edge) interval
    let w = if m == 0 {
        [5.0, 15.0, -5.0, 1.0]
    } else if m + 2 >= n {
        [1.0, -5.0, 15.0, 5.0]
    } else {
        [-1.0, 9.0, 9.0, -1.0]
    };
    (1.0 / 16.0) * (w[0] * a + w[1] * b + w[2] * c + w[3] * d)
}

/// Integrates `ġ = g ς` along one lattice line with RK4.
fn integrate_line(g0: UnitQuaternion, line: &[LieValue], h: f64) -> Vec<UnitQuaternion> {
    let rhs = |g: UnitQuaternion, s: LieValue| g * s.to_quaternion();
    let mut out = Vec::with_capacity(line.len());
    let mut g = g0;
    out.push(g);
    for m in 0..line.len() - 1 {
        let mid = midpoint(line, m);
        let k1 = rhs(g, line[m]);
        let k2 = rhs(g + (0.5 * h) * k1, mid);
        let k3 = rhs(g + (0.5 * h) * k2, mid);
        let k4 = rhs(g + h * k3, line[m + 1]);
        g = (g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).normalized();
        out.push(g);
    }
    out
}

/// Reconstructed map on the lattice, row-major in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub mx: usize,
    pub mt: usize,
    pub g: Vec<UnitQuaternion>,
    /// Largest disagreement between the two path orders.
    pub path_order_gap: f64,
}

impl Reconstruction {
    pub fn at(&self, i: usize, j: usize) -> UnitQuaternion {
        self.g[i * (self.mt + 1) + j]
    }

    /// `g e₃ ḡ`: the point of `S² = SU(2)/U(1)` under `g`.
    pub fn projected(&self, i: usize, j: usize) -> [f64; 3] {
        project_to_sphere(&self.at(i, j))
    }
}

pub fn project_to_sphere(g: &UnitQuaternion) -> [f64; 3] {
    g.rotate([0.0, 0.0, 1.0])
}

/// Solves `g⁻¹dg = ς` from `g(0,0) = g0` along x-then-t and t-then-x paths.
pub fn reconstruct(field: &LieField, g0: UnitQuaternion) -> Result<Reconstruction> {
    g0.check()?;
    let (mx, mt) = (field.mx, field.mt);
    let (hx, ht) = (1.0 / mx as f64, 1.0 / mt as f64);
    let col_x = |j: usize| (0..=mx).map(|i| field.x_at(i, j)).collect::<Vec<_>>();
    let row_t = |i: usize| (0..=mt).map(|j| field.t_at(i, j)).collect::<Vec<_>>();

    let base_x = integrate_line(g0, &col_x(0), hx);
    let mut a = vec![g0; (mx + 1) * (mt + 1)];
    for (i, gi) in base_x.iter().enumerate() {
        for (j, g) in integrate_line(*gi, &row_t(i), ht).into_iter().enumerate() {
            a[i * (mt + 1) + j] = g;
        }
    }
    let base_t = integrate_line(g0, &row_t(0), ht);
    let mut gap = 0.0f64;
    for (j, gj) in base_t.iter().enumerate() {
        for (i, g) in integrate_line(*gj, &col_x(j), hx).into_iter().enumerate() {
            gap = gap.max(g.distance(&a[i * (mt + 1) + j]));
        }
    }
    if gap > FLATNESS_TOL {
        return Err(Error::Flatness { gap });
    }
    Ok(Reconstruction { mx, mt, g: a, path_order_gap: gap })
}

/// Largest `|p'' + |p'|² p|` over lattice lines in `x` (fixed `t`) and in `t`
/// (fixed `x`), by central differences. Zero for constant-speed great circles.
pub fn geodesic_residual(rec: &Reconstruction) -> f64 {
    let (mx, mt) = (rec.mx, rec.mt);
    let resid = |a: [f64; 3], b: [f64; 3], c: [f64; 3], h: f64| {
        let acc: [f64; 3] = std::array::from_fn(|k| (a[k] - 2.0 * b[k] + c[k]) / (h * h));
        let vel: [f64; 3] = std::array::from_fn(|k| (c[k] - a[k]) / (2.0 * h));
        let v2: f64 = vel.iter().map(|v| v * v).sum();
        (0..3).map(|k| (acc[k] + v2 * b[k]).powi(2)).sum::<f64>().sqrt()
    };
    let mut worst = 0.0f64;
    for j in 0..=mt {
        for i in 1..mx {
            let r = resid(rec.projected(i - 1, j), rec.projected(i, j), rec.projected(i + 1, j), 1.0 / mx as f64);
            worst = worst.max(r);
        }
    }
    for i in 0..=mx {
        for j in 1..mt {
            let r = resid(rec.projected(i, j - 1), rec.projected(i, j), rec.projected(i, j + 1), 1.0 / mt as f64);
            worst = worst.max(r);
        }
    }
    worst
}

/// Residual norms and reconstruction diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub mx: usize,
    pub mt: usize,
    pub ep_residual_max: f64,
    pub flatness_residual_max: f64,
    /// `None` when the field is not flat enough to reconstruct.
    pub path_order_gap: Option<f64>,
    pub geodesic_residual: Option<f64>,
}

impl SigmaReport {
    pub fn compute(field: &LieField, g0: UnitQuaternion) -> Result<Self> {
        let rec = match reconstruct(field, g0) {
            Ok(r) => Some(r),
            Err(Error::Flatness { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            mx: field.mx,
            mt: field.mt,
            ep_residual_max: ep_residual(field).max_norm(),
            flatness_residual_max: flatness_residual(field).max_norm(),
            path_order_gap: rec.as_ref().map(|r| r.path_order_gap),
            geodesic_residual: rec.as_ref().map(geodesic_residual),
        })
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
