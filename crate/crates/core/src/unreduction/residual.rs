use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{BoundaryMode, CurveField, NodeArray};
use super::jets::JetDecomposition;
use crate::curvegeo::{arclength_derivative, Vec2};
use crate::error::Result;
use crate::sobolev::SobolevOperator;

/// Vertical force `F^v` from a fixed registry of θ-profiles.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForceProfile {
    #[default]
    Zero,
    Constant { amplitude: f64 },
    /// `amplitude · cos(frequency · θ)`.
    Sinusoidal { amplitude: f64, frequency: i32 },
}

impl ForceProfile {
    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            ForceProfile::Zero => 0.0,
            ForceProfile::Constant { amplitude } => amplitude,
            ForceProfile::Sinusoidal { amplitude, frequency } => amplitude * (frequency as f64 * theta).cos(),
        }
    }

    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.eval(TAU * j as f64 / n as f64)).collect()
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            ForceProfile::Constant { amplitude } | ForceProfile::Sinusoidal { amplitude, .. }
                if !amplitude.is_finite() =>
            {
                Err("force.amplitude must be finite".into())
            }
            _ => Ok(()),
        }
    }
}

/// `P`-weighted normal and tangential components of the difference quotient
/// across one cell face, measured in the face-averaged frame.
struct FaceFlux {
    p_h: Vec<f64>,
    p_v: Vec<f64>,
}

fn face_flux(
    a: &[Vec2],
    b: &[Vec2],
    na: &[Vec2],
    nb: &[Vec2],
    h: f64,
    op: &SobolevOperator,
) -> Result<FaceFlux> {
    let n = a.len();
    let mut hf = Vec::with_capacity(n);
    let mut vf = Vec::with_capacity(n);
    for k in 0..n {
        let q = (1.0 / h) * (b[k] - a[k]);
        let nbar = (na[k] + nb[k]).normalized();
        let tbar = Vec2::new(nbar.y, -nbar.x);
        hf.push(q.dot(nbar));
        vf.push(q.dot(tbar));
    }
    Ok(FaceFlux { p_h: op.apply(&hf)?, p_v: op.apply(&vf)? })
}

/// Flux-form divergences `∂x P h_x + ∂t P h_t` and `∂x P v_x + ∂t P v_t` at
/// one interior node, from the four adjacent faces.
fn divergences(
    field: &CurveField,
    decomp: &JetDecomposition,
    op: &SobolevOperator,
    i: usize,
    j: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mx = field.mx();
    let (im, ip) = match field.mode() {
        BoundaryMode::PeriodicX => ((i + mx - 1) % mx, (i + 1) % mx),
        BoundaryMode::Dirichlet => (i - 1, i + 1),
    };
    let pts = |i: usize, j: usize| field.get(i, j).points();
    let nrm = |i: usize, j: usize| decomp.frame(field, i, j).normal.as_slice();
    let (dx, dt) = (field.dx(), field.dt());

    let xl = face_flux(pts(im, j), pts(i, j), nrm(im, j), nrm(i, j), dx, op)?;
    let xr = face_flux(pts(i, j), pts(ip, j), nrm(i, j), nrm(ip, j), dx, op)?;
    let tl = face_flux(pts(i, j - 1), pts(i, j), nrm(i, j - 1), nrm(i, j), dt, op)?;
    let tr = face_flux(pts(i, j), pts(i, j + 1), nrm(i, j), nrm(i, j + 1), dt, op)?;

    let n = field.n();
    let div = |f: fn(&FaceFlux) -> &Vec<f64>| -> Vec<f64> {
        (0..n)
            .map(|k| (f(&xr)[k] - f(&xl)[k]) / dx + (f(&tr)[k] - f(&tl)[k]) / dt)
            .collect()
    };
    Ok((div(|f| &f.p_h), div(|f| &f.p_v)))
}

fn node_residuals(
    field: &CurveField,
    decomp: &JetDecomposition,
    op: &SobolevOperator,
    force: &[f64],
    i: usize,
    j: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (div_h, div_v) = divergences(field, decomp, op, i, j)?;
    let frame = decomp.frame(field, i, j);
    let (hx, ht) = (decomp.h_x.node(i, j), decomp.h_t.node(i, j));
    let (pvx, pvt) = (decomp.p_v_x.node(i, j), decomp.p_v_t.node(i, j));
    let coupling: Vec<f64> = (0..hx.len()).map(|k| hx[k] * pvx[k] + ht[k] * pvt[k]).collect();
    let d_coupling = arclength_derivative(frame, &coupling)?;
    let big_h = decomp.big_h.node(i, j);
    let r_h = (0..hx.len())
        .map(|k| div_h[k] - d_coupling[k] + frame.curvature[k] * big_h[k])
        .collect();
    let r_v = div_v.iter().zip(force).map(|(d, f)| d - f).collect();
    Ok((r_h, r_v))
}

/// Both residual arrays `(R_h, R_v)`, zero at nodes the solver does not move.
///
/// The divergence terms use face fluxes (differences between neighbouring
/// curves projected on the face-averaged frame), which keeps the discrete
/// second derivative compact.
pub fn residuals(
    field: &CurveField,
    decomp: &JetDecomposition,
    op: &SobolevOperator,
    force: &ForceProfile,
) -> Result<(NodeArray, NodeArray)> {
    let (mx, mt, n) = (field.mx(), field.mt(), field.n());
    let fv = force.sample(n);
    let interior = field.interior_nodes();
    let values: Vec<(Vec<f64>, Vec<f64>)> = interior
        .par_iter()
        .map(|&(i, j)| node_residuals(field, decomp, op, &fv, i, j))
        .collect::<Result<_>>()?;
    let mut r_h = NodeArray::zeros(mx, mt, n);
    let mut r_v = NodeArray::zeros(mx, mt, n);
    for (&(i, j), (h, v)) in interior.iter().zip(values) {
        *r_h.node_mut(i, j) = h;
        *r_v.node_mut(i, j) = v;
    }
    if field.mode() == BoundaryMode::PeriodicX {
        for j in 0..=mt {
            *r_h.node_mut(mx, j) = r_h.node(0, j).to_vec();
            *r_v.node_mut(mx, j) = r_v.node(0, j).to_vec();
        }
    }
    Ok((r_h, r_v))
}

/// `R_h = ∂x P h_x + ∂t P h_t − D_θ(h_x P v_x + h_t P v_t) + κ H`.
pub fn residual_horizontal(field: &CurveField, decomp: &JetDecomposition, op: &SobolevOperator) -> Result<NodeArray> {
    Ok(residuals(field, decomp, op, &ForceProfile::Zero)?.0)
}

/// `R_v = ∂x P v_x + ∂t P v_t − F^v`.
pub fn residual_vertical(
    field: &CurveField,
    decomp: &JetDecomposition,
    op: &SobolevOperator,
    force: &ForceProfile,
) -> Result<NodeArray> {
    Ok(residuals(field, decomp, op, force)?.1)
}

/// Largest per-node root-mean-square of `(R_h, R_v)` over θ.
pub fn residual_norm(r_h: &NodeArray, r_v: &NodeArray) -> f64 {
    r_h.iter_nodes()
        .zip(r_v.iter_nodes())
        .map(|(h, v)| {
            let s: f64 = h.iter().zip(v).map(|(a, b)| a * a + b * b).sum();
            (s / h.len().max(1) as f64).sqrt()
        })
        .fold(0.0, f64::max)
}
