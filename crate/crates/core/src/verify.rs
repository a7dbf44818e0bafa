//! Built-in invariant suite run by `unred check`: one fast check per module
//! property, each reporting the measured quantity.

use std::f64::consts::{PI, TAU};

use crate::curvegeo::{frenet, shape_distance, DerivBackend, Reparam, Shape};
use crate::error::Result;
use crate::hopf::{holonomy, hopf_project, vertical_ode, SpherePath, UnitQuaternion, VerticalProfile};
use crate::hypflow::{circle_reduction_oracle, integrate, FlowConfig, FlowState};
use crate::sigma::{ep_residual, geodesic_residual, is_reductive, reconstruct, LieField, LieValue};
use crate::sobolev::SobolevOperator;
use crate::unreduction::{solve_bvp, BoundaryData, BoundaryMode, ForceProfile, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (&'static str, &'static str, fn() -> Result<(bool, String)>);

fn below(value: f64, tol: f64, what: &str) -> (bool, String) {
    (value < tol, format!("{what} = {value:.3e} (tol {tol:.0e})"))
}

fn circle_curvature() -> Result<(bool, String)> {
    let fr = frenet(&Shape::Circle { r: 2.0 }.sample(64, &Reparam::Identity)?, DerivBackend::Spectral)?;
    let err = fr.curvature.iter().fold(0.0f64, |m, k| m.max((k - 0.5).abs()));
    Ok(below(err, 1e-10, "max |κ − 1/R|"))
}

fn total_curvature() -> Result<(bool, String)> {
    let c = Shape::Ellipse { a: 2.0, b: 0.7 }.sample(128, &Reparam::Sine { amplitude: 0.3 })?;
    let fr = frenet(&c, DerivBackend::Spectral)?;
    Ok(below((fr.total_curvature() - TAU).abs(), 1e-8, "|∮κ dl − 2π|"))
}

fn shape_distance_reparam() -> Result<(bool, String)> {
    let s = Shape::Ellipse { a: 1.5, b: 1.0 };
    let d = shape_distance(&s.sample(128, &Reparam::Identity)?, &s.sample(128, &Reparam::Sine { amplitude: 0.3 })?)?;
    Ok(below(d, 1e-6, "shape distance under reparametrization"))
}

fn sobolev_spectrum() -> Result<(bool, String)> {
    let (n, a) = (64, 0.3);
    let op = SobolevOperator::spectral(a, n)?;
    let mut worst = 0.0f64;
    for k in 1..=n / 4 {
        let f: Vec<f64> = (0..n).map(|j| (k as f64 * TAU * j as f64 / n as f64).sin()).collect();
        let pf = op.apply(&f)?;
        let lam = 1.0 + a * a * (k * k) as f64;
        worst = worst.max(f.iter().zip(&pf).map(|(x, y)| (lam * x - y).abs()).fold(0.0, f64::max) / lam);
        let back = op.solve(&pf)?;
        worst = worst.max(f.iter().zip(&back).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    Ok(below(worst, 1e-10, "relative eigen/round-trip error"))
}

fn constant_boundary() -> Result<(bool, String)> {
    let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |_, _| {
        Shape::Circle { r: 1.0 }.sample(32, &Reparam::Identity)
    })?;
    let op = SobolevOperator::spectral(0.1, 32)?;
    let (_, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default())?;
    let (ok, d) = below(rep.residual, 1e-12, "residual");
    Ok((ok && rep.iterations <= 1, format!("{d}, {} iterations", rep.iterations)))
}

fn small_match() -> Result<(bool, String)> {
    let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |x, t| {
        Shape::Circle { r: 1.0 + t + 0.2 * x }.sample(32, &Reparam::Identity)
    })?;
    let op = SobolevOperator::spectral(0.1, 32)?;
    let (_, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default())?;
    Ok(below(rep.max_abs_r_v, 1e-8, "max |R_v|"))
}

fn flow_oracle() -> Result<(bool, String)> {
    let s0 = FlowState::at_rest(Shape::Circle { r: 1.0 }.sample(64, &Reparam::Identity)?);
    let cfg = FlowConfig { dt: 1e-3, t_end: 0.2, ..FlowConfig::default() };
    let traj = integrate(s0, &ForceProfile::Zero, &cfg)?;
    let end = traj.last();
    let (r, h) = circle_reduction_oracle(1.0, 0.0, end.time)?;
    let err = (end.mean_radius() - r).abs().max((end.mean_h() - h).abs());
    let v_zero = traj.states.iter().all(|s| s.v.iter().all(|v| *v == 0.0));
    let (ok, d) = below(err, 1e-6, "max(|ΔR|, |Δh|)");
    Ok((ok && v_zero, format!("{d}, v ≡ 0: {v_zero}")))
}

fn hopf_fibre_invariance() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for m in 0..20 {
        let t = m as f64;
        let q = UnitQuaternion::new(t.sin(), (2.0 * t).cos(), 0.3 + t.cos(), (0.7 * t).sin())?;
        let a = hopf_project(&q)?;
        let b = hopf_project(&q.fibre_shift(1.3 * t - 2.0).normalized())?;
        worst = worst.max((0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max));
    }
    Ok(below(worst, 1e-12, "fibre drift of the projection"))
}

fn hopf_great_circle() -> Result<(bool, String)> {
    let k = 10_000;
    let h = holonomy(&SpherePath::great_circle(k)?, &VerticalProfile::constant(k, 0.0))?;
    Ok(below(h.phase_error(PI), 1e-6, "|phase − π|"))
}

fn hopf_cancellation() -> Result<(bool, String)> {
    let k = 10_000;
    let h = holonomy(&SpherePath::great_circle(k)?, &vertical_ode(|t| t.cos(), -0.5, k)?)?;
    let (ok, d) = below(h.phase.abs(), 1e-6, "|phase|");
    Ok((ok && h.closure_error < 1e-6, format!("{d}, closure {:.3e}", h.closure_error)))
}

fn sigma_bracket() -> Result<(bool, String)> {
    let (a, b) = (0.7, -1.3);
    let r = ep_residual(&LieField::constant(6, 6, a * LieValue::E3 + b * LieValue::E1, LieValue::ZERO)?);
    let err = r.values.iter().map(|v| (*v - 2.0 * a * b * LieValue::E2).norm()).fold(0.0, f64::max);
    let (ok, d) = below(err, 1e-12, "|EP − 2αβe₂|");
    Ok((ok && is_reductive(), format!("{d}, reductive: {}", is_reductive())))
}

fn sigma_reconstruction() -> Result<(bool, String)> {
    let xi = LieValue::new(0.6, -0.8, 0.0);
    let rec = reconstruct(&LieField::constant(16, 16, xi, xi)?, UnitQuaternion::IDENTITY)?;
    let geo = geodesic_residual(&rec);
    let (ok, d) = below(rec.path_order_gap, 1e-6, "path-order gap");
    Ok((ok && geo < 5e-2, format!("{d}, geodesic residual {geo:.3e}")))
}

const CHECKS: &[Check] = &[
    ("curvegeo", "circle_curvature", circle_curvature),
    ("curvegeo", "total_curvature_2pi", total_curvature),
    ("curvegeo", "shape_distance_reparam_invariant", shape_distance_reparam),
    ("sobolev", "spectrum_and_round_trip", sobolev_spectrum),
    ("unreduction", "constant_boundary_exact", constant_boundary),
    ("unreduction", "vertical_conservation_small", small_match),
    ("hypflow", "circle_oracle", flow_oracle),
    ("hopf", "fibre_invariance", hopf_fibre_invariance),
    ("hopf", "great_circle_pi", hopf_great_circle),
    ("hopf", "holonomy_cancellation", hopf_cancellation),
    ("sigma", "bracket_case", sigma_bracket),
    ("sigma", "exp_field_reconstruction", sigma_reconstruction),
];

/// Runs every check in a fixed order; errors count as failures.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(module, name, f)| {
            let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome { module, name, passed, detail }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        let out = super::run_all();
        let failed: Vec<_> = out.iter().filter(|o| !o.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
