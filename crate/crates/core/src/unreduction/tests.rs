use std::f64::consts::PI;

use super::*;
use crate::curvegeo::{DiscreteCurve, Reparam, Shape, Vec2};
use crate::error::{Error, Result};
use crate::sobolev::SobolevOperator;

fn circle(n: usize, r: f64) -> Result<DiscreteCurve> {
    Shape::Circle { r }.sample(n, &Reparam::Identity)
}

fn constant_field(n: usize) -> CurveField {
    CurveField::from_fn(4, 4, BoundaryMode::Dirichlet, |_, _| circle(n, 1.0)).unwrap()
}

#[test]
fn constant_field_residuals_vanish() {
    let f = constant_field(32);
    let op = SobolevOperator::spectral(0.3, 32).unwrap();
    let d = jet_decompose(&f, &op).unwrap();
    assert_eq!(residual_horizontal(&f, &d, &op).unwrap().max_abs(), 0.0);
    assert_eq!(residual_vertical(&f, &d, &op, &ForceProfile::Zero).unwrap().max_abs(), 0.0);
}

#[test]
fn constant_force_survives_alone() {
    let f = constant_field(32);
    let op = SobolevOperator::spectral(0.3, 32).unwrap();
    let d = jet_decompose(&f, &op).unwrap();
    let rv = residual_vertical(&f, &d, &op, &ForceProfile::Constant { amplitude: 0.7 }).unwrap();
    for (i, j) in f.interior_nodes() {
        assert!(rv.node(i, j).iter().all(|r| *r == -0.7));
    }
    // boundary nodes are not part of the system
    assert!(rv.node(0, 2).iter().all(|r| *r == 0.0));
}

#[test]
fn arclength_parametrized_fields_have_no_vertical_residual() {
    let f = CurveField::from_fn(4, 4, BoundaryMode::Dirichlet, |x, t| circle(32, 1.0 + 0.5 * x + t)).unwrap();
    let op = SobolevOperator::spectral(0.2, 32).unwrap();
    let d = jet_decompose(&f, &op).unwrap();
    assert!(d.v_t.max_abs() < 1e-13 && d.v_x.max_abs() < 1e-13);
    assert!(residual_vertical(&f, &d, &op, &ForceProfile::Zero).unwrap().max_abs() < 1e-12);
}

#[test]
fn linear_radius_horizontal_residual_is_curvature_term() {
    // R(t) = 1 + 0.8 t: the divergence vanishes and R_h = ½ κ h_t² = 0.32 / R
    let (r0, r1) = (1.0, 1.8);
    let mt = 8;
    let f = CurveField::from_fn(2, mt, BoundaryMode::Dirichlet, |_, t| circle(64, r0 + (r1 - r0) * t)).unwrap();
    let op = SobolevOperator::spectral(0.0, 64).unwrap();
    let d = jet_decompose(&f, &op).unwrap();
    let rh = residual_horizontal(&f, &d, &op).unwrap();
    for j in 1..mt {
        let r = r0 + (r1 - r0) * j as f64 / mt as f64;
        let expected = 0.5 * (r1 - r0).powi(2) / r;
        for v in rh.node(1, j) {
            assert!((v - expected).abs() < 1e-11, "{v} vs {expected}");
        }
    }
}

#[test]
fn sinusoidal_force_profile() {
    let f = ForceProfile::Sinusoidal { amplitude: 2.0, frequency: 3 };
    let s = f.sample(16);
    for (j, v) in s.iter().enumerate() {
        let t = 2.0 * PI * j as f64 / 16.0;
        assert!((v - 2.0 * (3.0 * t).cos()).abs() < 1e-14);
    }
    assert!(ForceProfile::Zero.sample(8).iter().all(|v| *v == 0.0));
}

#[test]
fn energy_examples() {
    let op = SobolevOperator::spectral(0.0, 64).unwrap();

    let f = constant_field(64);
    let e = energy(&f, &jet_decompose(&f, &op).unwrap(), &op).unwrap();
    assert!(e.total.abs() < 1e-25 && e.horizontal.abs() < 1e-25 && e.vertical.abs() < 1e-25);

    // ∮cos² = ∮sin² = π on the unit circle, halved by the ½
    let f = CurveField::from_fn(4, 4, BoundaryMode::Dirichlet, |_, t| {
        Ok(circle(64, 1.0)?.translated(Vec2::new(t, 0.0)))
    })
    .unwrap();
    let e = energy(&f, &jet_decompose(&f, &op).unwrap(), &op).unwrap();
    assert!((e.total - PI).abs() < 1e-12);
    assert!((e.horizontal - PI / 2.0).abs() < 1e-12);
    assert!((e.vertical - PI / 2.0).abs() < 1e-12);

    // ∫₀¹ ½ · 2π(1 + t) dt
    let f = CurveField::from_fn(4, 4, BoundaryMode::Dirichlet, |_, t| circle(64, 1.0 + t)).unwrap();
    let e = energy(&f, &jet_decompose(&f, &op).unwrap(), &op).unwrap();
    assert!(e.vertical.abs() < 1e-20);
    assert!((e.horizontal - 1.5 * PI).abs() < 1e-12);
}

#[test]
fn constant_boundary_converges_immediately() {
    let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |_, _| circle(32, 1.0)).unwrap();
    let op = SobolevOperator::spectral(0.1, 32).unwrap();
    let (f, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default()).unwrap();
    assert!(rep.iterations <= 1);
    assert!(rep.residual < 1e-12);
    for c in f.curves() {
        let gap = c.points().iter().zip(b.bottom[0].points()).map(|(p, q)| (*p - *q).norm());
        assert!(gap.fold(0.0, f64::max) < 1e-14);
    }
}

#[test]
fn corner_mismatch_is_reported_by_solver() {
    let mut b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |_, _| circle(32, 1.0)).unwrap();
    b.right[4] = circle(32, 1.1).unwrap();
    let op = SobolevOperator::spectral(0.1, 32).unwrap();
    let r = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default());
    assert!(matches!(r, Err(Error::CornerMismatch { .. })));
}

#[test]
fn non_convergence_is_reported() {
    let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |x, t| circle(32, 1.0 + 0.5 * t * x)).unwrap();
    let op = SobolevOperator::spectral(0.1, 32).unwrap();
    let cfg = SolverConfig { max_iter: 1, ..SolverConfig::default() };
    let r = solve_bvp(&b, &op, &ForceProfile::Zero, &cfg);
    assert!(matches!(r, Err(Error::NonConvergence { iterations: 1, .. })));
    let cfg = SolverConfig { scheme: Scheme::Explicit, max_iter: 3, ..SolverConfig::default() };
    let r = solve_bvp(&b, &op, &ForceProfile::Zero, &cfg);
    assert!(matches!(r, Err(Error::NonConvergence { iterations: 3, .. })));
}

#[test]
fn small_circle_problem_converges() {
    let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |x, t| circle(32, 1.0 + t + 0.2 * x)).unwrap();
    let op = SobolevOperator::spectral(0.1, 32).unwrap();
    let (_, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default()).unwrap();
    assert!(rep.residual < 1e-8);
    assert!(rep.iterations <= 6, "{rep:?}");
    assert!(rep.history.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn explicit_scheme_converges_on_a_mild_problem() {
    // θ-modes grow like h² k² under explicit relaxation, so keep both small
    let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |_, t| circle(16, 1.0 + 0.05 * t)).unwrap();
    let op = SobolevOperator::spectral(0.1, 16).unwrap();
    let cfg = SolverConfig { scheme: Scheme::Explicit, tau: 0.01, tol_res: 1e-10, ..SolverConfig::default() };
    let (f, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &cfg).unwrap();
    assert_eq!(rep.krylov_iterations, 0);
    let newton = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig { tol_res: 1e-10, ..SolverConfig::default() })
        .unwrap()
        .0;
    for (p, q) in f.curves().iter().zip(newton.curves()) {
        let gap = p.points().iter().zip(q.points()).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
        assert!(gap < 1e-9, "{gap}");
    }
}

#[test]
fn forced_ellipse_problem_converges() {
    let b = BoundaryData::from_fn(6, 6, BoundaryMode::Dirichlet, |x, t| {
        Shape::Ellipse { a: 1.0 + t + 0.3 * x, b: 1.0 + 0.5 * t }.sample(32, &Reparam::Identity)
    })
    .unwrap();
    let op = SobolevOperator::spectral(0.1, 32).unwrap();
    let force = ForceProfile::Sinusoidal { amplitude: 0.2, frequency: 2 };
    let (_, rep) = solve_bvp(&b, &op, &force, &SolverConfig::default()).unwrap();
    assert!(rep.residual < 1e-8);
}

#[test]
fn periodic_problem_converges() {
    let b = BoundaryData::from_fn(6, 4, BoundaryMode::PeriodicX, |x, t| {
        let r = 1.0 + 0.5 * t + 0.1 * t * (1.0 - t) * (2.0 * PI * x).cos();
        circle(32, r)
    })
    .unwrap();
    let op = SobolevOperator::spectral(0.1, 32).unwrap();
    let (f, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default()).unwrap();
    assert!(rep.residual < 1e-8);
    assert!(f.get(0, 2).points().iter().zip(f.get(6, 2).points()).all(|(p, q)| p == q));
}
