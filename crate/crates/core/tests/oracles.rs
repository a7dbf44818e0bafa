mod common;

use std::f64::consts::{PI, TAU};

use common::{field_residuals, max_abs_diff, random_coeffs, smooth_field};
use unred::curvegeo::{frenet, DerivBackend, Reparam, Shape};
use unred::hopf::{holonomy, SpherePath, VerticalProfile};
use unred::hypflow::{circle_reduction_oracle, integrate, FlowConfig, FlowState};
use unred::sigma::{reconstruct, LieField, LieValue};
use unred::hopf::UnitQuaternion;
use unred::unreduction::ForceProfile;

/// Largest difference between the `M`-grid residual and the `2M`-grid one on
/// the shared interior nodes.
fn doubling_gap(m: usize, coeffs: &[f64]) -> f64 {
    let n = 48;
    let (h1, v1) = field_residuals(&smooth_field(m, m, n, coeffs).unwrap(), 0.1).unwrap();
    let (h2, v2) = field_residuals(&smooth_field(2 * m, 2 * m, n, coeffs).unwrap(), 0.1).unwrap();
    let mut gap = 0.0f64;
    for i in 1..m {
        for j in 1..m {
            gap = gap
                .max(max_abs_diff(h1.node(i, j), h2.node(2 * i, 2 * j)))
                .max(max_abs_diff(v1.node(i, j), v2.node(2 * i, 2 * j)));
        }
    }
    gap
}

#[test]
fn residuals_converge_at_second_order_under_grid_doubling() {
    for seed in 0..3 {
        let a = random_coeffs(seed, 5);
        let (e1, e2) = (doubling_gap(16, &a), doubling_gap(32, &a));
        let order = (e1 / e2).log2();
        assert!(order >= 1.8, "seed {seed}: gaps {e1:e} {e2:e}, order {order}");
    }
}

/// `D_θ t − κ|c_θ| n` measured through the curvature against its closed form.
fn frenet_error(shape: Shape, n: usize) -> f64 {
    let fr = frenet(&shape.sample(n, &Reparam::Identity).unwrap(), DerivBackend::CentralDifference).unwrap();
    common::thetas(n)
        .into_iter()
        .enumerate()
        .map(|(j, th)| (fr.curvature[j] - shape.curvature(th)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn frenet_difference_backend_is_second_order() {
    for shape in [Shape::Circle { r: 1.3 }, Shape::Ellipse { a: 1.6, b: 0.8 }, Shape::RoundedSquare { r: 1.0 }] {
        let errs: Vec<f64> = [64, 128, 256].iter().map(|&n| frenet_error(shape, n)).collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.9, "{shape:?}: {errs:?}");
        }
        let total: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&n| {
                let c = shape.sample(n, &Reparam::Identity).unwrap();
                (frenet(&c, DerivBackend::CentralDifference).unwrap().total_curvature() - TAU).abs()
            })
            .collect();
        assert!(total.windows(2).all(|w| w[1] < w[0] / 3.0) && total[2] < 1e-2, "{shape:?}: {total:?}");
    }
}

#[test]
fn x_independent_flow_matches_t_only_oracle() {
    let cfg = FlowConfig { dt: 2e-3, t_end: 0.4, ..FlowConfig::default() };
    for r0 in [0.8, 1.0, 1.5] {
        let s0 = FlowState::at_rest(Shape::Circle { r: r0 }.sample(64, &Reparam::Identity).unwrap());
        let traj = integrate(s0, &ForceProfile::Zero, &cfg).unwrap();
        for s in traj.states.iter().step_by(50) {
            let (r, h) = circle_reduction_oracle(r0, 0.0, s.time).unwrap();
            assert!((s.mean_radius() - r).abs() < 1e-8, "r0 {r0} t {}", s.time);
            assert!((s.mean_h() - h).abs() < 1e-8);
        }
    }
}

#[test]
fn holonomy_of_constant_profiles_is_shifted_by_two_pi_c() {
    let k = 2000;
    for c in [0.1, 0.25, -0.3] {
        let h = holonomy(&SpherePath::great_circle(k).unwrap(), &VerticalProfile::constant(k, c)).unwrap();
        assert!(h.phase_error(PI + TAU * c) < 1e-9, "c {c}: {}", h.phase);
    }
}

#[test]
fn flat_exp_field_reconstruction_is_second_order_in_the_geodesic_residual() {
    let xi = LieValue::new(0.6, -0.8, 0.0);
    let res = |m: usize| {
        let rec = reconstruct(&LieField::constant(m, m, xi, xi).unwrap(), UnitQuaternion::IDENTITY).unwrap();
        unred::sigma::geodesic_residual(&rec)
    };
    let (a, b) = (res(16), res(32));
    assert!((a / b).log2() > 1.8, "{a:e} {b:e}");
}
