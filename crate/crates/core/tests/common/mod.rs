#![allow(dead_code)]

use std::f64::consts::TAU;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use unred::curvegeo::{DiscreteCurve, Vec2};
use unred::sobolev::SobolevOperator;
use unred::unreduction::{jet_decompose, residuals, BoundaryMode, CurveField, ForceProfile, NodeArray};
use unred::Result;

/// Smooth random field coefficients drawn from a deterministic runner.
pub fn random_coeffs(seed_offset: usize, len: usize) -> Vec<f64> {
    let mut runner = TestRunner::deterministic();
    let strat = prop::collection::vec(-0.08..0.08f64, len);
    let mut v = Vec::new();
    for _ in 0..=seed_offset {
        v = strat.new_tree(&mut runner).unwrap().current();
    }
    v
}

/// Star-shaped curve `r(x, t, θ)` with low-order smooth perturbations.
pub fn smooth_field(mx: usize, mt: usize, n: usize, a: &[f64]) -> Result<CurveField> {
    CurveField::from_fn(mx, mt, BoundaryMode::Dirichlet, |x, t| {
        let r = move |th: f64| {
            1.0 + 0.4 * t + 0.2 * x * t
                + a[0] * (2.0 * th).cos() * (1.0 + x)
                + a[1] * (3.0 * th).sin() * t * t
                + a[2] * th.cos() * (x * t).sin()
                + a[3] * (2.0 * th + 1.3 * x).sin()
        };
        DiscreteCurve::from_fn(n, |th| {
            let rr = r(th + a[4] * th.sin() * x);
            Vec2::new(rr * th.cos(), rr * th.sin())
        })
    })
}

pub fn field_residuals(field: &CurveField, a: f64) -> Result<(NodeArray, NodeArray)> {
    let op = SobolevOperator::spectral(a, field.n())?;
    let d = jet_decompose(field, &op)?;
    residuals(field, &d, &op, &ForceProfile::Zero)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn thetas(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}
