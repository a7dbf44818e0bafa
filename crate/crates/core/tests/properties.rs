mod common;

use std::f64::consts::TAU;

use proptest::prelude::*;
use unred::curvegeo::{frenet, shape_distance, DerivBackend, DiscreteCurve, Reparam, Shape, Vec2};
use unred::hopf::{hopf_project, UnitQuaternion};
use unred::sigma::LieValue;
use unred::sobolev::SobolevOperator;

fn star(n: usize, a: &[f64]) -> DiscreteCurve {
    DiscreteCurve::from_fn(n, |t| {
        let r = 1.0 + a[0] * (2.0 * t).cos() + a[1] * (3.0 * t).sin() + a[2] * (5.0 * t + 0.4).cos();
        Vec2::new(r * t.cos(), r * t.sin())
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frame_is_orthonormal_and_turns_once(a in prop::collection::vec(-0.1..0.1f64, 3)) {
        let fr = frenet(&star(256, &a), DerivBackend::Spectral).unwrap();
        for (t, n) in fr.tangent.iter().zip(&fr.normal) {
            prop_assert!((t.norm() - 1.0).abs() < 1e-12);
            prop_assert!(t.dot(*n).abs() < 1e-12);
            prop_assert!((t.perp() - *n).norm() < 1e-12);
        }
        prop_assert!((fr.total_curvature() - TAU).abs() < 1e-8);
    }

    #[test]
    fn shape_distance_ignores_reparametrization(
        a in prop::collection::vec(-0.1..0.1f64, 3),
        amp in -0.4..0.4f64,
        shift in 0.0..TAU,
    ) {
        let c = star(96, &a);
        let moved = c.reparametrized(&Reparam::Sine { amplitude: amp }).unwrap()
            .reparametrized(&Reparam::Shift { offset: shift }).unwrap();
        prop_assert!(shape_distance(&c, &moved).unwrap() < 1e-5);
    }

    #[test]
    fn sobolev_solve_inverts_apply(
        a in 0.0..1.0f64,
        f in prop::collection::vec(-1.0..1.0f64, 32),
    ) {
        let op = SobolevOperator::spectral(a, 32).unwrap();
        let back = op.solve(&op.apply(&f).unwrap()).unwrap();
        prop_assert!(common::max_abs_diff(&f, &back) < 1e-10);
    }

    #[test]
    fn sobolev_operator_is_self_adjoint_in_theta(
        a in 0.0..0.5f64,
        u in prop::collection::vec(-1.0..1.0f64, 64),
        w in prop::collection::vec(-1.0..1.0f64, 64),
    ) {
        let op = SobolevOperator::spectral(a, 32).unwrap();
        let uu: Vec<Vec2> = u.chunks(2).map(|p| Vec2::new(p[0], p[1])).collect();
        let ww: Vec<Vec2> = w.chunks(2).map(|p| Vec2::new(p[0], p[1])).collect();
        let pair = |x: &[Vec2], y: &[Vec2]| -> f64 {
            x.iter().zip(op.apply_vec(y).unwrap()).map(|(p, q)| p.dot(q)).sum()
        };
        let (g1, g2) = (pair(&uu, &ww), pair(&ww, &uu));
        prop_assert!((g1 - g2).abs() < 1e-10 * (1.0 + g1.abs()));
    }

    #[test]
    fn sobolev_metric_is_symmetric_and_positive_at_constant_speed(
        a in 0.0..0.5f64,
        r in 0.3..3.0f64,
        u in prop::collection::vec(-1.0..1.0f64, 64),
        w in prop::collection::vec(-1.0..1.0f64, 64),
    ) {
        let op = SobolevOperator::spectral(a, 32).unwrap();
        let fr = frenet(&Shape::Circle { r }.sample(32, &Reparam::Identity).unwrap(), DerivBackend::Spectral).unwrap();
        let uu: Vec<Vec2> = u.chunks(2).map(|p| Vec2::new(p[0], p[1])).collect();
        let ww: Vec<Vec2> = w.chunks(2).map(|p| Vec2::new(p[0], p[1])).collect();
        let (g1, g2) = (op.metric_pair(&fr, &uu, &ww).unwrap(), op.metric_pair(&fr, &ww, &uu).unwrap());
        prop_assert!((g1 - g2).abs() < 1e-10 * (1.0 + g1.abs()));
        let norm = op.metric_pair(&fr, &uu, &uu).unwrap();
        prop_assert!(norm > 0.0 || u.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn hopf_projection_is_fibre_invariant(
        q in prop::array::uniform4(-1.0..1.0f64),
        phi in -10.0..10.0f64,
    ) {
        prop_assume!(q.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let q = UnitQuaternion::new(q[0], q[1], q[2], q[3]).unwrap();
        let (a, b) = (hopf_project(&q).unwrap(), hopf_project(&q.fibre_shift(phi)).unwrap());
        prop_assert!((0..3).all(|i| (a[i] - b[i]).abs() < 1e-12));
        prop_assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(
        a in prop::array::uniform3(-2.0..2.0f64),
        b in prop::array::uniform3(-2.0..2.0f64),
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let (a, b, c) = (LieValue(a), LieValue(b), LieValue(c));
        prop_assert!((a.bracket(b) + b.bracket(a)).norm() < 1e-12);
        let jac = a.bracket(b.bracket(c)) + b.bracket(c.bracket(a)) + c.bracket(a.bracket(b));
        prop_assert!(jac.norm() < 1e-10);
        // reductive split: [𝔥, 𝔪] ⊂ 𝔪
        let h = a.h_part();
        prop_assert!(h.bracket(b.m_part()).h_part().norm() < 1e-12);
    }
}
