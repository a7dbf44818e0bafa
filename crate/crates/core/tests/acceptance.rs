//! One PASS/FAIL line per acceptance criterion, with the measured values and
//! wall time against each runtime budget.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use unred::config::RunConfig;
use unred::curvegeo::{frenet, shape_distance, DerivBackend, Reparam, Shape};
use unred::hopf::{holonomy, vertical_ode, SpherePath, UnitQuaternion, VerticalProfile};
use unred::hypflow::{circle_reduction_oracle, integrate, FlowConfig, FlowState};
use unred::runner::run;
use unred::sigma::{ep_residual, geodesic_residual, reconstruct, LieField, LieValue};
use unred::sobolev::SobolevOperator;
use unred::unreduction::{solve_bvp, BoundaryData, BoundaryMode, CurveField, ForceProfile, SolverConfig};
use unred::Result;

type Outcome = Result<(bool, String)>;

fn c1_hopf_pi() -> Outcome {
    let k = 10_000;
    let h = holonomy(&SpherePath::great_circle(k)?, &VerticalProfile::constant(k, 0.0))?;
    let err = h.phase_error(PI);
    Ok((err < 1e-6, format!("phase {:.12}, |phase − π| = {err:.2e}", h.phase)))
}

fn c2_hopf_cancel() -> Outcome {
    let k = 10_000;
    let h = holonomy(&SpherePath::great_circle(k)?, &vertical_ode(|t| t.cos(), -0.5, k)?)?;
    Ok((
        h.phase.abs() < 1e-6 && h.closure_error < 1e-6,
        format!("phase {:.2e}, closure {:.2e}", h.phase, h.closure_error),
    ))
}

fn c3_flow_oracle() -> Outcome {
    let cfg = FlowConfig { dt: 1e-3, t_end: 0.5, ..FlowConfig::default() };
    let s0 = FlowState::at_rest(Shape::Circle { r: 1.0 }.sample(256, &Reparam::Identity)?);
    let traj = integrate(s0, &ForceProfile::Zero, &cfg)?;
    let mut err = 0.0f64;
    for s in &traj.states {
        let (r, h) = circle_reduction_oracle(1.0, 0.0, s.time)?;
        err = err.max((s.mean_radius() - r).abs()).max((s.mean_h() - h).abs());
    }
    let v_zero = traj.states.iter().all(|s| s.v.iter().all(|v| *v == 0.0));
    let t_end = traj.last().time;
    Ok((
        err < 1e-6 && v_zero && (t_end - 0.5).abs() < 1e-12,
        format!("max (|ΔR|, |Δh|) = {err:.2e} up to t = {t_end}, v ≡ 0: {v_zero}"),
    ))
}

fn doubling_order(coeffs: &[f64]) -> f64 {
    let gap = |m: usize| {
        let (h1, v1) = common::field_residuals(&common::smooth_field(m, m, 48, coeffs).unwrap(), 0.1).unwrap();
        let (h2, v2) = common::field_residuals(&common::smooth_field(2 * m, 2 * m, 48, coeffs).unwrap(), 0.1).unwrap();
        let mut g = 0.0f64;
        for i in 1..m {
            for j in 1..m {
                g = g
                    .max(common::max_abs_diff(h1.node(i, j), h2.node(2 * i, 2 * j)))
                    .max(common::max_abs_diff(v1.node(i, j), v2.node(2 * i, 2 * j)));
            }
        }
        g
    };
    (gap(16) / gap(32)).log2()
}

fn c4_unreduction_exactness() -> Outcome {
    let b = BoundaryData::from_fn(8, 8, BoundaryMode::Dirichlet, |_, _| {
        Shape::Circle { r: 1.0 }.sample(64, &Reparam::Identity)
    })?;
    let op = SobolevOperator::spectral(0.1, 64)?;
    let (_, rep) = solve_bvp(&b, &op, &ForceProfile::Zero, &SolverConfig::default())?;
    let orders: Vec<f64> = (0..3).map(|s| doubling_order(&common::random_coeffs(s, 5))).collect();
    let worst = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        rep.residual < 1e-12 && rep.iterations <= 1 && worst >= 1.8,
        format!(
            "constant circle: residual {:.1e} in {} iterations; doubling orders {:.2?} (threshold 1.8)",
            rep.residual, rep.iterations, orders
        ),
    ))
}

fn reference_problem(phi: &Reparam) -> Result<BoundaryData> {
    BoundaryData::from_fn(16, 16, BoundaryMode::Dirichlet, |_, t| {
        Shape::Circle { r: 1.0 + t }.sample(256, phi)
    })
}

fn reference_solve(phi: &Reparam) -> Result<(CurveField, f64, f64, usize)> {
    let op = SobolevOperator::spectral(0.1, 256)?;
    let (field, rep) = solve_bvp(&reference_problem(phi)?, &op, &ForceProfile::Zero, &SolverConfig::default())?;
    Ok((field, rep.max_abs_r_v, rep.residual, rep.iterations))
}

fn c5_vertical_conservation(base: &Result<(CurveField, f64, f64, usize)>) -> Outcome {
    let (_, rv, res, it) = base.as_ref().map_err(|e| unred::Error::Config(vec![e.to_string()]))?;
    Ok((*rv < 1e-8, format!("max |R_v| = {rv:.2e}, residual {res:.2e}, {it} Newton steps")))
}

fn c6_equivariance(base: &Result<(CurveField, f64, f64, usize)>) -> Outcome {
    let (a, ..) = base.as_ref().map_err(|e| unred::Error::Config(vec![e.to_string()]))?;
    let (b, _, _, it) = reference_solve(&Reparam::Sine { amplitude: 0.3 })?;
    let mut worst = 0.0f64;
    for (p, q) in a.curves().iter().zip(b.curves()) {
        worst = worst.max(shape_distance(p, q)?);
    }
    Ok((worst < 1e-3, format!("max shape distance {worst:.2e} (reparametrized solve: {it} Newton steps)")))
}

fn c7_sobolev_spectrum() -> Outcome {
    let (n, a) = (256, 0.1);
    let op = SobolevOperator::spectral(a, n)?;
    let (mut eig, mut rt) = (0.0f64, 0.0f64);
    for k in 1..=n / 4 {
        let f: Vec<f64> = common::thetas(n).iter().map(|t| (k as f64 * t).sin()).collect();
        let pf = op.apply(&f)?;
        let lam = 1.0 + a * a * (k * k) as f64;
        let expect: Vec<f64> = f.iter().map(|x| lam * x).collect();
        eig = eig.max(common::max_abs_diff(&pf, &expect) / lam);
        rt = rt.max(common::max_abs_diff(&op.solve(&pf)?, &f));
    }
    Ok((eig < 1e-10 && rt < 1e-10, format!("relative eigen error {eig:.2e}, round trip {rt:.2e}, k ≤ {}", n / 4)))
}

fn c8_frenet_order() -> Outcome {
    let shapes = [Shape::Circle { r: 1.3 }, Shape::Ellipse { a: 1.6, b: 0.8 }, Shape::RoundedSquare { r: 1.0 }];
    let (mut kappa_order, mut total_order) = (f64::INFINITY, f64::INFINITY);
    let mut total_err = 0.0f64;
    for shape in shapes {
        let (mut errs, mut totals) = (Vec::new(), Vec::new());
        for n in [64, 128, 256] {
            let fr = frenet(&shape.sample(n, &Reparam::Identity)?, DerivBackend::CentralDifference)?;
            let e = common::thetas(n)
                .iter()
                .enumerate()
                .map(|(j, t)| (fr.curvature[j] - shape.curvature(*t)).abs())
                .fold(0.0, f64::max);
            errs.push(e);
            totals.push((fr.total_curvature() - TAU).abs());
        }
        total_err = total_err.max(totals[2]);
        for w in errs.windows(2) {
            kappa_order = kappa_order.min((w[0] / w[1]).log2());
        }
        for w in totals.windows(2) {
            total_order = total_order.min((w[0] / w[1]).log2());
        }
    }
    Ok((
        kappa_order >= 1.9 && total_order >= 1.9,
        format!(
            "min curvature order {kappa_order:.3}; ∮κ dl → 2π at order {total_order:.3} (|error| {total_err:.2e} at N = 256)"
        ),
    ))
}

fn c9_sigma() -> Outcome {
    let (alpha, beta) = (0.7, -1.3);
    let ep = ep_residual(&LieField::constant(8, 8, alpha * LieValue::E3 + beta * LieValue::E1, LieValue::ZERO)?);
    let bracket_err = ep.values.iter().map(|v| (*v - 2.0 * alpha * beta * LieValue::E2).norm()).fold(0.0, f64::max);
    let xi = LieValue::new(0.6, -0.8, 0.0);
    let geo = |m: usize| -> Result<(f64, f64)> {
        let rec = reconstruct(&LieField::constant(m, m, xi, xi)?, UnitQuaternion::IDENTITY)?;
        Ok((rec.path_order_gap, geodesic_residual(&rec)))
    };
    let ((gap, g1), (_, g2)) = (geo(16)?, geo(32)?);
    let order = (g1 / g2).log2();
    Ok((
        bracket_err < 1e-12 && gap < 1e-6 && order > 1.8,
        format!("|EP − 2αβ e₂| = {bracket_err:.1e}, path-order gap {gap:.1e}, geodesic residual order {order:.2}"),
    ))
}

fn csv_bytes(dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>, root: &Path) {
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            csv_bytes(&p, out, root);
        } else if p.extension().is_some_and(|e| e == "csv") {
            out.insert(p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap());
        }
    }
}

fn c10_determinism() -> Outcome {
    let tmp = tempfile::TempDir::new()?;
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut names: Vec<PathBuf> = fs::read_dir(&dir)?.map(|e| e.unwrap().path()).collect();
    names.sort();
    let mut files = 0;
    for path in &names {
        let cfg = RunConfig::from_file(path, None)?;
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let runs: Vec<BTreeMap<PathBuf, Vec<u8>>> = (0..2)
            .map(|r| {
                let out = tmp.path().join(format!("{stem}_{r}"));
                run(&cfg, Some(&out));
                let mut m = BTreeMap::new();
                csv_bytes(&out, &mut m, &out);
                m
            })
            .collect();
        if runs[0] != runs[1] || runs[0].is_empty() {
            return Ok((false, format!("{stem}: CSV outputs differ between runs")));
        }
        files += runs[0].len();
    }
    Ok((true, format!("{} configs, {files} CSV files byte-identical across two runs", names.len())))
}

fn report(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (ok, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = elapsed <= budget;
    let pass = ok && in_time;
    println!(
        "{} [{id:>2}] {name}: {detail} ({:.2?}, budget {:?}{})",
        if pass { "PASS" } else { "FAIL" },
        elapsed,
        budget,
        if in_time { "" } else { ", over budget" }
    );
    pass
}

fn main() {
    let s = Duration::from_secs;
    let mut results = vec![
        report(1, "Hopf holonomy π", s(1), c1_hopf_pi),
        report(2, "holonomy cancellation", s(1), c2_hopf_cancel),
        report(3, "hyperbolic flow circle oracle", s(10), c3_flow_oracle),
        report(4, "un-reduction exactness", s(30), c4_unreduction_exactness),
    ];
    let start = Instant::now();
    let base = reference_solve(&Reparam::Identity);
    let base_time = start.elapsed();
    results.push(report(5, "vertical conservation law", s(300).saturating_sub(base_time), || c5_vertical_conservation(&base)));
    results.push(report(6, "shape-space equivariance", s(600).saturating_sub(base_time), || c6_equivariance(&base)));
    println!("       (reference solve shared by [5] and [6]: {base_time:.2?})");
    results.extend([
        report(7, "Sobolev operator spectrum", s(1), c7_sobolev_spectrum),
        report(8, "Frenet convergence", s(5), c8_frenet_order),
        report(9, "Euler–Poincaré bracket case", s(5), c9_sigma),
        report(10, "determinism", s(120), c10_determinism),
    ]);
    let passed = results.iter().filter(|p| **p).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
