//! Executes a [`RunConfig`] and writes its artifacts: `manifest.json`, CSV
//! snapshots and `plotdata.csv`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, FieldSpec, PathSpec, ProfileSpec, RunConfig};
use crate::curvegeo::{frenet, shape_distance, write_curve_csv_file, DerivBackend, Shape};
use crate::error::{Error, Result};
use crate::hopf::{horizontal_lift, lift_unchecked, section, vertical_ode, HolonomyReport, SpherePath, VerticalProfile};
use crate::hypflow::{circle_reduction_oracle, export_trajectory, run_flow, FlowState};
use crate::sigma::{reconstruct, LieField, SigmaReport};
use crate::sobolev::SobolevOperator;
use crate::unreduction::{relax, BoundaryData, CurveField};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
        _ => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub version: &'static str,
    pub status: String,
    pub exit_code: i32,
    pub error: Option<String>,
    pub config: RunConfig,
    pub results: Value,
    pub artifacts: Vec<String>,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub timings: Value,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub dir: PathBuf,
    pub manifest: Manifest,
}

/// Results gathered by a command, with the error that ended it early, if any.
struct Partial {
    results: Value,
    artifacts: Vec<String>,
    error: Option<Error>,
}

impl Partial {
    fn ok(results: Value, artifacts: Vec<String>) -> Self {
        Self { results, artifacts, error: None }
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::Csv(e.to_string()))
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv_writer(path)?;
    let err = |e: csv::Error| Error::Csv(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

fn s(x: f64) -> String {
    x.to_string()
}

/// Runs `cfg`, writing into `out` (or `cfg.output.dir`). Never panics on
/// numerical failure: the exit code and manifest describe what happened.
pub fn run(cfg: &RunConfig, out: Option<&Path>) -> RunOutcome {
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.dir.clone());
    let start = Instant::now();
    let partial = match fs::create_dir_all(&dir) {
        Err(e) => Err(e.into()),
        Ok(()) => match cfg.command {
            Command::Match => run_match(cfg, &dir),
            Command::Flow => run_flow_cmd(cfg, &dir),
            Command::Hopf => run_hopf(cfg, &dir),
            Command::Sigma => run_sigma(cfg, &dir),
            Command::Check => run_check(&dir),
        },
    };
    let partial = partial.unwrap_or_else(|e| Partial { results: Value::Null, artifacts: Vec::new(), error: Some(e) });
    let elapsed = start.elapsed().as_secs_f64();

    let (exit_code, status) = match &partial.error {
        None if cfg.command == Command::Check && partial.results["failed"].as_u64() != Some(0) => {
            (EXIT_CHECK_FAILED, "checks_failed")
        }
        None => (EXIT_OK, "ok"),
        Some(Error::NonConvergence { .. }) => (EXIT_NON_CONVERGENCE, "non_convergence"),
        Some(e) => (exit_code(e), "error"),
    };
    let mut manifest = Manifest {
        command: cfg.command.name(),
        version: env!("CARGO_PKG_VERSION"),
        status: status.into(),
        exit_code,
        error: partial.error.as_ref().map(ToString::to_string),
        config: cfg.clone(),
        results: partial.results,
        artifacts: partial.artifacts,
        timings: json!({ "elapsed_s": elapsed }),
    };
    manifest.artifacts.push("manifest.json".into());
    let written = serde_json::to_string_pretty(&manifest)
        .map_err(Error::from)
        .and_then(|text| fs::write(dir.join("manifest.json"), text).map_err(Error::from));
    if let Err(e) = written {
        manifest.exit_code = EXIT_NUMERICAL;
        manifest.status = "error".into();
        manifest.error = Some(format!("could not write manifest: {e}"));
    }
    RunOutcome { exit_code: manifest.exit_code, dir, manifest }
}

fn boundary_for(cfg: &RunConfig) -> Result<BoundaryData> {
    let g = &cfg.geometry;
    BoundaryData::from_fn(g.mx, g.mt, g.mode, |x, t| {
        let shape = g
            .shape_at(x, t)
            .ok_or_else(|| Error::Config(vec!["geometry.start and geometry.end must be the same shape kind".into()]))?;
        shape.sample(g.n, &g.reparam)
    })
}

fn write_field(field: &CurveField, dir: &Path, stride: usize) -> Result<Vec<String>> {
    fs::create_dir_all(dir.join("field"))?;
    let keep = |k: usize, m: usize| k % stride == 0 || k == m;
    let mut names = Vec::new();
    for i in (0..=field.mx()).filter(|&i| keep(i, field.mx())) {
        for j in (0..=field.mt()).filter(|&j| keep(j, field.mt())) {
            let name = format!("field/node_{i:03}_{j:03}.csv");
            write_curve_csv_file(field.get(i, j), dir.join(&name))?;
            names.push(name);
        }
    }
    Ok(names)
}

fn run_match(cfg: &RunConfig, dir: &Path) -> Result<Partial> {
    let boundary = boundary_for(cfg)?;
    let op = SobolevOperator::new(cfg.operator.a, cfg.geometry.n, cfg.operator.backend)?;
    let (field, report) = relax(&boundary, &op, &cfg.force, &cfg.solver)?;

    let mut artifacts = write_field(&field, dir, cfg.output.stride)?;
    write_rows(
        &dir.join("plotdata.csv"),
        &["iteration", "residual"],
        report.history.iter().enumerate().map(|(k, r)| [k.to_string(), s(*r)]),
    )?;
    artifacts.push("plotdata.csv".into());

    let mut results = json!({
        "converged": report.converged,
        "iterations": report.iterations,
        "residual": report.residual,
        "max_abs_r_h": report.max_abs_r_h,
        "max_abs_r_v": report.max_abs_r_v,
        "halvings": report.halvings,
        "krylov_iterations": report.krylov_iterations,
    });
    if !report.converged {
        let error = Some(Error::NonConvergence { iterations: report.iterations, residual: report.residual });
        return Ok(Partial { results, artifacts, error });
    }
    if let Some(phi) = cfg.geometry.equivariance {
        let moved = boundary.map_curves(|c| c.reparametrized(&phi))?;
        let (other, rep2) = relax(&moved, &op, &cfg.force, &cfg.solver)?;
        results["equivariance"] = json!({ "reparam": phi, "converged": rep2.converged, "residual": rep2.residual });
        if !rep2.converged {
            let error = Some(Error::NonConvergence { iterations: rep2.iterations, residual: rep2.residual });
            return Ok(Partial { results, artifacts, error });
        }
        let d = field
            .curves()
            .par_iter()
            .zip(other.curves())
            .map(|(a, b)| shape_distance(a, b))
            .collect::<Result<Vec<_>>>()?;
        results["equivariance"]["max_shape_distance"] = json!(d.iter().cloned().fold(0.0, f64::max));
    }
    Ok(Partial::ok(results, artifacts))
}

fn run_flow_cmd(cfg: &RunConfig, dir: &Path) -> Result<Partial> {
    let g = &cfg.geometry;
    let f = &cfg.flow;
    let curve = g.start.sample(g.n, &g.reparam)?;
    let state0 = FlowState::new(curve, vec![f.h0; g.n], vec![f.v0; g.n], 0.0)?;
    let traj = run_flow(state0, &cfg.force, &f.integration)?;

    export_trajectory(&traj, &f.integration, &cfg.force, dir.join("frames"), cfg.output.stride)?;
    let mut artifacts = vec!["frames/trajectory.json".to_string()];
    let last = traj.states.len() - 1;
    artifacts.extend(
        (0..traj.states.len())
            .filter(|i| i % cfg.output.stride == 0 || *i == last)
            .map(|i| format!("frames/frame_{i:05}.csv")),
    );

    let rows = traj
        .states
        .iter()
        .map(|st| {
            let fr = frenet(&st.curve, DerivBackend::Spectral)?;
            let kmax = fr.curvature.iter().fold(0.0f64, |m, k| m.max(k.abs()));
            let vmax = st.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            Ok([s(st.time), s(st.mean_radius()), s(kmax), s(st.mean_h()), s(vmax)])
        })
        .collect::<Result<Vec<_>>>()?;
    write_rows(&dir.join("plotdata.csv"), &["time", "mean_radius", "max_curvature", "mean_h", "max_abs_v"], rows)?;
    artifacts.push("plotdata.csv".into());

    let end = traj.last();
    let mut results = json!({
        "steps": last,
        "final_time": end.time,
        "mean_radius": end.mean_radius(),
        "mean_h": end.mean_h(),
        "max_abs_v": end.v.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        "stop_reason": traj.stop,
    });
    let circular = matches!(g.start, Shape::Circle { .. }) && f.v0 == 0.0;
    if let (Shape::Circle { r }, true) = (g.start, circular) {
        if cfg.force == Default::default() {
            if let Ok((ro, ho)) = circle_reduction_oracle(r, f.h0, end.time) {
                results["oracle"] = json!({
                    "radius": ro,
                    "h": ho,
                    "radius_error": (end.mean_radius() - ro).abs(),
                    "h_error": (end.mean_h() - ho).abs(),
                });
            }
        }
    }
    let error = traj.stop.clone().map(|reason| Error::SingularityStop { time: end.time, reason });
    Ok(Partial { results, artifacts, error })
}

fn hopf_inputs(cfg: &RunConfig, k: usize) -> Result<(SpherePath, VerticalProfile)> {
    let path = match cfg.hopf.path {
        PathSpec::GreatCircle => SpherePath::great_circle(k)?,
        PathSpec::Latitude { z } => SpherePath::latitude_circle(k, z)?,
    };
    let profile = match cfg.hopf.profile {
        ProfileSpec::Constant { c } => VerticalProfile::constant(k, c),
        ProfileSpec::VerticalOde { fv, sigma0 } => vertical_ode(|t| fv.eval(t), sigma0, k)?,
    };
    Ok((path, profile))
}

fn run_hopf(cfg: &RunConfig, dir: &Path) -> Result<Partial> {
    let k = cfg.hopf.k;
    let (path, profile) = hopf_inputs(cfg, k)?;
    let lift = horizontal_lift(&path, &profile, section(path.samples()[0])?)?;
    let report = HolonomyReport::new(lift.holonomy, k, cfg.hopf.profile.describe());
    report.write_json(dir.join("holonomy.json"))?;

    let stride = cfg.output.stride;
    write_rows(
        &dir.join("lift.csv"),
        &["m", "theta", "w", "x", "y", "z"],
        lift.path.iter().enumerate().filter(|(m, _)| m % stride == 0 || *m == k).map(|(m, q)| {
            [m.to_string(), s(std::f64::consts::TAU * m as f64 / k as f64), s(q.w), s(q.x), s(q.y), s(q.z)]
        }),
    )?;

    let mut ks: Vec<usize> = cfg.hopf.k_sweep.clone();
    ks.push(k);
    ks.sort_unstable();
    ks.dedup();
    let sweep = ks
        .iter()
        .map(|&kk| {
            let (p, v) = hopf_inputs(cfg, kk)?;
            let l = lift_unchecked(&p, &v, section(p.samples()[0])?)?;
            Ok([kk.to_string(), s(l.holonomy.phase), s(l.holonomy.closure_error), s(l.drift)])
        })
        .collect::<Result<Vec<_>>>()?;
    write_rows(&dir.join("plotdata.csv"), &["K", "phase", "closure_error", "projection_drift"], sweep)?;

    let results = json!({
        "phase": lift.holonomy.phase,
        "closure_error": lift.holonomy.closure_error,
        "K": k,
        "profile": cfg.hopf.profile.describe(),
        "profile_integral": profile.integral(),
        "projection_drift": lift.drift,
    });
    Ok(Partial::ok(results, vec!["holonomy.json".into(), "lift.csv".into(), "plotdata.csv".into()]))
}

fn run_sigma(cfg: &RunConfig, dir: &Path) -> Result<Partial> {
    let sc = &cfg.sigma;
    let field = match sc.field {
        FieldSpec::Exp { xi } => LieField::constant(sc.mx, sc.mt, xi, xi)?,
        FieldSpec::Constant { sigma_t, sigma_x } => LieField::constant(sc.mx, sc.mt, sigma_t, sigma_x)?,
    };
    let g0 = crate::hopf::UnitQuaternion::IDENTITY;
    let report = SigmaReport::compute(&field, g0)?;
    report.write_json(dir.join("sigma.json"))?;
    let mut artifacts = vec!["sigma.json".to_string()];

    let ep = crate::sigma::ep_residual(&field);
    let fl = crate::sigma::flatness_residual(&field);
    let stride = cfg.output.stride;
    let mut rows = Vec::new();
    for i in 1..sc.mx {
        for j in 1..sc.mt {
            if i % stride == 0 && j % stride == 0 {
                rows.push([i.to_string(), j.to_string(), s(ep.get(i, j).norm()), s(fl.get(i, j).norm())]);
            }
        }
    }
    write_rows(&dir.join("plotdata.csv"), &["i", "j", "ep_residual", "flatness_residual"], rows)?;
    artifacts.push("plotdata.csv".into());

    if report.path_order_gap.is_some() {
        let rec = reconstruct(&field, g0)?;
        let mut rows = Vec::new();
        for i in (0..=sc.mx).filter(|i| i % stride == 0 || *i == sc.mx) {
            for j in (0..=sc.mt).filter(|j| j % stride == 0 || *j == sc.mt) {
                let p = rec.projected(i, j);
                rows.push([i.to_string(), j.to_string(), s(p[0]), s(p[1]), s(p[2])]);
            }
        }
        write_rows(&dir.join("projected.csv"), &["i", "j", "px", "py", "pz"], rows)?;
        artifacts.push("projected.csv".into());
    }
    let results = serde_json::to_value(&report)?;
    Ok(Partial::ok(results, artifacts))
}

fn run_check(dir: &Path) -> Result<Partial> {
    let outcomes = verify::run_all();
    write_rows(
        &dir.join("checks.csv"),
        &["module", "check", "passed", "detail"],
        outcomes.iter().map(|o| [o.module.to_string(), o.name.to_string(), o.passed.to_string(), o.detail.clone()]),
    )?;
    let failed: Vec<String> =
        outcomes.iter().filter(|o| !o.passed).map(|o| format!("{}::{}: {}", o.module, o.name, o.detail)).collect();
    let results = json!({ "total": outcomes.len(), "failed": failed.len(), "failures": failed });
    Ok(Partial::ok(results, vec!["checks.csv".into()]))
}
