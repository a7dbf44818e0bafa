use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::{energy, Energy};
use super::field::{BoundaryData, BoundaryMode, CurveField};
use super::jets::{jet_decompose, JetDecomposition};
use super::krylov::gmres;
use super::newton::{Layout, Preconditioner};
use super::residual::{residual_norm, residuals, ForceProfile};
use crate::curvegeo::{shape_distance, DiscreteCurve, Reparam};
use crate::error::{Error, Result};
use crate::sobolev::SobolevOperator;

/// Iteration used by the boundary-value solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Newton steps in the frame components, each solved by GMRES with a
    /// mode-wise frozen-coefficient preconditioner.
    #[default]
    NewtonKrylov,
    /// Explicit pseudo-time relaxation `c ← c + τ(P⁻¹R_h n + P⁻¹R_v t)`.
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub scheme: Scheme,
    /// Pseudo-time step of the explicit scheme; the Newton scheme starts
    /// every line search from a full step.
    pub tau: f64,
    pub tol_res: f64,
    pub max_iter: usize,
    /// Step halvings allowed over the whole run before giving up.
    pub max_halvings: u32,
    /// Record the energy after every accepted step.
    pub track_energy: bool,
    /// Relative tolerance of each inner GMRES solve.
    pub krylov_tol: f64,
    /// Inner iterations allowed per Newton step.
    pub krylov_max_iter: usize,
    /// Krylov basis size before GMRES restarts.
    pub krylov_restart: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::NewtonKrylov,
            tau: 9e-4,
            tol_res: 1e-8,
            max_iter: 100_000,
            max_halvings: 20,
            track_energy: false,
            krylov_tol: 1e-2,
            krylov_max_iter: 400,
            krylov_restart: 150,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            errs.push(format!("solver.tau must be > 0, got {}", self.tau));
        }
        if !(self.tol_res > 0.0 && self.tol_res.is_finite()) {
            errs.push(format!("solver.tol_res must be > 0, got {}", self.tol_res));
        }
        if self.max_iter == 0 {
            errs.push("solver.max_iter must be positive".into());
        }
        if !(self.krylov_tol > 0.0 && self.krylov_tol < 1.0) {
            errs.push(format!("solver.krylov_tol must lie in (0, 1), got {}", self.krylov_tol));
        }
        if self.krylov_max_iter == 0 {
            errs.push("solver.krylov_max_iter must be positive".into());
        }
        if self.krylov_restart == 0 {
            errs.push("solver.krylov_restart must be positive".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }
}

/// Outcome of a relaxation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    /// Largest per-node RMS of `(R_h, R_v)`.
    pub residual: f64,
    pub max_abs_r_h: f64,
    pub max_abs_r_v: f64,
    /// Last accepted pseudo-time step (explicit) or step fraction (Newton).
    pub final_tau: f64,
    pub halvings: u32,
    /// Inner GMRES iterations summed over all Newton steps.
    pub krylov_iterations: usize,
    /// Residual before the first step and after every accepted step.
    pub history: Vec<f64>,
    /// Energies alongside `history` when tracking is enabled.
    pub energy_history: Vec<Energy>,
}

struct Snapshot {
    field: CurveField,
    residual: f64,
    r_h: super::field::NodeArray,
    r_v: super::field::NodeArray,
    decomp: JetDecomposition,
    energy: Option<Energy>,
}

fn evaluate(field: CurveField, op: &SobolevOperator, force: &ForceProfile, track: bool) -> Result<Snapshot> {
    let decomp = jet_decompose(&field, op)?;
    let (r_h, r_v) = residuals(&field, &decomp, op, force)?;
    let residual = residual_norm(&r_h, &r_v);
    let energy = if track { Some(energy(&field, &decomp, op)?) } else { None };
    Ok(Snapshot { field, residual, r_h, r_v, decomp, energy })
}

/// One explicit step `c ← c + τ (P⁻¹R_h n + P⁻¹R_v t)` at every moving node.
fn step(snap: &Snapshot, op: &SobolevOperator, tau: f64) -> Result<CurveField> {
    let field = &snap.field;
    let interior = field.interior_nodes();
    let moved: Vec<DiscreteCurve> = interior
        .par_iter()
        .map(|&(i, j)| {
            let k = field.index(i, j);
            let frame = &snap.decomp.frames[k];
            let dh = op.solve(snap.r_h.node(i, j))?;
            let dv = op.solve(snap.r_v.node(i, j))?;
            let pts = field.get(i, j).points();
            let new_pts = (0..pts.len())
                .map(|m| pts[m] + tau * (dh[m] * frame.normal[m] + dv[m] * frame.tangent[m]))
                .collect();
            DiscreteCurve::new(new_pts)
        })
        .collect::<Result<_>>()?;
    let mut next = field.clone();
    for (&(i, j), c) in interior.iter().zip(moved) {
        next.set(i, j, c);
    }
    if field.mode() == BoundaryMode::PeriodicX {
        for j in 0..=field.mt() {
            let c = next.get(0, j).clone();
            next.set(field.mx(), j, c);
        }
    }
    Ok(next)
}

/// Iterates from the blended initial guess with the configured scheme.
/// Returns the last field and a report whether or not the tolerance was met.
pub fn relax(
    boundary: &BoundaryData,
    op: &SobolevOperator,
    force: &ForceProfile,
    cfg: &SolverConfig,
) -> Result<(CurveField, SolveReport)> {
    cfg.validate().map_err(Error::Config)?;
    let init = boundary.initial_field()?;
    relax_from(init, op, force, cfg)
}

/// As [`relax`], starting from a given field.
pub fn relax_from(
    init: CurveField,
    op: &SobolevOperator,
    force: &ForceProfile,
    cfg: &SolverConfig,
) -> Result<(CurveField, SolveReport)> {
    cfg.validate().map_err(Error::Config)?;
    match cfg.scheme {
        Scheme::Explicit => explicit(init, op, force, cfg),
        Scheme::NewtonKrylov => newton(init, op, force, cfg),
    }
}

fn report(snap: &Snapshot, cfg: &SolverConfig, iterations: usize, tau: f64, halvings: u32) -> SolveReport {
    SolveReport {
        converged: snap.residual <= cfg.tol_res,
        iterations,
        residual: snap.residual,
        max_abs_r_h: snap.r_h.max_abs(),
        max_abs_r_v: snap.r_v.max_abs(),
        final_tau: tau,
        halvings,
        krylov_iterations: 0,
        history: Vec::new(),
        energy_history: Vec::new(),
    }
}

fn explicit(
    init: CurveField,
    op: &SobolevOperator,
    force: &ForceProfile,
    cfg: &SolverConfig,
) -> Result<(CurveField, SolveReport)> {
    let mut snap = evaluate(init, op, force, cfg.track_energy)?;
    let mut tau = cfg.tau;
    let mut halvings = 0u32;
    let mut iterations = 0usize;
    let mut history = vec![snap.residual];
    let mut energy_history: Vec<Energy> = snap.energy.into_iter().collect();

    while snap.residual > cfg.tol_res && iterations < cfg.max_iter {
        let trial = step(&snap, op, tau).and_then(|f| evaluate(f, op, force, cfg.track_energy));
        match trial {
            Ok(next) if next.residual <= snap.residual => {
                snap = next;
                iterations += 1;
                history.push(snap.residual);
                energy_history.extend(snap.energy);
            }
            _ => {
                halvings += 1;
                tau *= 0.5;
                if halvings > cfg.max_halvings {
                    break;
                }
            }
        }
    }

    let report = SolveReport { history, energy_history, ..report(&snap, cfg, iterations, tau, halvings) };
    Ok((snap.field, report))
}

fn newton(
    init: CurveField,
    op: &SobolevOperator,
    force: &ForceProfile,
    cfg: &SolverConfig,
) -> Result<(CurveField, SolveReport)> {
    let layout = Layout::new(&init);
    let mut snap = evaluate(init, op, force, cfg.track_energy)?;
    let mut history = vec![snap.residual];
    let mut energy_history: Vec<Energy> = snap.energy.into_iter().collect();
    let (mut iterations, mut halvings, mut krylov_iterations) = (0usize, 0u32, 0usize);
    let mut step = 1.0;
    let mut precond: Option<Preconditioner> = None;

    'outer: while snap.residual > cfg.tol_res && iterations < cfg.max_iter {
        if precond.is_none() {
            precond = Some(Preconditioner::build(&layout, &snap.field, &snap.decomp, op)?);
        }
        let pc = precond.as_ref().expect("built above");
        let base = layout.flatten(&snap.r_h, &snap.r_v);
        let rhs: Vec<f64> = base.iter().map(|r| -r).collect();
        let jvp = |d: &[f64]| -> Result<Vec<f64>> {
            let dn = d.iter().fold(0.0, |m: f64, a| m.max(a.abs()));
            if dn == 0.0 {
                return Ok(vec![0.0; d.len()]);
            }
            let eps = 1e-6 / dn;
            let moved = layout.displace(&snap.field, &snap.decomp.frames, d, eps)?;
            let dec = jet_decompose(&moved, op)?;
            let (rh, rv) = residuals(&moved, &dec, op, force)?;
            Ok(layout.flatten(&rh, &rv).iter().zip(&base).map(|(a, b)| (a - b) / eps).collect())
        };
        let sol = gmres(jvp, |v| pc.apply(v), &rhs, cfg.krylov_tol, cfg.krylov_restart, cfg.krylov_max_iter)?;
        krylov_iterations += sol.iterations;

        step = 1.0;
        let next = loop {
            let trial = layout
                .displace(&snap.field, &snap.decomp.frames, &sol.x, step)
                .and_then(|f| evaluate(f, op, force, cfg.track_energy));
            match trial {
                Ok(t) if t.residual < snap.residual => break t,
                _ => {
                    halvings += 1;
                    step *= 0.5;
                    if halvings > cfg.max_halvings {
                        break 'outer;
                    }
                }
            }
        };
        // a poor contraction means the frozen coefficients have gone stale
        if next.residual > 0.25 * snap.residual {
            precond = None;
        }
        snap = next;
        iterations += 1;
        history.push(snap.residual);
        energy_history.extend(snap.energy);
    }

    let report = SolveReport {
        krylov_iterations,
        history,
        energy_history,
        ..report(&snap, cfg, iterations, step, halvings)
    };
    Ok((snap.field, report))
}

/// Solves the boundary-value problem, failing with `NonConvergence` when the
/// tolerance is not reached.
pub fn solve_bvp(
    boundary: &BoundaryData,
    op: &SobolevOperator,
    force: &ForceProfile,
    cfg: &SolverConfig,
) -> Result<(CurveField, SolveReport)> {
    let (field, report) = relax(boundary, op, force, cfg)?;
    if !report.converged {
        return Err(Error::NonConvergence { iterations: report.iterations, residual: report.residual });
    }
    Ok((field, report))
}

/// Solves the problem with the original and the `φ`-reparametrized boundary
/// data and returns the largest node-wise shape distance between the two
/// solutions.
pub fn equivariance_check(
    boundary: &BoundaryData,
    phi: &Reparam,
    op: &SobolevOperator,
    force: &ForceProfile,
    cfg: &SolverConfig,
) -> Result<f64> {
    let (a, _) = solve_bvp(boundary, op, force, cfg)?;
    let moved = boundary.map_curves(|c| c.reparametrized(phi))?;
    let (b, _) = solve_bvp(&moved, op, force, cfg)?;
    let d: Vec<f64> = a
        .curves()
        .par_iter()
        .zip(b.curves())
        .map(|(p, q)| shape_distance(p, q))
        .collect::<Result<_>>()?;
    Ok(d.into_iter().fold(0.0, f64::max))
}
