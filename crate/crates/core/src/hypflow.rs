//! Hyperbolic curvature flow
//!
//! ```text
//! c_t = h n + v t,   ∂t h = D_θ(v h) − κ(½h² − 1),   ∂t v = F^v
//! ```
//!
//! integrated as a first-order system in `(c, h, v)` with classical RK4.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curvegeo::{
    arclength_derivative, arclength_inverse, frenet, write_curve_csv_file, DerivBackend, DiscreteCurve, Vec2,
};
use crate::error::{check_len, Error, Result};
use crate::spectral::TrigInterpolant;
use crate::unreduction::ForceProfile;

/// Curvature beyond which the flow is considered collapsed.
pub const KAPPA_MAX: f64 = 1e3;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub curve: DiscreteCurve,
    /// Normal speed.
    pub h: Vec<f64>,
    /// Tangential speed.
    pub v: Vec<f64>,
    pub time: f64,
}

impl FlowState {
    pub fn new(curve: DiscreteCurve, h: Vec<f64>, v: Vec<f64>, time: f64) -> Result<Self> {
        check_len(curve.len(), h.len())?;
        check_len(curve.len(), v.len())?;
        Ok(Self { curve, h, v, time })
    }

    /// State at rest: `h = v = 0`.
    pub fn at_rest(curve: DiscreteCurve) -> Self {
        let n = curve.len();
        Self { curve, h: vec![0.0; n], v: vec![0.0; n], time: 0.0 }
    }

    /// Mean distance of the samples from the centroid.
    pub fn mean_radius(&self) -> f64 {
        let c = self.curve.centroid();
        self.curve.points().iter().map(|p| (*p - c).norm()).sum::<f64>() / self.curve.len() as f64
    }

    pub fn mean_h(&self) -> f64 {
        self.h.iter().sum::<f64>() / self.h.len() as f64
    }

    /// Same shape and speeds sampled at the arc-length-uniform parameters.
    pub fn resampled(&self) -> Result<Self> {
        let n = self.curve.len();
        let (thetas, _) = arclength_inverse(&self.curve, n)?;
        let shape = self.curve.interpolant();
        let (hi, vi) = (TrigInterpolant::new(&self.h), TrigInterpolant::new(&self.v));
        let curve = DiscreteCurve::new(thetas.iter().map(|&t| shape.eval(t)).collect())?;
        Ok(Self {
            curve,
            h: thetas.iter().map(|&t| hi.eval(t)).collect(),
            v: thetas.iter().map(|&t| hi_or(&vi, t, &self.v)).collect(),
            time: self.time,
        })
    }
}

// keep v ≡ 0 exact through resampling
fn hi_or(interp: &TrigInterpolant, t: f64, v: &[f64]) -> f64 {
    if v.iter().all(|x| *x == 0.0) {
        0.0
    } else {
        interp.eval(t)
    }
}

/// Time derivative of a flow state.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRhs {
    pub dc: Vec<Vec2>,
    pub dh: Vec<f64>,
    pub dv: Vec<f64>,
}

/// `(h n + v t, D_θ(vh) − κ(½h² − 1), F^v(t))`.
pub fn flow_rhs(state: &FlowState, force: &ForceProfile) -> Result<FlowRhs> {
    let fr = frenet(&state.curve, DerivBackend::Spectral)?;
    let n = state.curve.len();
    let vh: Vec<f64> = state.v.iter().zip(&state.h).map(|(a, b)| a * b).collect();
    let d_vh = arclength_derivative(&fr, &vh)?;
    let dc = (0..n).map(|j| state.h[j] * fr.normal[j] + state.v[j] * fr.tangent[j]).collect();
    let dh = (0..n)
        .map(|j| d_vh[j] - fr.curvature[j] * (0.5 * state.h[j] * state.h[j] - 1.0))
        .collect();
    Ok(FlowRhs { dc, dh, dv: force.sample(n) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Resample by arc length every this many steps; 0 disables.
    pub resample_every: usize,
    pub kappa_max: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_end: 0.5, resample_every: 0, kappa_max: KAPPA_MAX }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            errs.push(format!("flow.dt must be > 0, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            errs.push(format!("flow.t_end must be > 0, got {}", self.t_end));
        }
        if !(self.kappa_max > 0.0) {
            errs.push(format!("flow.kappa_max must be > 0, got {}", self.kappa_max));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

/// States at `t = 0, dt, …` up to `T` or the last valid time before a stop.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    /// Why integration ended early, if it did.
    pub stop: Option<String>,
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn advance(s: &FlowState, k: &FlowRhs, a: f64) -> Result<FlowState> {
    let n = s.curve.len();
    let pts = s.curve.points();
    Ok(FlowState {
        curve: DiscreteCurve::new((0..n).map(|j| pts[j] + a * k.dc[j]).collect())?,
        h: (0..n).map(|j| s.h[j] + a * k.dh[j]).collect(),
        v: (0..n).map(|j| s.v[j] + a * k.dv[j]).collect(),
        time: s.time + a,
    })
}

fn check_curvature(s: &FlowState, kappa_max: f64) -> Result<()> {
    let fr = frenet(&s.curve, DerivBackend::Spectral)?;
    let worst = fr.curvature.iter().fold(0.0, |m: f64, k| m.max(k.abs()));
    if !(worst <= kappa_max) {
        return Err(Error::SingularityStop {
            time: s.time,
            reason: format!("max |κ| = {worst:e} exceeds {kappa_max:e}"),
        });
    }
    Ok(())
}

/// One classical RK4 step.
pub fn rk4_step(s: &FlowState, force: &ForceProfile, dt: f64) -> Result<FlowState> {
    let n = s.curve.len();
    let k1 = flow_rhs(s, force)?;
    let k2 = flow_rhs(&advance(s, &k1, 0.5 * dt)?, force)?;
    let k3 = flow_rhs(&advance(s, &k2, 0.5 * dt)?, force)?;
    let k4 = flow_rhs(&advance(s, &k3, dt)?, force)?;
    let w = dt / 6.0;
    let pts = s.curve.points();
    let comb = |a: f64, b: f64, c: f64, d: f64| a + 2.0 * b + 2.0 * c + d;
    Ok(FlowState {
        curve: DiscreteCurve::new(
            (0..n)
                .map(|j| {
                    let dc = Vec2::new(
                        comb(k1.dc[j].x, k2.dc[j].x, k3.dc[j].x, k4.dc[j].x),
                        comb(k1.dc[j].y, k2.dc[j].y, k3.dc[j].y, k4.dc[j].y),
                    );
                    pts[j] + w * dc
                })
                .collect(),
        )?,
        h: (0..n).map(|j| s.h[j] + w * comb(k1.dh[j], k2.dh[j], k3.dh[j], k4.dh[j])).collect(),
        v: (0..n).map(|j| s.v[j] + w * comb(k1.dv[j], k2.dv[j], k3.dv[j], k4.dv[j])).collect(),
        time: s.time + dt,
    })
}

/// Integrates up to `T`, keeping the states gathered so far when the flow
/// degenerates.
pub fn run_flow(state0: FlowState, force: &ForceProfile, cfg: &FlowConfig) -> Result<Trajectory> {
    cfg.validate().map_err(Error::Config)?;
    let steps = cfg.steps();
    let mut states = vec![state0];
    let mut stop = None;
    for step in 1..=steps {
        let prev = states.last().expect("non-empty");
        let next = rk4_step(prev, force, cfg.dt)
            .and_then(|mut s| {
                // pin the clock to the grid instead of accumulating dt
                s.time = step as f64 * cfg.dt;
                if cfg.resample_every > 0 && step % cfg.resample_every == 0 {
                    s = s.resampled()?;
                }
                check_curvature(&s, cfg.kappa_max)?;
                Ok(s)
            });
        match next {
            Ok(s) => states.push(s),
            Err(Error::SingularityStop { reason, .. }) => {
                stop = Some(reason);
                break;
            }
            Err(Error::Regularity { index, speed, floor }) => {
                stop = Some(format!("curve lost regularity at sample {index} (speed {speed:e} < {floor:e})"));
                break;
            }
            Err(Error::InvalidCurve(msg)) => {
                stop = Some(format!("curve became invalid: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trajectory { states, stop })
}

/// As [`run_flow`], failing with `SingularityStop` at the last valid time
/// when the flow collapses before `T`.
pub fn integrate(state0: FlowState, force: &ForceProfile, cfg: &FlowConfig) -> Result<Trajectory> {
    let traj = run_flow(state0, force, cfg)?;
    match &traj.stop {
        Some(reason) => Err(Error::SingularityStop { time: traj.last().time, reason: reason.clone() }),
        None => Ok(traj),
    }
}

/// Dormand–Prince 5(4) with the 5th-order solution propagated.
fn dopri45(mut y: [f64; 2], t_end: f64, tol: f64, f: impl Fn([f64; 2]) -> [f64; 2]) -> Result<[f64; 2]> {
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut t = 0.0;
    let mut h = (t_end * 1e-3).max(1e-8);
    while t < t_end {
        h = h.min(t_end - t);
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (r, a) in A[s].iter().enumerate().take(s) {
                ys[0] += h * a * k[r][0];
                ys[1] += h * a * k[r][1];
            }
            k[s] = f(ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for c in 0..2 {
            let (mut s5, mut s4) = (0.0, 0.0);
            for s in 0..7 {
                s5 += B5[s] * k[s][c];
                s4 += B4[s] * k[s][c];
            }
            y5[c] += h * s5;
            err = err.max((h * (s5 - s4)).abs() / (1.0 + y[c].abs()));
        }
        if !y5.iter().all(|x| x.is_finite()) || err > tol {
            h *= if err.is_finite() { (0.9 * (tol / err).powf(0.2)).clamp(0.1, 0.5) } else { 0.1 };
            if h < 1e-14 {
                return Err(Error::SingularityStop { time: t, reason: "step size underflow".into() });
            }
            continue;
        }
        t += h;
        y = y5;
        if y[0] <= 0.0 {
            return Err(Error::SingularityStop { time: t, reason: format!("radius reached {}", y[0]) });
        }
        let grow = if err == 0.0 { 5.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0) };
        h *= grow;
    }
    Ok(y)
}

/// `Ṙ = −h`, `ḣ = (1/R)(1 − ½h²)`: the flow restricted to centred circles
/// (the normal points inward, so positive `h` shrinks the circle).
pub fn circle_reduction_oracle(r0: f64, h0: f64, t_end: f64) -> Result<(f64, f64)> {
    if !(r0 > 0.0) {
        return Err(Error::Config(vec![format!("R0 must be > 0, got {r0}")]));
    }
    if t_end == 0.0 {
        return Ok((r0, h0));
    }
    let [r, h] = dopri45([r0, h0], t_end, 1e-13, |[r, h]| [-h, (1.0 - 0.5 * h * h) / r])?;
    Ok((r, h))
}

/// Manifest written next to exported trajectory frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub dt: f64,
    pub t_end: f64,
    pub force: ForceProfile,
    pub stop_reason: Option<String>,
    pub frames: Vec<FrameEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub index: usize,
    pub time: f64,
    pub file: String,
    pub mean_radius: f64,
    pub mean_h: f64,
    pub max_abs_v: f64,
}

/// Writes every `stride`-th state (and the last one) as `frame_XXXXX.csv`
/// plus `trajectory.json`. Returns the manifest path.
pub fn export_trajectory(
    traj: &Trajectory,
    cfg: &FlowConfig,
    force: &ForceProfile,
    dir: impl AsRef<Path>,
    stride: usize,
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let stride = stride.max(1);
    let last = traj.states.len() - 1;
    let mut frames = Vec::new();
    for (i, s) in traj.states.iter().enumerate() {
        if i % stride != 0 && i != last {
            continue;
        }
        let file = format!("frame_{i:05}.csv");
        write_curve_csv_file(&s.curve, dir.join(&file))?;
        frames.push(FrameEntry {
            index: i,
            time: s.time,
            file,
            mean_radius: s.mean_radius(),
            mean_h: s.mean_h(),
            max_abs_v: s.v.iter().fold(0.0, |m: f64, x| m.max(x.abs())),
        });
    }
    let manifest = TrajectoryManifest {
        dt: cfg.dt,
        t_end: cfg.t_end,
        force: *force,
        stop_reason: traj.stop.clone(),
        frames,
    };
    let path = dir.join("trajectory.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}
