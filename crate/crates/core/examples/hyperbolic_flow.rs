//! Hyperbolic flow of a circle released from rest, against the ODE reduction.

use std::time::Instant;

use unred::curvegeo::{Reparam, Shape};
use unred::hypflow::{circle_reduction_oracle, integrate, FlowConfig, FlowState};
use unred::unreduction::ForceProfile;

fn main() -> unred::Result<()> {
    let n = 256;
    let cfg = FlowConfig { dt: 1e-3, t_end: 0.5, ..FlowConfig::default() };
    let start = Instant::now();
    let state0 = FlowState::at_rest(Shape::Circle { r: 1.0 }.sample(n, &Reparam::Identity)?);
    let traj = integrate(state0, &ForceProfile::Zero, &cfg)?;
    let elapsed = start.elapsed();

    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "t", "R pde", "R ode", "h pde", "h ode");
    for s in traj.states.iter().step_by(100) {
        let (r, h) = circle_reduction_oracle(1.0, 0.0, s.time)?;
        println!("{:6.3} {:14.10} {:14.10} {:14.10} {:14.10}", s.time, s.mean_radius(), r, s.mean_h(), h);
    }
    let last = traj.last();
    let (r, h) = circle_reduction_oracle(1.0, 0.0, last.time)?;
    let v_max = last.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!("final |ΔR| = {:.2e}, |Δh| = {:.2e}, max|v| = {v_max}", (last.mean_radius() - r).abs(), (last.mean_h() - h).abs());
    println!("{} RK4 steps in {:.2?}", traj.states.len() - 1, elapsed);
    Ok(())
}
