//! Holonomy of the Hopf connection around a great circle, its cancellation
//! by a vertical profile, and the convergence of the lift in K.

use std::f64::consts::PI;
use std::time::Instant;

use unred::hopf::{holonomy, lift_unchecked, section, vertical_ode, SpherePath, VerticalProfile};

fn main() -> unred::Result<()> {
    let k = 10_000;
    let path = SpherePath::great_circle(k)?;

    let start = Instant::now();
    let h = holonomy(&path, &VerticalProfile::constant(k, 0.0))?;
    println!("ς = 0:             phase {:.12} (π = {PI:.12}), {:.2?}", h.phase, start.elapsed());

    let sigma = vertical_ode(|t| t.cos(), -0.5, k)?;
    let h = holonomy(&path, &sigma)?;
    println!("ς = sin θ − 1/2:   phase {:.2e}, closure {:.2e}", h.phase, h.closure_error);

    let cap = SpherePath::latitude_circle(k, 0.5)?;
    let h = holonomy(&cap, &VerticalProfile::constant(k, 0.0))?;
    println!("latitude z = 0.5:  phase {:.12}", h.phase);

    println!("{:>6} {:>12} {:>12}", "K", "phase − π", "drift");
    for k in [16, 32, 64, 128, 256, 512] {
        let p = SpherePath::great_circle(k)?;
        let l = lift_unchecked(&p, &VerticalProfile::constant(k, 0.0), section(p.samples()[0])?)?;
        println!("{k:>6} {:>12.3e} {:>12.3e}", l.holonomy.phase_error(PI), l.drift);
    }
    Ok(())
}
