//! Un-reduced matching of a growing circle to an ellipse, then the same
//! problem with reparametrized boundary data.

use std::time::Instant;

use unred::curvegeo::{shape_distance, Reparam, Shape};
use unred::sobolev::SobolevOperator;
use unred::unreduction::{solve_bvp, BoundaryData, BoundaryMode, ForceProfile, SolverConfig};

fn main() -> unred::Result<()> {
    let (n, m) = (48, 6);
    let shape = |x: f64, t: f64| Shape::Ellipse { a: (1.2 + 0.3 * t) * (1.0 + 0.2 * x), b: 1.0 + 0.2 * t };
    let op = SobolevOperator::spectral(0.1, n)?;
    let force = ForceProfile::Sinusoidal { amplitude: 0.1, frequency: 2 };
    let cfg = SolverConfig::default();

    let b = BoundaryData::from_fn(m, m, BoundaryMode::Dirichlet, |x, t| shape(x, t).sample(n, &Reparam::Identity))?;
    let start = Instant::now();
    let (field, rep) = solve_bvp(&b, &op, &force, &cfg)?;
    println!(
        "converged in {} Newton steps ({} GMRES), residual {:.2e}, max|R_v| {:.2e}, {:.2?}",
        rep.iterations,
        rep.krylov_iterations,
        rep.residual,
        rep.max_abs_r_v,
        start.elapsed()
    );
    for r in &rep.history {
        println!("  {r:.3e}");
    }

    let phi = Reparam::Sine { amplitude: 0.3 };
    let moved = b.map_curves(|c| c.reparametrized(&phi))?;
    let start = Instant::now();
    let (other, rep2) = solve_bvp(&moved, &op, &force, &cfg)?;
    println!("reparametrized: {} Newton steps ({} GMRES), {:.2?}", rep2.iterations, rep2.krylov_iterations, start.elapsed());
    let worst = field
        .curves()
        .iter()
        .zip(other.curves())
        .map(|(p, q)| shape_distance(p, q))
        .collect::<unred::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("largest shape distance after θ ↦ θ + 0.3 sin θ: {worst:.3e}");
    let mid = field.get(m / 2, m / 2);
    println!("centre node: area {:.5}, perimeter {:.5}", mid.signed_area(), mid.perimeter());
    Ok(())
}
