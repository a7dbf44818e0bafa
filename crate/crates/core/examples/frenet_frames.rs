//! Frenet frames of the built-in shapes with both derivative backends.

use std::f64::consts::TAU;

use unred::curvegeo::{frenet, DerivBackend, Reparam, Shape};

fn main() -> unred::Result<()> {
    let shapes = [Shape::Circle { r: 2.0 }, Shape::Ellipse { a: 1.6, b: 0.8 }, Shape::RoundedSquare { r: 1.0 }];
    println!("{:<40} {:>5} {:>12} {:>12} {:>12}", "shape", "N", "spectral", "central", "∮κdl − 2π");
    for shape in shapes {
        for n in [32, 64, 128] {
            let c = shape.sample(n, &Reparam::Identity)?;
            let err = |b| -> unred::Result<f64> {
                let fr = frenet(&c, b)?;
                Ok((0..n)
                    .map(|j| (fr.curvature[j] - shape.curvature(TAU * j as f64 / n as f64)).abs())
                    .fold(0.0, f64::max))
            };
            let spec = frenet(&c, DerivBackend::Spectral)?;
            println!(
                "{:<40} {n:>5} {:>12.3e} {:>12.3e} {:>12.3e}",
                format!("{shape:?}"),
                err(DerivBackend::Spectral)?,
                err(DerivBackend::CentralDifference)?,
                spec.total_curvature() - TAU
            );
        }
    }
    Ok(())
}
