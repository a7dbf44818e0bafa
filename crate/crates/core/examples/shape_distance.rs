//! Shape distance is blind to reparametrization and rotation of θ but sees
//! changes of geometry.

use unred::curvegeo::{shape_distance, Reparam, Shape};

fn main() -> unred::Result<()> {
    let base = Shape::Ellipse { a: 1.5, b: 1.0 };
    let c = base.sample(128, &Reparam::Identity)?;
    let cases = [
        ("same curve", base.sample(128, &Reparam::Identity)?),
        ("θ + 0.3 sin θ", base.sample(128, &Reparam::Sine { amplitude: 0.3 })?),
        ("shift by 0.7", base.sample(128, &Reparam::Shift { offset: 0.7 })?),
        ("N = 96, θ − 0.5 sin θ", base.sample(96, &Reparam::Sine { amplitude: -0.5 })?),
        ("a = 1.55", Shape::Ellipse { a: 1.55, b: 1.0 }.sample(128, &Reparam::Identity)?),
        ("circle r = 1.25", Shape::Circle { r: 1.25 }.sample(128, &Reparam::Identity)?),
    ];
    for (name, other) in cases {
        println!("{name:<24} {:.3e}", shape_distance(&c, &other)?);
    }
    Ok(())
}
