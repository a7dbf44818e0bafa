//! The operator P = 1 − A² D_θ² on Fourier modes, and the induced metric.

use unred::curvegeo::{frenet, DerivBackend, Reparam, Shape, Vec2};
use unred::sobolev::SobolevOperator;

fn main() -> unred::Result<()> {
    let (n, a) = (64, 0.3);
    let op = SobolevOperator::spectral(a, n)?;
    let th: Vec<f64> = (0..n).map(|j| std::f64::consts::TAU * j as f64 / n as f64).collect();

    println!("{:>3} {:>12} {:>12} {:>12}", "k", "symbol", "measured", "round trip");
    for k in [1, 2, 4, 8, 16] {
        let f: Vec<f64> = th.iter().map(|t| (k as f64 * t).sin()).collect();
        let pf = op.apply(&f)?;
        let j = n / (4 * k);
        let back = op.solve(&pf)?;
        let rt = f.iter().zip(&back).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        println!("{k:>3} {:>12.6} {:>12.6} {rt:>12.2e}", op.symbol(k as f64), pf[j] / f[j]);
    }

    let c = Shape::Ellipse { a: 1.5, b: 1.0 }.sample(n, &Reparam::Identity)?;
    let fr = frenet(&c, DerivBackend::Spectral)?;
    let u: Vec<Vec2> = fr.normal.clone();
    let w: Vec<Vec2> = th.iter().map(|t| Vec2::new(t.cos(), 0.5 * (2.0 * t).sin())).collect();
    println!("G(n, n) = {:.6}", op.metric_pair(&fr, &u, &u)?);
    println!("G(n, w) = {:.6}  G(w, n) = {:.6}  (P is self-adjoint in dθ, not dl)", op.metric_pair(&fr, &u, &w)?, op.metric_pair(&fr, &w, &u)?);
    Ok(())
}
