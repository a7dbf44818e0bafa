//! Euler–Poincaré and flatness residuals of su(2)-valued fields, and the
//! reconstruction of a flat field projected to the sphere.

use unred::hopf::UnitQuaternion;
use unred::sigma::{ep_residual, flatness_residual, geodesic_residual, reconstruct, LieField, LieValue};

fn main() -> unred::Result<()> {
    let (alpha, beta) = (0.7, -1.3);
    let f = LieField::constant(8, 8, alpha * LieValue::E3 + beta * LieValue::E1, LieValue::ZERO)?;
    let ep = ep_residual(&f);
    println!("bracket case: EP residual {:?}, expected 2αβ e₂ = {:.3}", ep.get(4, 4), 2.0 * alpha * beta);
    println!("              flatness residual max {:.3e}", flatness_residual(&f).max_norm());

    let xi = LieValue::new(0.6, -0.8, 0.0);
    println!("{:>4} {:>14} {:>14}", "M", "path-order gap", "geodesic res.");
    for m in [8, 16, 32, 64] {
        let rec = reconstruct(&LieField::constant(m, m, xi, xi)?, UnitQuaternion::IDENTITY)?;
        println!("{m:>4} {:>14.3e} {:>14.3e}", rec.path_order_gap, geodesic_residual(&rec));
    }

    let twisted = LieField::from_fn(8, 8, |x, t| (LieValue::new(t, 0.0, 0.0), LieValue::new(0.0, x, 0.0)))?;
    match reconstruct(&twisted, UnitQuaternion::IDENTITY) {
        Ok(rec) => println!("non-flat field reconstructed with gap {:.3e}", rec.path_order_gap),
        Err(e) => println!("non-flat field rejected: {e}"),
    }
    Ok(())
}
