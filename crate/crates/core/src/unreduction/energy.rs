use serde::{Deserialize, Serialize};

use super::field::CurveField;
use super::jets::JetDecomposition;
use crate::error::Result;
use crate::sobolev::SobolevOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub total: f64,
    pub horizontal: f64,
    pub vertical: f64,
}

/// Trapezoidal weight of grid index `i` out of `m` cells.
fn trap(i: usize, m: usize) -> f64 {
    if i == 0 || i == m {
        0.5
    } else {
        1.0
    }
}

/// `E_h = ∫∫ ½∮(h_t P h_t + h_x P h_x) dl`, likewise `E_v` with the
/// tangential parts, by the trapezoidal rule over the rectangle.
pub fn energy(field: &CurveField, decomp: &JetDecomposition, op: &SobolevOperator) -> Result<Energy> {
    let (mx, mt) = (field.mx(), field.mt());
    let cell = field.dx() * field.dt();
    let mut eh = 0.0;
    let mut ev = 0.0;
    for i in 0..=mx {
        for j in 0..=mt {
            let w = trap(i, mx) * trap(j, mt) * cell;
            let fr = decomp.frame(field, i, j);
            let pair = |f: &[f64]| op.scalar_pair(fr, f, f);
            eh += w * 0.5 * (pair(decomp.h_t.node(i, j))? + pair(decomp.h_x.node(i, j))?);
            ev += w * 0.5 * (pair(decomp.v_t.node(i, j))? + pair(decomp.v_x.node(i, j))?);
        }
    }
    Ok(Energy { total: eh + ev, horizontal: eh, vertical: ev })
}
