//! Spatiotemporal curve matching on `[0,1]²` through the un-reduced field
//! equations
//!
//! ```text
//! ∂x P h_x + ∂t P h_t = D_θ(h_x P v_x + h_t P v_t) − κ H
//! ∂x P v_x + ∂t P v_t = F^v
//! ```
//!
//! with `c_• = v_• t + h_• n` and `H = ½(h_x P h_x + h_t P h_t)`. The
//! boundary-value problem is solved by a Newton–Krylov iteration on the
//! frame components of the interior curves, or by explicit pseudo-time
//! relaxation along the Frenet frame.

mod energy;
mod field;
mod jets;
mod krylov;
mod newton;
mod residual;
mod solver;

pub use energy::{energy, Energy};
pub use field::{BoundaryData, BoundaryMode, CurveField, NodeArray, CORNER_TOL};
pub use jets::{jet_decompose, JetDecomposition};
pub use residual::{residual_horizontal, residual_norm, residual_vertical, residuals, ForceProfile};
pub use solver::{equivariance_check, relax, relax_from, solve_bvp, Scheme, SolveReport, SolverConfig};

#[cfg(test)]
mod tests;
