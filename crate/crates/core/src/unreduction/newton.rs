//! Newton–Krylov iteration for the un-reduced equations.
//!
//! Linearized about a field, a normal displacement `δ` and a tangential one
//! `u` change the jets by `δh_• = δ_• − v_• D_θδ` and `δv_• = u_• + h_• D_θδ`.
//! Freezing the θ-averages of `h_•`, `v_•`, `κ`, `H` and `|c_θ|` at each node
//! makes the principal part diagonal in the Fourier modes of θ; each mode is
//! then a small dense system over the `(x,t)` grid, which serves as the
//! preconditioner of GMRES on the exact residual.

use nalgebra::{DMatrix, DVector, LU};
use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{BoundaryMode, CurveField, NodeArray};
use super::jets::JetDecomposition;
use crate::curvegeo::{DiscreteCurve, FrenetData};
use crate::error::{Error, Result};
use crate::sobolev::SobolevOperator;
use crate::spectral;

fn mean(f: &[f64]) -> f64 {
    f.iter().sum::<f64>() / f.len() as f64
}

/// Interior unknowns in the order the solver stores them.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    nodes: Vec<(usize, usize)>,
    slot: Vec<Option<usize>>,
    mx: usize,
    mt: usize,
    mode: BoundaryMode,
    n: usize,
}

impl Layout {
    pub fn new(field: &CurveField) -> Self {
        let nodes = field.interior_nodes();
        let mut slot = vec![None; (field.mx() + 1) * (field.mt() + 1)];
        for (a, &(i, j)) in nodes.iter().enumerate() {
            slot[field.index(i, j)] = Some(a);
        }
        Self { nodes, slot, mx: field.mx(), mt: field.mt(), mode: field.mode(), n: field.n() }
    }

    pub fn len(&self) -> usize {
        2 * self.n * self.nodes.len()
    }

    /// Unknown slot of a grid neighbour, `None` for fixed boundary nodes.
    fn neighbour(&self, i: usize, j: usize, di: isize, dj: isize) -> Option<usize> {
        let jj = j as isize + dj;
        if jj < 0 || jj > self.mt as isize {
            return None;
        }
        let ii = i as isize + di;
        let ii = match self.mode {
            BoundaryMode::PeriodicX => ii.rem_euclid(self.mx as isize),
            BoundaryMode::Dirichlet if ii < 0 || ii > self.mx as isize => return None,
            BoundaryMode::Dirichlet => ii,
        };
        self.slot[ii as usize * (self.mt + 1) + jj as usize]
    }

    /// Concatenates `[R_h, R_v]` over the interior nodes.
    pub fn flatten(&self, r_h: &NodeArray, r_v: &NodeArray) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for &(i, j) in &self.nodes {
            out.extend_from_slice(r_h.node(i, j));
            out.extend_from_slice(r_v.node(i, j));
        }
        out
    }

    /// Moves every interior curve by `s·(δ n + u t)` in the given frames.
    pub fn displace(&self, field: &CurveField, frames: &[FrenetData], d: &[f64], s: f64) -> Result<CurveField> {
        let n = self.n;
        let moved: Vec<DiscreteCurve> = self
            .nodes
            .par_iter()
            .enumerate()
            .map(|(a, &(i, j))| {
                let fr = &frames[field.index(i, j)];
                let (dh, dv) = d[2 * n * a..2 * n * (a + 1)].split_at(n);
                let pts = field.get(i, j).points();
                DiscreteCurve::new(
                    (0..n).map(|k| pts[k] + s * (dh[k] * fr.normal[k] + dv[k] * fr.tangent[k])).collect(),
                )
            })
            .collect::<Result<_>>()?;
        let mut next = field.clone();
        for (&(i, j), c) in self.nodes.iter().zip(moved) {
            next.set(i, j, c);
        }
        if self.mode == BoundaryMode::PeriodicX {
            for j in 0..=self.mt {
                let c = next.get(0, j).clone();
                next.set(self.mx, j, c);
            }
        }
        Ok(next)
    }
}

/// θ-averaged coefficients of the linearization at one node.
#[derive(Debug, Clone, Copy)]
struct Frozen {
    h_t: f64,
    h_x: f64,
    v_t: f64,
    v_x: f64,
    kappa: f64,
    big_h: f64,
    speed: f64,
}

/// Mode-wise LU factors of the frozen-coefficient linearization.
pub(crate) struct Preconditioner {
    layout: Layout,
    symbols: Vec<f64>,
    factors: Vec<LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl Preconditioner {
    pub fn build(layout: &Layout, field: &CurveField, decomp: &JetDecomposition, op: &SobolevOperator) -> Result<Self> {
        let frozen: Vec<Frozen> = layout
            .nodes
            .iter()
            .map(|&(i, j)| {
                let fr = decomp.frame(field, i, j);
                Frozen {
                    h_t: mean(decomp.h_t.node(i, j)),
                    h_x: mean(decomp.h_x.node(i, j)),
                    v_t: mean(decomp.v_t.node(i, j)),
                    v_x: mean(decomp.v_x.node(i, j)),
                    kappa: mean(&fr.curvature),
                    big_h: mean(decomp.big_h.node(i, j)),
                    speed: mean(&fr.speed),
                }
            })
            .collect();
        let modes: Vec<usize> = (0..=layout.n / 2).collect();
        let factors = modes
            .par_iter()
            .map(|&k| mode_matrix(layout, &frozen, k as f64, op.symbol(k as f64), field.dx(), field.dt()).lu())
            .collect();
        let symbols = modes.iter().map(|&k| op.symbol(k as f64)).collect();
        Ok(Self { layout: layout.clone(), symbols, factors })
    }

    /// Approximately solves `J d = r`.
    pub fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        let n = self.layout.n;
        let m = self.layout.nodes.len();
        let half = n / 2;
        // spectra[a] = (R̂_h, R̂_v) over modes 0..=N/2, divided by the P symbol
        let spectra: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..m)
            .into_par_iter()
            .map(|a| {
                let (rh, rv) = r[2 * n * a..2 * n * (a + 1)].split_at(n);
                let scale = |s: Vec<Complex64>| -> Vec<Complex64> {
                    s.into_iter().take(half + 1).zip(&self.symbols).map(|(z, p)| z / *p).collect()
                };
                (scale(spectral::forward(rh)), scale(spectral::forward(rv)))
            })
            .collect();
        let solved: Vec<Vec<Complex64>> = (0..=half)
            .into_par_iter()
            .map(|k| {
                let rhs = DVector::from_iterator(
                    2 * m,
                    spectra.iter().flat_map(|(h, v)| [h[k], v[k]]),
                );
                self.factors[k]
                    .solve(&rhs)
                    .map(|s| s.iter().copied().collect())
                    .ok_or_else(|| Error::Singular(format!("preconditioner block for mode {k}")))
            })
            .collect::<Result<_>>()?;
        let out: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|a| {
                let back = |comp: usize| -> Vec<f64> {
                    let mut spec = vec![Complex64::new(0.0, 0.0); n];
                    for k in 0..=half {
                        let z = solved[k][2 * a + comp];
                        if k == 0 || k == half {
                            spec[k] = Complex64::new(z.re, 0.0);
                        } else {
                            spec[k] = z;
                            spec[n - k] = z.conj();
                        }
                    }
                    spectral::inverse_real(spec)
                };
                let mut v = back(0);
                v.extend(back(1));
                v
            })
            .collect();
        Ok(out.concat())
    }
}

/// Frozen-coefficient Jacobian (without the `P` factor) for Fourier mode `k`,
/// unknowns interleaved as `(δ, u)` per node.
fn mode_matrix(layout: &Layout, frozen: &[Frozen], k: f64, p: f64, dx: f64, dt: f64) -> DMatrix<Complex64> {
    let m = layout.nodes.len();
    let nyquist = 2 * k as usize == layout.n;
    let mut mat = DMatrix::<Complex64>::zeros(2 * m, 2 * m);
    let i1 = Complex64::new(0.0, 1.0);
    for (a, &(i, j)) in layout.nodes.iter().enumerate() {
        let f = frozen[a];
        // first θ-derivatives drop the Nyquist mode, as the spectral stencils do
        let kt = if nyquist { 0.0 } else { k / f.speed };
        let kt2 = (k / f.speed).powi(2);
        let (rd, ru) = (2 * a, 2 * a + 1);
        let mut add = |row: usize, col: usize, z: Complex64| mat[(row, col)] += z;

        // discrete Laplacian on both components
        let lap_diag = -2.0 / (dx * dx) - 2.0 / (dt * dt);
        add(rd, rd, lap_diag.into());
        add(ru, ru, lap_diag.into());
        for (di, dj, w) in [(-1, 0, 1.0 / (dx * dx)), (1, 0, 1.0 / (dx * dx)), (0, -1, 1.0 / (dt * dt)), (0, 1, 1.0 / (dt * dt))] {
            if let Some(b) = layout.neighbour(i, j, di, dj) {
                add(rd, 2 * b, w.into());
                add(ru, 2 * b + 1, w.into());
            }
        }

        // first differences: (di, dj, weight, which coefficient direction)
        let stencil = [(-1, 0, -0.5 / dx, true), (1, 0, 0.5 / dx, true), (0, -1, -0.5 / dt, false), (0, 1, 0.5 / dt, false)];
        for (di, dj, w, along_x) in stencil {
            let Some(b) = layout.neighbour(i, j, di, dj) else { continue };
            let g = frozen[b];
            let (h_here, v_here, h_there, v_there) =
                if along_x { (f.h_x, f.v_x, g.h_x, g.v_x) } else { (f.h_t, f.v_t, g.h_t, g.v_t) };
            // δ row: −ik̃ ∂(v δ) from the flux, −ik̃ v ∂δ and κ h ∂δ from the
            // coupling and curvature terms, −ik̃ h ∂u from the coupling
            // κ δH = ½κ h (1 + P) δh_• against the overall P factor
            let dd = -i1 * kt * (v_there + v_here) + f.kappa * h_here * 0.5 * (1.0 + p) / p;
            add(rd, 2 * b, dd * w);
            add(rd, 2 * b + 1, -i1 * kt * h_here * w);
            // u row: ∂(h (ik̃δ + κu)) from δv = u_• + h_•(D_θδ + κu)
            add(ru, 2 * b, i1 * kt * h_there * w);
            add(ru, 2 * b + 1, (g.kappa * h_there * w).into());
        }

        let h2 = f.h_t * f.h_t + f.h_x * f.h_x;
        // H δκ with δκ = D_θ²δ + κ²δ carries no P factor
        let local = kt * kt * (h2 - f.v_t * f.v_t - f.v_x * f.v_x) + f.big_h * (f.kappa * f.kappa - kt2) / p;
        let drift = -i1 * kt * f.kappa * (f.h_t * f.v_t + f.h_x * f.v_x);
        add(rd, rd, drift + local);
        add(rd, ru, -i1 * kt * f.kappa * h2);
    }
    mat
}
