use serde::{Deserialize, Serialize};

use crate::curvegeo::{DiscreteCurve, Vec2};
use crate::error::{Error, Result};

/// Maximum point gap tolerated between boundary edges meeting at a corner.
pub const CORNER_TOL: f64 = 1e-8;

/// How the x-edges of the rectangle are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Curves prescribed on all four edges.
    #[default]
    Dirichlet,
    /// Prescribed at `t = 0, 1`; periodic in x, node `M_x` identified with node 0.
    PeriodicX,
}

/// Curves `c(x_i, t_j)` on the uniform grid of `[0,1]²`, stored x-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveField {
    mx: usize,
    mt: usize,
    curves: Vec<DiscreteCurve>,
    mode: BoundaryMode,
}

impl CurveField {
    pub fn new(mx: usize, mt: usize, curves: Vec<DiscreteCurve>, mode: BoundaryMode) -> Result<Self> {
        if mx < 2 || mt < 2 {
            return Err(Error::ShapeMismatch(format!("grid needs at least 2 cells per side, got {mx}x{mt}")));
        }
        if curves.len() != (mx + 1) * (mt + 1) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} curves for a {mx}x{mt} grid, got {}",
                (mx + 1) * (mt + 1),
                curves.len()
            )));
        }
        let n = curves[0].len();
        if let Some(c) = curves.iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: c.len() });
        }
        Ok(Self { mx, mt, curves, mode })
    }

    /// Evaluates `f(x, t)` at every node.
    pub fn from_fn(
        mx: usize,
        mt: usize,
        mode: BoundaryMode,
        f: impl Fn(f64, f64) -> Result<DiscreteCurve>,
    ) -> Result<Self> {
        let mut curves = Vec::with_capacity((mx + 1) * (mt + 1));
        for i in 0..=mx {
            for j in 0..=mt {
                curves.push(f(i as f64 / mx as f64, j as f64 / mt as f64)?);
            }
        }
        Self::new(mx, mt, curves, mode)
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    pub fn mt(&self) -> usize {
        self.mt
    }

    /// Samples per curve.
    pub fn n(&self) -> usize {
        self.curves[0].len()
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.mx as f64
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.mt as f64
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.mt + 1) + j
    }

    pub fn get(&self, i: usize, j: usize) -> &DiscreteCurve {
        &self.curves[self.index(i, j)]
    }

    pub fn curves(&self) -> &[DiscreteCurve] {
        &self.curves
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, c: DiscreteCurve) {
        let k = self.index(i, j);
        self.curves[k] = c;
    }

    /// Nodes the solver moves. In periodic mode column `M_x` mirrors column 0.
    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        let t_inner = j > 0 && j < self.mt;
        match self.mode {
            BoundaryMode::Dirichlet => t_inner && i > 0 && i < self.mx,
            BoundaryMode::PeriodicX => t_inner && i < self.mx,
        }
    }

    pub fn interior_nodes(&self) -> Vec<(usize, usize)> {
        (0..=self.mx)
            .flat_map(|i| (0..=self.mt).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_interior(i, j))
            .collect()
    }
}

/// A row-major `(M_x+1)×(M_t+1)` array of per-node θ-arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeArray {
    mx: usize,
    mt: usize,
    data: Vec<Vec<f64>>,
}

impl NodeArray {
    pub fn zeros(mx: usize, mt: usize, n: usize) -> Self {
        Self { mx, mt, data: vec![vec![0.0; n]; (mx + 1) * (mt + 1)] }
    }

    pub(crate) fn from_nodes(mx: usize, mt: usize, data: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(data.len(), (mx + 1) * (mt + 1));
        Self { mx, mt, data }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.mx + 1, self.mt + 1, self.data.first().map_or(0, Vec::len))
    }

    pub fn node(&self, i: usize, j: usize) -> &[f64] {
        &self.data[i * (self.mt + 1) + j]
    }

    pub(crate) fn node_mut(&mut self, i: usize, j: usize) -> &mut Vec<f64> {
        &mut self.data[i * (self.mt + 1) + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn iter_nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.data.iter().map(Vec::as_slice)
    }
}

/// Dirichlet data on the four edges of `[0,1]²`.
///
/// `bottom`/`top` hold `M_x + 1` curves at `t = 0` / `t = 1`; `left`/`right`
/// hold `M_t + 1` curves at `x = 0` / `x = 1`. In periodic mode the side
/// edges are unused and `bottom`, `top` must close up in x.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub mx: usize,
    pub mt: usize,
    pub mode: BoundaryMode,
    pub bottom: Vec<DiscreteCurve>,
    pub top: Vec<DiscreteCurve>,
    pub left: Vec<DiscreteCurve>,
    pub right: Vec<DiscreteCurve>,
}

impl BoundaryData {
    /// Samples `f(x, t)` on the boundary nodes only.
    pub fn from_fn(
        mx: usize,
        mt: usize,
        mode: BoundaryMode,
        f: impl Fn(f64, f64) -> Result<DiscreteCurve>,
    ) -> Result<Self> {
        let xs = |i: usize| i as f64 / mx as f64;
        let ts = |j: usize| j as f64 / mt as f64;
        let bottom = (0..=mx).map(|i| f(xs(i), 0.0)).collect::<Result<Vec<_>>>()?;
        let top = (0..=mx).map(|i| f(xs(i), 1.0)).collect::<Result<Vec<_>>>()?;
        let (left, right) = match mode {
            BoundaryMode::Dirichlet => (
                (0..=mt).map(|j| f(0.0, ts(j))).collect::<Result<Vec<_>>>()?,
                (0..=mt).map(|j| f(1.0, ts(j))).collect::<Result<Vec<_>>>()?,
            ),
            BoundaryMode::PeriodicX => (Vec::new(), Vec::new()),
        };
        let b = Self { mx, mt, mode, bottom, top, left, right };
        b.check()?;
        Ok(b)
    }

    /// Applies `g` to every boundary curve.
    pub fn map_curves(&self, g: impl Fn(&DiscreteCurve) -> Result<DiscreteCurve>) -> Result<Self> {
        let m = |v: &[DiscreteCurve]| v.iter().map(&g).collect::<Result<Vec<_>>>();
        Ok(Self {
            mx: self.mx,
            mt: self.mt,
            mode: self.mode,
            bottom: m(&self.bottom)?,
            top: m(&self.top)?,
            left: m(&self.left)?,
            right: m(&self.right)?,
        })
    }

    pub fn n(&self) -> usize {
        self.bottom[0].len()
    }

    /// Validates sizes and corner compatibility.
    pub fn check(&self) -> Result<()> {
        if self.mx < 2 || self.mt < 2 {
            return Err(Error::ShapeMismatch("grid needs at least 2 cells per side".into()));
        }
        if self.bottom.len() != self.mx + 1 || self.top.len() != self.mx + 1 {
            return Err(Error::ShapeMismatch("t-edges need M_x + 1 curves".into()));
        }
        let n = self.n();
        let all = self.bottom.iter().chain(&self.top).chain(&self.left).chain(&self.right);
        if let Some(c) = all.into_iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: c.len() });
        }
        let gap = |a: &DiscreteCurve, b: &DiscreteCurve| {
            a.points().iter().zip(b.points()).map(|(p, q)| (*p - *q).norm()).fold(0.0, f64::max)
        };
        let mut corners: Vec<(&'static str, f64)> = Vec::new();
        match self.mode {
            BoundaryMode::Dirichlet => {
                if self.left.len() != self.mt + 1 || self.right.len() != self.mt + 1 {
                    return Err(Error::ShapeMismatch("x-edges need M_t + 1 curves".into()));
                }
                corners.push(("(0,0)", gap(&self.bottom[0], &self.left[0])));
                corners.push(("(1,0)", gap(&self.bottom[self.mx], &self.right[0])));
                corners.push(("(0,1)", gap(&self.top[0], &self.left[self.mt])));
                corners.push(("(1,1)", gap(&self.top[self.mx], &self.right[self.mt])));
            }
            BoundaryMode::PeriodicX => {
                corners.push(("x-period at t=0", gap(&self.bottom[0], &self.bottom[self.mx])));
                corners.push(("x-period at t=1", gap(&self.top[0], &self.top[self.mx])));
            }
        }
        for (corner, g) in corners {
            if g > CORNER_TOL {
                return Err(Error::CornerMismatch { corner, gap: g });
            }
        }
        Ok(())
    }

    /// Initial field by transfinite bilinear blending of the edge data
    /// (linear in t between the t-edges in periodic mode).
    pub fn initial_field(&self) -> Result<CurveField> {
        self.check()?;
        let (mx, mt, n) = (self.mx, self.mt, self.n());
        let mut curves = Vec::with_capacity((mx + 1) * (mt + 1));
        for i in 0..=mx {
            let x = i as f64 / mx as f64;
            for j in 0..=mt {
                let t = j as f64 / mt as f64;
                let c = if j == 0 {
                    self.bottom[i].clone()
                } else if j == mt {
                    self.top[i].clone()
                } else if self.mode == BoundaryMode::Dirichlet && i == 0 {
                    self.left[j].clone()
                } else if self.mode == BoundaryMode::Dirichlet && i == mx {
                    self.right[j].clone()
                } else {
                    let pts: Vec<Vec2> = (0..n)
                        .map(|k| {
                            let b = self.bottom[i].points()[k];
                            let tp = self.top[i].points()[k];
                            let lin_t = (1.0 - t) * b + t * tp;
                            match self.mode {
                                BoundaryMode::PeriodicX => lin_t,
                                BoundaryMode::Dirichlet => {
                                    let l = self.left[j].points()[k];
                                    let r = self.right[j].points()[k];
                                    let c00 = self.bottom[0].points()[k];
                                    let c10 = self.bottom[mx].points()[k];
                                    let c01 = self.top[0].points()[k];
                                    let c11 = self.top[mx].points()[k];
                                    let bilinear = (1.0 - x) * (1.0 - t) * c00
                                        + x * (1.0 - t) * c10
                                        + (1.0 - x) * t * c01
                                        + x * t * c11;
                                    lin_t + (1.0 - x) * l + x * r - bilinear
                                }
                            }
                        })
                        .collect();
                    DiscreteCurve::new(pts)?
                };
                curves.push(c);
            }
        }
        CurveField::new(mx, mt, curves, self.mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvegeo::{Reparam, Shape};

    fn circle(r: f64) -> Result<DiscreteCurve> {
        Shape::Circle { r }.sample(16, &Reparam::Identity)
    }

    #[test]
    fn coons_patch_reproduces_bilinear_radius() {
        let b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |x, t| circle(1.0 + x + t)).unwrap();
        let f = b.initial_field().unwrap();
        for i in 0..=4 {
            for j in 0..=4 {
                let r = 1.0 + (i + j) as f64 / 4.0;
                let p = f.get(i, j).points()[0];
                assert!((p.x - r).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn corner_mismatch_detected() {
        let mut b = BoundaryData::from_fn(4, 4, BoundaryMode::Dirichlet, |_, _| circle(1.0)).unwrap();
        b.left[0] = circle(1.0 + 1e-6).unwrap();
        assert!(matches!(b.check(), Err(Error::CornerMismatch { corner: "(0,0)", .. })));
    }

    #[test]
    fn interior_masks() {
        let f = CurveField::from_fn(4, 3, BoundaryMode::Dirichlet, |_, _| circle(1.0)).unwrap();
        assert_eq!(f.interior_nodes().len(), 3 * 2);
        let p = CurveField::from_fn(4, 3, BoundaryMode::PeriodicX, |_, _| circle(1.0)).unwrap();
        assert_eq!(p.interior_nodes().len(), 4 * 2);
    }
}
