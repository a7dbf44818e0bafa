use rayon::prelude::*;

use super::field::{BoundaryMode, CurveField, NodeArray};
use crate::curvegeo::{decompose_velocity, frenet, DerivBackend, FrenetData, Vec2};
use crate::error::Result;
use crate::sobolev::SobolevOperator;

/// Normal/tangential split of the first jet of a curve field at every node,
/// `c_x = v_x t + h_x n`, `c_t = v_t t + h_t n`, together with
/// `H = ½(h_x P h_x + h_t P h_t)`.
#[derive(Debug, Clone)]
pub struct JetDecomposition {
    pub h_t: NodeArray,
    pub v_t: NodeArray,
    pub h_x: NodeArray,
    pub v_x: NodeArray,
    pub big_h: NodeArray,
    pub(crate) frames: Vec<FrenetData>,
    pub(crate) p_v_t: NodeArray,
    pub(crate) p_v_x: NodeArray,
}

impl JetDecomposition {
    pub fn frame(&self, field: &CurveField, i: usize, j: usize) -> &FrenetData {
        &self.frames[field.index(i, j)]
    }
}

/// Second-order difference of the field along one grid direction.
fn jet(prev2: Option<&[Vec2]>, prev: Option<&[Vec2]>, here: &[Vec2], next: Option<&[Vec2]>, next2: Option<&[Vec2]>, h: f64) -> Vec<Vec2> {
    let n = here.len();
    match (prev, next) {
        (Some(p), Some(q)) => (0..n).map(|k| (0.5 / h) * (q[k] - p[k])).collect(),
        (None, Some(q)) => {
            let q2 = next2.expect("one-sided stencil needs two neighbours");
            (0..n).map(|k| (0.5 / h) * (4.0 * (q[k] - here[k]) - (q2[k] - here[k]))).collect()
        }
        (Some(p), None) => {
            let p2 = prev2.expect("one-sided stencil needs two neighbours");
            (0..n).map(|k| (0.5 / h) * ((p2[k] - here[k]) - 4.0 * (p[k] - here[k]))).collect()
        }
        (None, None) => unreachable!("grid has at least two cells"),
    }
}

pub(crate) fn x_jet(field: &CurveField, i: usize, j: usize) -> Vec<Vec2> {
    let mx = field.mx();
    let pts = |i: usize| field.get(i, j).points();
    match field.mode() {
        BoundaryMode::PeriodicX => {
            let ii = i % mx;
            let prev = (ii + mx - 1) % mx;
            let next = (ii + 1) % mx;
            jet(None, Some(pts(prev)), pts(ii), Some(pts(next)), None, field.dx())
        }
        BoundaryMode::Dirichlet => {
            let prev = (i > 0).then(|| pts(i - 1));
            let prev2 = (i > 1).then(|| pts(i - 2));
            let next = (i < mx).then(|| pts(i + 1));
            let next2 = (i + 2 <= mx).then(|| pts(i + 2));
            jet(prev2, prev, pts(i), next, next2, field.dx())
        }
    }
}

pub(crate) fn t_jet(field: &CurveField, i: usize, j: usize) -> Vec<Vec2> {
    let mt = field.mt();
    let pts = |j: usize| field.get(i, j).points();
    let prev = (j > 0).then(|| pts(j - 1));
    let prev2 = (j > 1).then(|| pts(j - 2));
    let next = (j < mt).then(|| pts(j + 1));
    let next2 = (j + 2 <= mt).then(|| pts(j + 2));
    jet(prev2, prev, pts(j), next, next2, field.dt())
}

struct NodeJet {
    frame: FrenetData,
    h_t: Vec<f64>,
    v_t: Vec<f64>,
    h_x: Vec<f64>,
    v_x: Vec<f64>,
    p_v_t: Vec<f64>,
    p_v_x: Vec<f64>,
    big_h: Vec<f64>,
}

/// Jets by second-order central differences in x and t (one-sided at the
/// edges, wrapped in periodic mode), decomposed in each node's Frenet frame.
pub fn jet_decompose(field: &CurveField, op: &SobolevOperator) -> Result<JetDecomposition> {
    let (mx, mt) = (field.mx(), field.mt());
    let nodes: Vec<(usize, usize)> = (0..=mx).flat_map(|i| (0..=mt).map(move |j| (i, j))).collect();
    let per_node: Vec<NodeJet> = nodes
        .par_iter()
        .map(|&(i, j)| -> Result<NodeJet> {
            let frame = frenet(field.get(i, j), DerivBackend::Spectral)?;
            let (v_x, h_x) = decompose_velocity(&frame, &x_jet(field, i, j))?;
            let (v_t, h_t) = decompose_velocity(&frame, &t_jet(field, i, j))?;
            let p_h_x = op.apply(&h_x)?;
            let p_h_t = op.apply(&h_t)?;
            let p_v_x = op.apply(&v_x)?;
            let p_v_t = op.apply(&v_t)?;
            let big_h = (0..h_x.len())
                .map(|k| 0.5 * (h_x[k] * p_h_x[k] + h_t[k] * p_h_t[k]))
                .collect();
            Ok(NodeJet { frame, h_t, v_t, h_x, v_x, p_v_t, p_v_x, big_h })
        })
        .collect::<Result<_>>()?;

    let mut frames = Vec::with_capacity(per_node.len());
    let mut cols: [Vec<Vec<f64>>; 7] = Default::default();
    for nj in per_node {
        frames.push(nj.frame);
        for (dst, src) in cols.iter_mut().zip([nj.h_t, nj.v_t, nj.h_x, nj.v_x, nj.big_h, nj.p_v_t, nj.p_v_x]) {
            dst.push(src);
        }
    }
    let [h_t, v_t, h_x, v_x, big_h, p_v_t, p_v_x] = cols.map(|c| NodeArray::from_nodes(mx, mt, c));
    Ok(JetDecomposition { h_t, v_t, h_x, v_x, big_h, frames, p_v_t, p_v_x })
}
