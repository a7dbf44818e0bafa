use crate::error::Result;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone)]
pub(crate) struct KrylovOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Restarted, right-preconditioned GMRES for `A x = b` from `x = 0`. The
/// preconditioned directions are stored, so `precond` may vary between calls.
pub(crate) fn gmres(
    mut apply: impl FnMut(&[f64]) -> Result<Vec<f64>>,
    mut precond: impl FnMut(&[f64]) -> Result<Vec<f64>>,
    b: &[f64],
    rtol: f64,
    restart: usize,
    max_iter: usize,
) -> Result<KrylovOutcome> {
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(KrylovOutcome { x, iterations: 0 });
    }
    let mut r = b.to_vec();
    let mut rnorm = bnorm;
    let mut iterations = 0;

    while iterations < max_iter && rnorm > rtol * bnorm {
        let m = restart.min(max_iter - iterations);
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|a| a / rnorm).collect()];
        let mut z: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = rnorm;
        let mut k_used = 0;

        for k in 0..m {
            let zk = precond(&v[k])?;
            let mut w = apply(&zk)?;
            z.push(zk);
            for (i, vi) in v.iter().enumerate() {
                h[i][k] = dot(&w, vi);
                for (wj, vj) in w.iter_mut().zip(vi) {
                    *wj -= h[i][k] * vj;
                }
            }
            h[k + 1][k] = norm(&w);
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let d = h[k][k].hypot(h[k + 1][k]);
            (cs[k], sn[k]) = if d == 0.0 { (1.0, 0.0) } else { (h[k][k] / d, h[k + 1][k] / d) };
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            iterations += 1;
            k_used = k + 1;
            let breakdown = d == 0.0 || w.iter().all(|a| *a == 0.0);
            if g[k + 1].abs() <= rtol * bnorm || breakdown {
                break;
            }
            let wn = norm(&w);
            v.push(w.into_iter().map(|a| a / wn).collect());
        }

        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = if h[i][i] == 0.0 { 0.0 } else { (g[i] - s) / h[i][i] };
        }
        for (yj, zj) in y.iter().zip(&z) {
            for (xi, zi) in x.iter_mut().zip(zj) {
                *xi += yj * zi;
            }
        }
        let ax = apply(&x)?;
        r = b.iter().zip(&ax).map(|(a, c)| a - c).collect();
        let new_norm = norm(&r);
        if new_norm >= rnorm {
            break;
        }
        rnorm = new_norm;
    }
    Ok(KrylovOutcome { x, iterations })
}
