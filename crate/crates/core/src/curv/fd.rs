//! Curvature from finite-difference derivatives of the metric values: an
//! oracle independent of the jet arithmetic.

use nalgebra::DMatrix;

use crate::curv::{assemble, Curvature, MIN_METRIC_DET};
use crate::error::{Error, Result};
use crate::forms::MetricField;
use crate::jets::{fd_derivative, ChartPoint};

pub fn curvature_fd(g: &dyn MetricField, pt: &ChartPoint) -> Result<Curvature> {
    let n = g.dim();
    let x = pt.coords().to_vec();
    let comp = |a: usize, b: usize, vars: &[usize]| fd_derivative(|c| Ok(g.values(&pt.moved(c))?[a][b]), &x, vars);

    let metric = g.values(pt)?;
    let m = DMatrix::from_fn(n, n, |i, j| metric[i][j]);
    let det = m.determinant();
    if det.abs() <= MIN_METRIC_DET {
        return Err(Error::SingularMetric { det: det.abs() });
    }
    let inv_m = m.try_inverse().ok_or(Error::SingularMetric { det: det.abs() })?;
    let inverse: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| inv_m[(i, j)]).collect()).collect();

    // dg[k][a][b] = ∂_k g_ab, ddg[k][l][a][b] = ∂_k ∂_l g_ab
    let mut dg = vec![vec![vec![0.0; n]; n]; n];
    let mut ddg = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in a..n {
            for k in 0..n {
                let v = comp(a, b, &[k])?;
                dg[k][a][b] = v;
                dg[k][b][a] = v;
                for l in k..n {
                    let v = comp(a, b, &[k, l])?;
                    for (p, q) in [(k, l), (l, k)] {
                        ddg[p][q][a][b] = v;
                        ddg[p][q][b][a] = v;
                    }
                }
            }
        }
    }

    // ∂_k g^{ad} = −g^{ae} ∂_k g_ef g^{fd}
    let mut dinv = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for a in 0..n {
            for d in 0..n {
                let mut v = 0.0;
                for e in 0..n {
                    for f in 0..n {
                        v -= inverse[a][e] * dg[k][e][f] * inverse[f][d];
                    }
                }
                dinv[k][a][d] = v;
            }
        }
    }

    let lowered = |d: usize, b: usize, c: usize| dg[b][d][c] + dg[c][b][d] - dg[d][b][c];
    let d_lowered = |k: usize, d: usize, b: usize, c: usize| ddg[k][b][d][c] + ddg[k][c][b][d] - ddg[k][d][b][c];

    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    let mut dgamma = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                gamma[a][b][c] = 0.5 * (0..n).map(|d| inverse[a][d] * lowered(d, b, c)).sum::<f64>();
                for k in 0..n {
                    dgamma[k][a][b][c] = 0.5
                        * (0..n)
                            .map(|d| dinv[k][a][d] * lowered(d, b, c) + inverse[a][d] * d_lowered(k, d, b, c))
                            .sum::<f64>();
                }
            }
        }
    }

    let mut riemann = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = dgamma[c][a][d][b] - dgamma[d][a][c][b];
                    for e in 0..n {
                        v += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
                    }
                    riemann[a][b][c][d] = v;
                }
            }
        }
    }
    Ok(assemble(metric, inverse, gamma, riemann))
}
