//! Curvature of metrics and affine connections, the 4D Hodge star, and the
//! Einstein–Maxwell and Einstein–Weyl residuals.
//!
//! Conventions: `Γ^a_bc = ½ g^{ad}(∂_b g_dc + ∂_c g_bd − ∂_d g_bc)`,
//! `R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb`,
//! `R_bd = R^a_bad`. With these the anti-de Sitter Poincaré patch has
//! `R_ab = −3ℓ⁻² g_ab`.

mod fd;
mod maxwell;
mod weyl;

pub use fd::curvature_fd;
pub use maxwell::{em_residual, field_invariant, hodge4, hodge4_jet, maxwell_residual, EPSILON_SIGN};
pub use weyl::{weyl_connection, weyl_ricci_residual};

use crate::error::Result;
use crate::forms::MetricField;
use crate::jets::linalg::{invert, JetMatrix};
use crate::jets::{ChartPoint, Jet};

/// Smallest `|det g|` accepted.
pub const MIN_METRIC_DET: f64 = 1e-12;

pub type Tensor3 = Vec<Vec<Vec<f64>>>;
pub type Tensor4 = Vec<Vec<Vec<Vec<f64>>>>;

/// Connection coefficients `Γ^a_bc` as jets, indexed `[a][b][c]`.
pub type Connection = Vec<Vec<Vec<Jet>>>;

/// Curvature data of a metric at one point.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub metric: Vec<Vec<f64>>,
    pub inverse: Vec<Vec<f64>>,
    pub christoffel: Tensor3,
    /// `R^a_bcd`.
    pub riemann: Tensor4,
    pub ricci: Vec<Vec<f64>>,
    pub scalar: f64,
    pub kretschmann: f64,
}

/// Metric components at order `order` together with the inverse metric.
pub fn metric_jets(g: &dyn MetricField, pt: &ChartPoint, order: usize) -> Result<(JetMatrix, JetMatrix)> {
    let m = g.components(pt, order)?;
    let (inv, _) = invert(&m, MIN_METRIC_DET)?;
    Ok((m, inv))
}

/// Levi-Civita connection from metric jets of order at least 1; the result
/// has one order less.
pub fn levi_civita(m: &JetMatrix, inv: &JetMatrix) -> Connection {
    let n = m.len();
    let order = m[0][0].order() - 1;
    let dg: Vec<Vec<Vec<Jet>>> = (0..n)
        .map(|k| (0..n).map(|a| (0..n).map(|b| m[a][b].partial(k)).collect()).collect())
        .collect();
    let mut gamma = vec![vec![vec![Jet::constant(n, order, 0.0); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut acc = Jet::constant(n, order, 0.0);
                for d in 0..n {
                    let lowered = &(&dg[b][d][c] + &dg[c][b][d]) - &dg[d][b][c];
                    acc += &(&inv[a][d].truncate(order) * &lowered);
                }
                let acc = acc.scale(0.5);
                gamma[a][c][b] = acc.clone();
                gamma[a][b][c] = acc;
            }
        }
    }
    gamma
}

/// `R^a_bcd` of a connection given to order at least 1.
pub fn riemann(gamma: &Connection) -> Tensor4 {
    let n = gamma.len();
    let g0 = |a: usize, b: usize, c: usize| gamma[a][b][c].value();
    let dg = |k: usize, a: usize, b: usize, c: usize| gamma[a][b][c].grad(k);
    let mut r = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = dg(c, a, d, b) - dg(d, a, c, b);
                    for e in 0..n {
                        v += g0(a, c, e) * g0(e, d, b) - g0(a, d, e) * g0(e, c, b);
                    }
                    r[a][b][c][d] = v;
                }
            }
        }
    }
    r
}

/// `R_bd = R^a_bad`.
pub fn ricci_of(riemann: &Tensor4) -> Vec<Vec<f64>> {
    let n = riemann.len();
    (0..n)
        .map(|b| (0..n).map(|d| (0..n).map(|a| riemann[a][b][a][d]).sum()).collect())
        .collect()
}

/// Assembles scalar invariants from `R^a_bcd` and the metric.
pub(crate) fn assemble(
    metric: Vec<Vec<f64>>,
    inverse: Vec<Vec<f64>>,
    christoffel: Tensor3,
    riemann: Tensor4,
) -> Curvature {
    let n = metric.len();
    let ricci = ricci_of(&riemann);
    let scalar = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| inverse[a][b] * ricci[a][b])
        .sum();
    // R_abcd with the first index lowered, then R^{abcd} by raising all.
    let mut lower = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    lower[a][b][c][d] = (0..n).map(|e| metric[a][e] * riemann[e][b][c][d]).sum();
                }
            }
        }
    }
    let raise = |t: &Tensor4, slot: usize| -> Tensor4 {
        let mut out = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let idx = [a, b, c, d];
                        let mut v = 0.0;
                        for e in 0..n {
                            let mut j = idx;
                            j[slot] = e;
                            v += inverse[idx[slot]][e] * t[j[0]][j[1]][j[2]][j[3]];
                        }
                        out[a][b][c][d] = v;
                    }
                }
            }
        }
        out
    };
    let mut upper = lower.clone();
    for slot in 0..4 {
        upper = raise(&upper, slot);
    }
    let mut kretschmann = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    kretschmann += lower[a][b][c][d] * upper[a][b][c][d];
                }
            }
        }
    }
    Curvature {
        metric,
        inverse,
        christoffel,
        riemann,
        ricci,
        scalar,
        kretschmann,
    }
}

fn values(m: &JetMatrix) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(Jet::value).collect()).collect()
}

/// Curvature of a metric from exact jets.
pub fn curvature(g: &dyn MetricField, pt: &ChartPoint) -> Result<Curvature> {
    let (m, inv) = metric_jets(g, pt, 2)?;
    let gamma = levi_civita(&m, &inv);
    let r = riemann(&gamma);
    let christoffel = gamma
        .iter()
        .map(|x| x.iter().map(|y| y.iter().map(Jet::value).collect()).collect())
        .collect();
    Ok(assemble(values(&m), values(&inv), christoffel, r))
}

pub fn christoffel(g: &dyn MetricField, pt: &ChartPoint) -> Result<Tensor3> {
    let (m, inv) = metric_jets(g, pt, 1)?;
    Ok(levi_civita(&m, &inv)
        .iter()
        .map(|x| x.iter().map(|y| y.iter().map(Jet::value).collect()).collect())
        .collect())
}

pub fn ricci(g: &dyn MetricField, pt: &ChartPoint) -> Result<Vec<Vec<f64>>> {
    Ok(curvature(g, pt)?.ricci)
}

/// `R_abcd R^abcd`.
pub fn kretschmann(g: &dyn MetricField, pt: &ChartPoint) -> Result<f64> {
    Ok(curvature(g, pt)?.kretschmann)
}

/// Largest `|R_ab − R_ba|`.
pub fn asymmetry(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            worst = worst.max((m[a][b] - m[b][a]).abs());
        }
    }
    worst
}

#[cfg(test)]
pub(crate) mod oracles {
    use crate::forms::ComponentMetric;
    use crate::jets::Chart;

    pub fn poincare(ell: f64) -> (Chart, ComponentMetric) {
        let chart = Chart::new(&["z", "x", "y", "t"]).unwrap();
        let c = "l^2/z^2";
        let m = format!("-{c}");
        let g = ComponentMetric::from_exprs(
            &chart,
            &[
                vec![c, "0", "0", "0"],
                vec!["0", c, "0", "0"],
                vec!["0", "0", c, "0"],
                vec!["0", "0", "0", &m],
            ],
            &[("l", ell)],
        )
        .unwrap();
        (chart, g)
    }

    pub fn minkowski() -> (Chart, ComponentMetric) {
        let chart = Chart::new(&["x", "y", "z", "t"]).unwrap();
        let g = ComponentMetric::from_exprs(
            &chart,
            &[
                vec!["1", "0", "0", "0"],
                vec!["0", "1", "0", "0"],
                vec!["0", "0", "1", "0"],
                vec!["0", "0", "0", "-1"],
            ],
            &[],
        )
        .unwrap();
        (chart, g)
    }
}
