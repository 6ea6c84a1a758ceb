use std::sync::Arc;

use crate::curv::{curvature, metric_jets, MIN_METRIC_DET};
use crate::error::{Error, Result};
use crate::forms::{basis, FormJet, MetricField, PForm};
use crate::jets::linalg::{invert, JetMatrix};
use crate::jets::{ChartPoint, Jet};

/// Sign of `ε_0123` in the chart's coordinate order.
pub const EPSILON_SIGN: f64 = 1.0;

fn permutation_sign(idx: &[usize]) -> f64 {
    let mut sign = EPSILON_SIGN;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Full antisymmetric matrix `F_ab` of a 2-form.
fn antisymmetric(f: &FormJet) -> Vec<Vec<Jet>> {
    let n = f.dim();
    let mut m = vec![vec![Jet::constant(n, f.order(), 0.0); n]; n];
    for (idx, c) in basis(n, 2).iter().zip(f.components()) {
        m[idx[0]][idx[1]] = c.clone();
        m[idx[1]][idx[0]] = -c.clone();
    }
    m
}

/// `F^ab = g^ac g^bd F_cd`.
fn raise_both(f: &[Vec<Jet>], inv: &JetMatrix) -> Vec<Vec<Jet>> {
    let n = f.len();
    let order = f[0][0].order();
    let zero = Jet::constant(n, order, 0.0);
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut acc = zero.clone();
                    for c in 0..n {
                        for d in 0..n {
                            acc += &(&(&inv[a][c] * &inv[b][d]) * &f[c][d]);
                        }
                    }
                    acc.truncate(order)
                })
                .collect()
        })
        .collect()
}

/// `(⋆F)_ab = ½ √|det g| ε_abcd F^cd` from metric jets.
pub fn hodge4_jet(f: &FormJet, g: &JetMatrix) -> Result<FormJet> {
    if f.dim() != 4 || f.degree() != 2 || g.len() != 4 {
        return Err(Error::DegreeMismatch(format!(
            "the 4D star acts on 2-forms on a 4-chart, got degree {} on dim {}",
            f.degree(),
            f.dim()
        )));
    }
    let order = f.order().min(g[0][0].order());
    let g: JetMatrix = g
        .iter()
        .map(|r| r.iter().map(|j| j.truncate(order)).collect())
        .collect();
    let (inv, det) = invert(&g, MIN_METRIC_DET)?;
    let vol = (if det.value() < 0.0 { -det } else { det })
        .sqrt()
        .ok_or(Error::SingularMetric { det: 0.0 })?;
    let upper = raise_both(&antisymmetric(&f.truncate(order)), &inv);
    let pairs = basis(4, 2);
    let comps = pairs
        .iter()
        .map(|ab| {
            let mut acc = Jet::constant(4, order, 0.0);
            for cd in &pairs {
                let s = permutation_sign(&[ab[0], ab[1], cd[0], cd[1]]);
                if s != 0.0 {
                    acc += &upper[cd[0]][cd[1]].scale(s);
                }
            }
            &acc * &vol
        })
        .collect();
    FormJet::new(4, 2, comps)
}

/// Lazy metric Hodge star of a 2-form on a 4-chart.
pub fn hodge4(f: &PForm, g: Arc<dyn MetricField>) -> Result<PForm> {
    if f.dim() != 4 || f.degree() != 2 || g.dim() != 4 {
        return Err(Error::DegreeMismatch(format!(
            "the 4D star acts on 2-forms on a 4-chart, got degree {} on dim {}",
            f.degree(),
            f.dim()
        )));
    }
    let f = f.clone();
    Ok(PForm::new(4, 2, move |pt, order| {
        hodge4_jet(&f.eval(pt, order)?, &g.components(pt, order)?)
    }))
}

/// `d ⋆ dA`, a 3-form.
pub fn maxwell_residual(a: &PForm, g: &dyn MetricField, pt: &ChartPoint) -> Result<FormJet> {
    let f = a.eval(pt, 2)?.d()?;
    let star = hodge4_jet(&f, &g.components(pt, 1)?)?;
    star.d()
}

/// `|F|² = F_ab F^ab` for `F = dA`.
pub fn field_invariant(a: &PForm, g: &dyn MetricField, pt: &ChartPoint) -> Result<f64> {
    let f = antisymmetric(&a.eval(pt, 1)?.d()?);
    let (_, inv) = metric_jets(g, pt, 0)?;
    let upper = raise_both(&f, &inv);
    let n = f.len();
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| f[i][j].value() * upper[i][j].value())
        .sum())
}

/// `R_ab + 3ℓ⁻² g_ab + 2 F_ac F_bd g^cd − ½ |F|² g_ab` with `F = dA`.
/// Pass `ℓ = ∞` to drop the cosmological term.
pub fn em_residual(g: &dyn MetricField, a: &PForm, ell: f64, pt: &ChartPoint) -> Result<Vec<Vec<f64>>> {
    let curv = curvature(g, pt)?;
    let n = curv.metric.len();
    let f = antisymmetric(&a.eval(pt, 1)?.d()?);
    let f: Vec<Vec<f64>> = f.iter().map(|r| r.iter().map(Jet::value).collect()).collect();
    let inv = &curv.inverse;
    let mut f_mixed = vec![vec![0.0; n]; n]; // F_a^d = F_ac g^cd
    for a in 0..n {
        for d in 0..n {
            f_mixed[a][d] = (0..n).map(|c| f[a][c] * inv[c][d]).sum();
        }
    }
    let mut f2 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let upper: f64 = (0..n)
                .flat_map(|c| (0..n).map(move |d| (c, d)))
                .map(|(c, d)| inv[a][c] * inv[b][d] * f[c][d])
                .sum();
            f2 += f[a][b] * upper;
        }
    }
    let lambda = 3.0 / (ell * ell);
    Ok((0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let ff: f64 = (0..n).map(|d| f_mixed[a][d] * f[b][d]).sum();
                    curv.ricci[a][b] + lambda * curv.metric[a][b] + 2.0 * ff - 0.5 * f2 * curv.metric[a][b]
                })
                .collect()
        })
        .collect())
}
