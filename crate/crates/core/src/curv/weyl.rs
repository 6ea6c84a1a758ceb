use crate::curv::{levi_civita, metric_jets, ricci_of, riemann, Connection};
use crate::error::Result;
use crate::ew::EwStructure;
use crate::forms::MetricField;
use crate::jets::{ChartPoint, Jet};

/// The Weyl connection `Γ_D = Γ_LC − ½(δ^a_b ω_c + δ^a_c ω_b − h_bc ω^a)`,
/// the torsion-free connection with `Dh = ω⊗h`. Accurate to first order.
pub fn weyl_connection(s: &EwStructure, pt: &ChartPoint) -> Result<Connection> {
    let (h, inv) = metric_jets(&s.metric(), pt, 2)?;
    let mut gamma = levi_civita(&h, &inv);
    let omega = s.omega.eval(pt, 1)?;
    let w = omega.components();
    let n = 3;
    let raised: Vec<Jet> = (0..n)
        .map(|a| {
            let mut acc = Jet::constant(n, 1, 0.0);
            for d in 0..n {
                acc += &(&inv[a][d].truncate(1) * &w[d]);
            }
            acc
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut corr = &h[b][c].truncate(1) * &raised[a];
                corr = -corr;
                if a == b {
                    corr += &w[c];
                }
                if a == c {
                    corr += &w[b];
                }
                gamma[a][b][c] -= &corr.scale(0.5);
            }
        }
    }
    Ok(gamma)
}

/// `(compat, ew)`: the largest component of `Dh − ω⊗h`, and of the
/// trace-free part of the symmetrized Ricci tensor of `D`.
pub fn weyl_ricci_residual(s: &EwStructure, pt: &ChartPoint) -> Result<(f64, f64)> {
    let gamma = weyl_connection(s, pt)?;
    let h = s.metric().components(pt, 1)?;
    let omega = s.omega.eval(pt, 0)?.values();
    let n = 3;

    let mut compat = 0.0f64;
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut v = h[a][b].grad(c) - omega[c] * h[a][b].value();
                for d in 0..n {
                    v -= gamma[d][c][a].value() * h[d][b].value() + gamma[d][c][b].value() * h[a][d].value();
                }
                compat = compat.max(v.abs());
            }
        }
    }

    let ric = ricci_of(&riemann(&gamma));
    let hv: Vec<Vec<f64>> = h.iter().map(|r| r.iter().map(Jet::value).collect()).collect();
    let (_, inv) = metric_jets(&s.metric(), pt, 0)?;
    let sym: Vec<Vec<f64>> = (0..n)
        .map(|a| (0..n).map(|b| 0.5 * (ric[a][b] + ric[b][a])).collect())
        .collect();
    let trace: f64 = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| inv[a][b].value() * sym[a][b])
        .sum();
    let mut ew = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            ew = ew.max((sym[a][b] - trace / n as f64 * hv[a][b]).abs());
        }
    }
    Ok((compat, ew))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::families::heisenberg;
    use crate::jets::Chart;

    #[test]
    fn heisenberg_is_einstein_weyl() {
        let s = heisenberg(1.0).unwrap();
        for c in [[0.3, 0.2, -0.5], [-0.9, 0.4, 0.8]] {
            let (compat, ew) = weyl_ricci_residual(&s, &ChartPoint::new(&Chart::xyt(), &c).unwrap()).unwrap();
            assert!(compat < 1e-12, "{compat}");
            assert!(ew < 1e-10, "{ew}");
        }
    }

    #[test]
    fn non_solution_is_not_einstein_weyl() {
        let h = Expr::parse("x*y", &["x", "y", "t"])
            .unwrap()
            .bind(&Chart::xyt(), &[])
            .unwrap();
        let s = EwStructure::from_h(&h, "x*y").unwrap();
        let (compat, ew) = weyl_ricci_residual(&s, &ChartPoint::new(&Chart::xyt(), &[0.4, 1.1, 0.3]).unwrap()).unwrap();
        assert!(compat < 1e-12);
        assert!(ew > 1e-3, "{ew}");
    }
}
