//! The limit `ℓ → ∞` of the regular-chart space-time with `ψ = 0`:
//! `g → (dr + ½ r ω)² + h` and `F → (ℓ/4) dω`.

use crate::curv::curvature;
use crate::error::{Error, Result};
use crate::ew::EwStructure;
use crate::families::{class_b, heisenberg};
use crate::forms::{MetricField, PForm};
use crate::jets::linalg::JetMatrix;
use crate::jets::{ChartPoint, Jet, SampleDomain};
use crate::lift::{LiftChart, Spacetime};

/// `(dr + ½ r ω)² + h` on `(r, base coordinates)`.
#[derive(Clone, Debug)]
pub struct LimitMetric {
    base: EwStructure,
}

impl LimitMetric {
    pub fn new(base: &EwStructure) -> LimitMetric {
        LimitMetric { base: base.clone() }
    }
}

impl MetricField for LimitMetric {
    fn dim(&self) -> usize {
        4
    }

    fn components(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix> {
        let base_pt = pt.tail()?;
        let omega = self.base.omega.eval(&base_pt, order)?.embed(4, &[1, 2, 3]);
        let h = self.base.frame.eval(&base_pt, order)?.metric();
        let half_r = pt.coordinate_jet(0, order).scale(0.5);
        let mut theta: Vec<Jet> = omega.mul_jet(&half_r).components().to_vec();
        theta[0] = Jet::constant(4, order, 1.0);
        Ok((0..4)
            .map(|a| {
                (0..4)
                    .map(|b| {
                        let tt = &theta[a] * &theta[b];
                        if a == 0 || b == 0 {
                            tt
                        } else {
                            &tt + &h[a - 1][b - 1].embed(4, &[1, 2, 3])
                        }
                    })
                    .collect()
            })
            .collect())
    }
}

/// A base depending on `ℓ`, with the `ℓ` used by the lift.
pub type LimitFamily = dyn Fn(f64) -> Result<(EwStructure, f64)>;

/// Named one-parameter families: `heisenberg` (lift ℓ = −ℓ), `class-b`
/// (`F = ℓ/4`), and `frozen`, the Heisenberg base at `ℓ = 1` lifted with a
/// growing `ℓ`, whose `ω` does not scale away.
pub fn limit_family(name: &str) -> Result<Box<LimitFamily>> {
    Ok(match name {
        "heisenberg" => Box::new(|l| Ok((heisenberg(l)?, -l))),
        "class-b" => Box::new(|l| Ok((class_b(&format!("{l}/4"))?, l))),
        "frozen" => Box::new(|l| Ok((heisenberg(1.0)?, -l))),
        other => {
            return Err(Error::Config(format!(
                "no limit family `{other}` (expected heisenberg, class-b or frozen)"
            )))
        }
    })
}

/// Errors for one `ℓ`, measured against the value at `2ℓ` as well.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub ell: f64,
    /// `max |g(ℓ) − g_lim(ℓ)|` over the sample.
    pub metric_error: f64,
    /// The same at `2ℓ`.
    pub doubled_error: f64,
    /// `metric_error / doubled_error`; close to 4 for an `O(ℓ⁻²)` approach.
    pub ratio: f64,
    /// `max |F|` over the sample.
    pub field_norm: f64,
    /// `max |F − (ℓ/4) dω|`.
    pub field_error: f64,
    /// `max |R^a_bcd|` of the limit metric.
    pub limit_riemann: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// Set when the metric error or the field norm grows along the sequence.
    pub diverges: bool,
}

struct Errors {
    metric: f64,
    field: f64,
    field_error: f64,
}

fn measure(family: &LimitFamily, ell: f64, points: &[ChartPoint]) -> Result<(Errors, EwStructure)> {
    let (base, lift_ell) = family(ell)?;
    let st = Spacetime::unchecked(&base, &PForm::zero(3, 1), lift_ell, LiftChart::Regular)?;
    let lim = LimitMetric::new(&base);
    let mut e = Errors {
        metric: 0.0,
        field: 0.0,
        field_error: 0.0,
    };
    for pt in points {
        let g = st.values(pt)?;
        let gl = lim.values(pt)?;
        for (ra, rb) in g.iter().zip(&gl) {
            for (a, b) in ra.iter().zip(rb) {
                e.metric = e.metric.max((a - b).abs());
            }
        }
        let f = st.potential_jet(pt, 1)?.d()?;
        let f_lim = base
            .omega
            .eval(&pt.tail()?, 1)?
            .d()?
            .embed(4, &[1, 2, 3])
            .scale(lift_ell / 4.0);
        e.field = e.field.max(f.max_abs());
        e.field_error = e.field_error.max(f.sub(&f_lim)?.max_abs());
    }
    Ok((e, base))
}

/// Runs the limit along `ells` on a sample of the regular chart `(r, base)`.
pub fn flat_limit(family: &LimitFamily, ells: &[f64], domain: &SampleDomain) -> Result<LimitReport> {
    if ells.is_empty() {
        return Err(Error::Config("empty ℓ sequence".into()));
    }
    let points = domain.sample()?;
    let mut rows = Vec::with_capacity(ells.len());
    for &ell in ells {
        let (e, base) = measure(family, ell, &points)?;
        let (e2, _) = measure(family, 2.0 * ell, &points)?;
        let lim = LimitMetric::new(&base);
        let mut riemann = 0.0f64;
        for pt in &points {
            let c = curvature(&lim, pt)?;
            riemann = c
                .riemann
                .iter()
                .flatten()
                .flatten()
                .flatten()
                .fold(riemann, |m, v| m.max(v.abs()));
        }
        rows.push(LimitRow {
            ell,
            metric_error: e.metric,
            doubled_error: e2.metric,
            ratio: e.metric / e2.metric,
            field_norm: e.field,
            field_error: e.field_error,
            limit_riemann: riemann,
        });
    }
    let diverges = rows
        .windows(2)
        .any(|w| w[1].metric_error > w[0].metric_error || w[1].field_norm > w[0].field_norm);
    Ok(LimitReport { rows, diverges })
}
