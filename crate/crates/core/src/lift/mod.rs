//! Einstein–Maxwell space-times built on hyper-CR Einstein–Weyl bases.
//!
//! Given a base structure in the gauge `V = −2/ℓ`, a 1-form `ψ` of weight
//! `−1` solving `Dψ = V ∗ψ`, and `ℓ`, the metric and Maxwell potential
//!
//! ```text
//! g = (ℓ/sin α dα − (ℓ/2) cos α ω + √2 sin α ψ)² + h / sin²α
//! A = (√2/2) sin 2α ψ − (ℓ/4) cos 2α ω
//! ```
//!
//! solve `R_ab + 3ℓ⁻² g_ab + 2 F_ac F_b^c − ½ |F|² g_ab = 0` and `d⋆F = 0`.
//! The substitution `sin α = sech(r/ℓ)`, `cos α = tanh(r/ℓ)` gives the
//! regular chart
//!
//! ```text
//! g = (dr + (ℓ/2) tanh(r/ℓ) ω − √2 sech(r/ℓ) ψ)² + cosh²(r/ℓ) h
//! ```
//!
//! which extends across `r = 0`.

mod limit;

pub use limit::{flat_limit, limit_family, LimitFamily, LimitMetric, LimitReport, LimitRow};

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::ew::{gauge_transform, gt_residual, max_abs, psi_residual, EwStructure, WeightedForm};
use crate::expr::Expr;
use crate::forms::{ext_d, FormJet, MetricField, PForm};
use crate::jets::linalg::JetMatrix;
use crate::jets::{Chart, ChartPoint, Jet, SampleDomain};

/// Sampling range of `α`, away from the conformal boundary at `0` and `π`.
pub const ALPHA_RANGE: (f64, f64) = (0.2, PI - 0.2);
/// Sampling range of `r/ℓ` in the regular chart (the image of [`ALPHA_RANGE`] and a bit more).
pub const REGULAR_RANGE: f64 = 2.0;

const GAUGE_TOL: f64 = 1e-9;
const GT_TOL: f64 = 1e-7;
const PSI_TOL: f64 = 1e-7;

/// Which coordinate system the extra dimension uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftChart {
    /// `α ∈ (0, π)`.
    Alpha,
    /// `r ∈ ℝ`, regular at `r = 0`.
    Regular,
}

impl LiftChart {
    pub fn coordinate(self) -> &'static str {
        match self {
            LiftChart::Alpha => "alpha",
            LiftChart::Regular => "r",
        }
    }
}

/// The `ℓ` that puts a constant-`V` base in the gauge `V = −2/ℓ`.
pub fn natural_ell(base: &EwStructure, pt: &ChartPoint) -> Result<f64> {
    let v = base.v.value(pt)?;
    if v == 0.0 {
        return Err(Error::GaugeViolation(
            "V vanishes; no ℓ puts it in the gauge V = −2/ℓ".into(),
        ));
    }
    Ok(-2.0 / v)
}

/// Rescales the base so that `V = −2/ℓ` everywhere: `f = ln(−ℓV/2)`.
pub fn gauge_fix(base: &EwStructure, ell: f64) -> Result<EwStructure> {
    let factor = base.v.scale(-ell / 2.0);
    gauge_transform(base, &factor.ln())
}

/// `ψ = c ω`.
pub fn psi_c_omega(base: &EwStructure, c: f64) -> WeightedForm {
    WeightedForm::new(base.omega.scale(c), -1.0)
}

/// `ψ = c(x) ω + d(c(x) + k(t))` on a Heisenberg base.
pub fn psi_heisenberg(base: &EwStructure, c: &str, k: &str) -> Result<WeightedForm> {
    let chart = &base.chart;
    let c = Expr::parse(c, &["x"])?.bind(chart, &[])?;
    let k = Expr::parse(k, &["t"])?.bind(chart, &[])?;
    let exact = ext_d(&PForm::function(3, &c + &k));
    Ok(WeightedForm::new(base.omega.mul_field(&c).add(&exact)?, -1.0))
}

/// Largest hypothesis residuals found while validating a lift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftCheck {
    pub gauge: f64,
    pub gt: f64,
    pub psi: f64,
}

/// Inputs of the construction.
#[derive(Clone, Debug)]
pub struct LiftConfig {
    pub base: EwStructure,
    pub psi: WeightedForm,
    pub ell: f64,
    /// Where the hypotheses are checked, on the base chart.
    pub domain: SampleDomain,
}

impl LiftConfig {
    pub fn new(base: EwStructure, psi: WeightedForm, ell: f64, domain: SampleDomain) -> LiftConfig {
        LiftConfig { base, psi, ell, domain }
    }

    /// Checks `V = −2/ℓ`, the Gauduchon–Tod equations and the ψ-equation on the sample.
    pub fn validate(&self) -> Result<LiftCheck> {
        if self.ell == 0.0 || !self.ell.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ℓ must be finite and nonzero, got {}",
                self.ell
            )));
        }
        if self.psi.weight != -1.0 {
            return Err(Error::InvalidParameter(format!(
                "ψ must have weight −1, got {}",
                self.psi.weight
            )));
        }
        let mut check = LiftCheck {
            gauge: 0.0,
            gt: 0.0,
            psi: 0.0,
        };
        for pt in self.domain.sample()? {
            let gauge = (self.base.v.value(&pt)? * self.ell + 2.0).abs();
            if gauge > GAUGE_TOL {
                return Err(Error::GaugeViolation(format!(
                    "|Vℓ + 2| = {gauge:.3e} at {:?}",
                    pt.coords()
                )));
            }
            let gt = max_abs(&gt_residual(&self.base, &pt)?);
            if gt > GT_TOL {
                return Err(Error::GaugeViolation(format!(
                    "base violates the Gauduchon–Tod equations ({gt:.3e}) at {:?}",
                    pt.coords()
                )));
            }
            let psi = psi_residual(&self.psi, &self.base, &pt)?.max_abs();
            if psi > PSI_TOL {
                return Err(Error::PsiResidual(psi));
            }
            check.gauge = check.gauge.max(gauge);
            check.gt = check.gt.max(gt);
            check.psi = check.psi.max(psi);
        }
        Ok(check)
    }
}

/// The α-chart space-time, after validating the hypotheses.
pub fn build_alpha(cfg: &LiftConfig) -> Result<Spacetime> {
    cfg.validate()?;
    Spacetime::unchecked(&cfg.base, &cfg.psi.form, cfg.ell, LiftChart::Alpha)
}

/// The regular-chart space-time, after validating the hypotheses.
pub fn build_regular(cfg: &LiftConfig) -> Result<Spacetime> {
    cfg.validate()?;
    Spacetime::unchecked(&cfg.base, &cfg.psi.form, cfg.ell, LiftChart::Regular)
}

/// Metric and potential on the 4-chart `(α or r, base coordinates)`.
#[derive(Clone, Debug)]
pub struct Spacetime {
    base: EwStructure,
    psi: PForm,
    ell: f64,
    kind: LiftChart,
    chart: Chart,
}

/// Coefficient jets of the construction along the extra coordinate.
struct Profile {
    theta0: Jet,
    theta_omega: Jet,
    theta_psi: Jet,
    h_factor: Jet,
    a_omega: Jet,
    a_psi: Jet,
}

impl Spacetime {
    /// Builds without checking any hypothesis; for negative controls.
    pub fn unchecked(base: &EwStructure, psi: &PForm, ell: f64, kind: LiftChart) -> Result<Spacetime> {
        if psi.dim() != 3 || psi.degree() != 1 {
            return Err(Error::DegreeMismatch("ψ must be a 1-form on the base".into()));
        }
        Ok(Spacetime {
            chart: base.chart.prepend(kind.coordinate())?,
            base: base.clone(),
            psi: psi.clone(),
            ell,
            kind,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn kind(&self) -> LiftChart {
        self.kind
    }

    pub fn base(&self) -> &EwStructure {
        &self.base
    }

    /// The same space-time in the other chart.
    pub fn in_chart(&self, kind: LiftChart) -> Spacetime {
        Spacetime::unchecked(&self.base, &self.psi, self.ell, kind).expect("validated on construction")
    }

    /// Sampling domain: the base domain with the extra coordinate prepended.
    pub fn domain(&self, base: &SampleDomain) -> Result<SampleDomain> {
        let bounds = match self.kind {
            LiftChart::Alpha => ALPHA_RANGE,
            LiftChart::Regular => {
                let r = REGULAR_RANGE * self.ell.abs();
                (-r, r)
            }
        };
        base.prepend(self.kind.coordinate(), bounds)
    }

    /// The image of a point under `cos α = tanh(r/ℓ)` in the other chart.
    pub fn matched_point(&self, pt: &ChartPoint) -> Result<ChartPoint> {
        let q = pt.coord(0);
        let (kind, q) = match self.kind {
            LiftChart::Alpha => (LiftChart::Regular, self.ell * q.cos().atanh()),
            LiftChart::Regular => (LiftChart::Alpha, (q / self.ell).tanh().acos()),
        };
        let mut coords = pt.coords().to_vec();
        coords[0] = q;
        pt.on_chart(&self.base.chart.prepend(kind.coordinate())?, &coords)
    }

    fn profile(&self, q: Jet) -> Result<Profile> {
        let l = self.ell;
        Ok(match self.kind {
            LiftChart::Alpha => {
                let (s, c) = (q.sin(), q.cos());
                let inv_s = s.recip()?;
                let two_q = q.scale(2.0);
                Profile {
                    theta0: inv_s.scale(l),
                    theta_omega: c.scale(-l / 2.0),
                    theta_psi: s.scale(SQRT_2),
                    h_factor: &inv_s * &inv_s,
                    a_omega: two_q.cos().scale(-l / 4.0),
                    a_psi: two_q.sin().scale(FRAC_1_SQRT_2),
                }
            }
            LiftChart::Regular => {
                let z = q.scale(1.0 / l);
                let t = z.tanh();
                let ch = z.cosh();
                let s = ch.recip()?;
                Profile {
                    theta0: Jet::constant(q.dim(), q.order(), -1.0),
                    theta_omega: t.scale(-l / 2.0),
                    theta_psi: s.scale(SQRT_2),
                    h_factor: &ch * &ch,
                    a_omega: (&(&t * &t) - &(&s * &s)).scale(-l / 4.0),
                    a_psi: (&s * &t).scale(SQRT_2),
                }
            }
        })
    }

    fn check_chart(&self, pt: &ChartPoint) -> Result<()> {
        if pt.chart() != &self.chart {
            return Err(Error::ChartMismatch(format!(
                "space-time on {} evaluated at a point of {}",
                self.chart,
                pt.chart()
            )));
        }
        Ok(())
    }

    fn embedded_forms(&self, pt: &ChartPoint, order: usize) -> Result<(FormJet, FormJet, Profile)> {
        self.check_chart(pt)?;
        let base_pt = pt.tail()?;
        let omega = self.base.omega.eval(&base_pt, order)?.embed(4, &[1, 2, 3]);
        let psi = self.psi.eval(&base_pt, order)?.embed(4, &[1, 2, 3]);
        let profile = self.profile(pt.coordinate_jet(0, order))?;
        Ok((omega, psi, profile))
    }

    /// Components of the Maxwell potential at a point.
    pub fn potential_jet(&self, pt: &ChartPoint, order: usize) -> Result<FormJet> {
        let (omega, psi, p) = self.embedded_forms(pt, order)?;
        omega.mul_jet(&p.a_omega).add(&psi.mul_jet(&p.a_psi))
    }

    /// The Maxwell potential as a lazily evaluated 1-form.
    pub fn potential(&self) -> PForm {
        let me = self.clone();
        PForm::new(4, 1, move |pt, order| me.potential_jet(pt, order))
    }

    fn metric_jets(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix> {
        let (omega, psi, p) = self.embedded_forms(pt, order)?;
        let h = self.base.frame.eval(&pt.tail()?, order)?.metric();
        let mut theta: Vec<Jet> = omega
            .mul_jet(&p.theta_omega)
            .add(&psi.mul_jet(&p.theta_psi))?
            .components()
            .to_vec();
        theta[0] = p.theta0.clone();
        let zero = Jet::constant(4, order, 0.0);
        Ok((0..4)
            .map(|a| {
                (0..4)
                    .map(|b| {
                        let hab = if a == 0 || b == 0 {
                            zero.clone()
                        } else {
                            &h[a - 1][b - 1].embed(4, &[1, 2, 3]) * &p.h_factor
                        };
                        &(&theta[a] * &theta[b]) + &hab
                    })
                    .collect()
            })
            .collect())
    }
}

impl MetricField for Spacetime {
    fn dim(&self) -> usize {
        4
    }

    fn components(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix> {
        self.metric_jets(pt, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curv::{curvature, em_residual, field_invariant, maxwell_residual};
    use crate::families::{class_b, heisenberg, Family};
    use crate::jets::ScalarField;

    fn heisenberg_cfg(c: f64) -> LiftConfig {
        let base = heisenberg(1.0).unwrap();
        let domain = Family::Heisenberg { ell: 1.0 }.default_domain().unwrap().count(10);
        LiftConfig::new(base.clone(), psi_c_omega(&base, c), -1.0, domain)
    }

    fn max_abs(m: &[Vec<f64>]) -> f64 {
        m.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    #[test]
    fn heisenberg_lift_solves_field_equations() {
        for c in [0.0, 0.5] {
            let cfg = heisenberg_cfg(c);
            for st in [build_alpha(&cfg).unwrap(), build_regular(&cfg).unwrap()] {
                let a = st.potential();
                for pt in st.domain(&cfg.domain).unwrap().count(5).sample().unwrap() {
                    assert!(max_abs(&em_residual(&st, &a, st.ell(), &pt).unwrap()) < 1e-9);
                    assert!(maxwell_residual(&a, &st, &pt).unwrap().max_abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn wrong_sign_of_ell_is_rejected() {
        let mut cfg = heisenberg_cfg(0.0);
        cfg.ell = 1.0;
        assert!(matches!(build_alpha(&cfg), Err(Error::GaugeViolation(_))));
    }

    #[test]
    fn class_b_with_general_c() {
        let base = class_b("1").unwrap();
        let domain = Family::ClassB { f: "1".into() }.default_domain().unwrap().count(5);
        let ell = natural_ell(&base, &domain.sample().unwrap()[0]).unwrap();
        assert_eq!(ell, 4.0);
        let cfg = LiftConfig::new(base.clone(), psi_c_omega(&base, 0.5), ell, domain.clone());
        let st = build_regular(&cfg).unwrap();
        let a = st.potential();
        for pt in st.domain(&domain).unwrap().sample().unwrap() {
            assert!(max_abs(&em_residual(&st, &a, ell, &pt).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn charts_agree_at_matched_points() {
        let cfg = heisenberg_cfg(0.5);
        let alpha = build_alpha(&cfg).unwrap();
        let regular = alpha.in_chart(LiftChart::Regular);
        for pt in alpha.domain(&cfg.domain).unwrap().count(5).sample().unwrap() {
            let q = alpha.matched_point(&pt).unwrap();
            let ga = alpha.values(&pt).unwrap();
            let gr = regular.values(&q).unwrap();
            // dα/dr = −sin α / ℓ
            let jac = [-pt.coord(0).sin() / cfg.ell, 1.0, 1.0, 1.0];
            for i in 0..4 {
                for j in 0..4 {
                    assert!((ga[i][j] * jac[i] * jac[j] - gr[i][j]).abs() < 1e-8);
                }
            }
            let ka = curvature(&alpha, &pt).unwrap().kretschmann;
            let kr = curvature(&regular, &q).unwrap().kretschmann;
            assert!((ka - kr).abs() < 1e-6 * (1.0 + ka.abs()));
            let fa = field_invariant(&alpha.potential(), &alpha, &pt).unwrap();
            let fr = field_invariant(&regular.potential(), &regular, &q).unwrap();
            assert!((fa - fr).abs() < 1e-6 * (1.0 + fa.abs()));
        }
    }

    #[test]
    fn regular_chart_at_zero() {
        let cfg = heisenberg_cfg(0.5);
        let st = build_regular(&cfg).unwrap();
        let pt = ChartPoint::new(st.chart(), &[0.0, 0.3, -0.2, 0.1]).unwrap();
        let g = st.values(&pt).unwrap();
        let base_pt = pt.tail().unwrap();
        let h = cfg.base.metric().values(&base_pt).unwrap();
        let psi = cfg.psi.form.eval(&base_pt, 0).unwrap().values();
        // g = (−dr + √2 ψ)² + h
        let theta = [-1.0, SQRT_2 * psi[0], SQRT_2 * psi[1], SQRT_2 * psi[2]];
        for a in 0..4 {
            for b in 0..4 {
                let hab = if a == 0 || b == 0 { 0.0 } else { h[a - 1][b - 1] };
                assert!((g[a][b] - theta[a] * theta[b] - hab).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn flat_base_is_not_a_solution() {
        // V = 0 violates the gauge V = −2/ℓ, and ℓ²dρ² + cosh²ρ (flat) is not Einstein.
        let zero = ScalarField::zero();
        let base = EwStructure::from_uw(&zero, &zero, "flat").unwrap();
        let st = Spacetime::unchecked(&base, &PForm::zero(3, 1), 1.3, LiftChart::Alpha).unwrap();
        let pt = ChartPoint::new(st.chart(), &[1.1, 0.2, 0.3, 0.4]).unwrap();
        let r = max_abs(&em_residual(&st, &st.potential(), 1.3, &pt).unwrap());
        assert!(r > 1e-3);
        let domain = Family::Heisenberg { ell: 1.0 }.default_domain().unwrap().count(3);
        let cfg = LiftConfig::new(base.clone(), psi_c_omega(&base, 0.0), 1.3, domain);
        assert!(matches!(build_alpha(&cfg), Err(Error::GaugeViolation(_))));
    }
}
