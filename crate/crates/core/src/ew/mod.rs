//! Einstein–Weyl structures in Gauduchon–Tod form and their residual
//! operators.
//!
//! A structure is a coframe `e¹, e², e³`, a 1-form `ω` and a function `V` on
//! a 3-chart. It is hyper-CR Einstein–Weyl when
//!
//! ```text
//! d eⁱ = ½ ω∧eⁱ − V ∗eⁱ,   i = 1, 2, 3,
//! ```
//!
//! with the frame Hodge star of [`crate::forms::hodge3`]. Residuals are
//! returned as coordinate 2-forms evaluated at a point.

use crate::error::{Error, Result};
use crate::forms::{ext_d, wedge, Coframe3, FormJet, FrameJet, PForm};
use crate::jets::{Chart, ChartPoint, Jet, ScalarField};

/// A Gauduchon–Tod structure together with where it came from.
#[derive(Clone, Debug)]
pub struct EwStructure {
    pub chart: Chart,
    pub frame: Coframe3,
    pub omega: PForm,
    pub v: ScalarField,
    pub provenance: String,
    /// The hydrodynamic potentials `(u, w)`, when the structure was built from them.
    pub potentials: Option<(ScalarField, ScalarField)>,
}

/// A structure evaluated at one point.
#[derive(Clone, Debug)]
pub struct EwJets {
    pub frame: FrameJet,
    pub omega: FormJet,
    pub v: Jet,
}

impl EwStructure {
    pub fn new(chart: &Chart, frame: Coframe3, omega: PForm, v: ScalarField, provenance: &str) -> Result<EwStructure> {
        if chart.dim() != 3 {
            return Err(Error::ChartMismatch(format!(
                "Einstein–Weyl structures live on 3-charts, got {chart}"
            )));
        }
        if omega.dim() != 3 || omega.degree() != 1 {
            return Err(Error::DegreeMismatch(format!(
                "ω must be a 1-form on a 3-chart, got degree {} on dim {}",
                omega.degree(),
                omega.dim()
            )));
        }
        Ok(EwStructure {
            chart: chart.clone(),
            frame,
            omega,
            v: v.clone(),
            provenance: provenance.to_string(),
            potentials: None,
        })
    }

    /// The structure of a solution `(u, w)` of the hyper-CR system on `(x, y, t)`:
    /// `e¹ = dx − u dy + w dt`, `e² = dy − u dt`, `e³ = dt`,
    /// `ω = u_x dy + (u u_x + 2u_y) dt`, `V = u_x / 2`.
    pub fn from_uw(u: &ScalarField, w: &ScalarField, provenance: &str) -> Result<EwStructure> {
        let one = ScalarField::constant(1.0);
        let zero = ScalarField::zero();
        let e1 = PForm::from_components(3, 1, vec![one.clone(), -u, w.clone()])?;
        let e2 = PForm::from_components(3, 1, vec![zero.clone(), one.clone(), -u])?;
        let e3 = PForm::from_components(3, 1, vec![zero.clone(), zero.clone(), one])?;
        let ux = u.partial(0);
        let uy = u.partial(1);
        let omega = PForm::from_components(3, 1, vec![zero, ux.clone(), &(u * &ux) + &uy.scale(2.0)])?;
        let mut s = EwStructure::new(
            &Chart::xyt(),
            Coframe3::new(e1, e2, e3)?,
            omega,
            ux.scale(0.5),
            provenance,
        )?;
        s.potentials = Some((u.clone(), w.clone()));
        Ok(s)
    }

    /// The structure of a solution `H` of the dispersionless equation,
    /// through `u = H_x`, `w = −H_y`.
    pub fn from_h(h: &ScalarField, provenance: &str) -> Result<EwStructure> {
        EwStructure::from_uw(&h.partial(0), &-&h.partial(1), provenance)
    }

    pub fn eval(&self, pt: &ChartPoint, order: usize) -> Result<EwJets> {
        if pt.chart() != &self.chart {
            return Err(Error::ChartMismatch(format!(
                "structure on {} evaluated at a point of {}",
                self.chart,
                pt.chart()
            )));
        }
        Ok(EwJets {
            frame: self.frame.eval(pt, order)?,
            omega: self.omega.eval(pt, order)?,
            v: self.v.jet(pt, order)?,
        })
    }

    /// The metric `h = e²⊙e² − 4 e¹⊙e³` of the conformal class.
    pub fn metric(&self) -> crate::forms::FrameMetric {
        crate::forms::metric_from_coframe(&self.frame)
    }
}

/// A 1-form of conformal weight `m`.
#[derive(Clone, Debug)]
pub struct WeightedForm {
    pub form: PForm,
    pub weight: f64,
}

impl WeightedForm {
    pub fn new(form: PForm, weight: f64) -> WeightedForm {
        WeightedForm { form, weight }
    }
}

/// The two hyper-CR equations
/// `u_t + w_y + u w_x − w u_x` and `u_y + w_x`.
pub fn hypercr_residual(u: &ScalarField, w: &ScalarField, pt: &ChartPoint) -> Result<(f64, f64)> {
    let u = u.jet(pt, 1)?;
    let w = w.jet(pt, 1)?;
    let r1 = u.grad(2) + w.grad(1) + u.value() * w.grad(0) - w.value() * u.grad(0);
    let r2 = u.grad(1) + w.grad(0);
    Ok((r1, r2))
}

/// `d eⁱ − ½ ω∧eⁱ + V ∗eⁱ` for each frame form.
pub fn gt_residual(s: &EwStructure, pt: &ChartPoint) -> Result<[FormJet; 3]> {
    let jets = s.eval(pt, 1)?;
    let frame0 = s.frame.eval(pt, 0)?;
    let omega = jets.omega.truncate(0);
    let v = jets.v.truncate(0);
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let de = jets.frame.form(i).d()?;
        let e = frame0.form(i);
        let rhs = omega.wedge(e)?.scale(0.5);
        let star = frame0.hodge(e)?.mul_jet(&v);
        out.push(de.sub(&rhs)?.add(&star)?);
    }
    Ok(out.try_into().expect("three residuals"))
}

/// `∗(dV + ½ V ω) − ½ dω`.
pub fn monopole_residual(s: &EwStructure, pt: &ChartPoint) -> Result<FormJet> {
    let jets = s.eval(pt, 1)?;
    let frame0 = s.frame.eval(pt, 0)?;
    let dv = FormJet::new(3, 0, vec![jets.v.clone()])?.d()?;
    let half_v_omega = jets.omega.truncate(0).mul_jet(&jets.v.truncate(0)).scale(0.5);
    let star = frame0.hodge(&dv.add(&half_v_omega)?)?;
    star.sub(&jets.omega.d()?.scale(0.5))
}

/// The conformal rescaling `eⁱ → e^f eⁱ`, `ω → ω + 2 df`, `V → e^{−f} V`.
pub fn gauge_transform(s: &EwStructure, f: &ScalarField) -> Result<EwStructure> {
    let ef = f.exp();
    let [e1, e2, e3] = s.frame.forms().clone();
    let frame = Coframe3::new(e1.mul_field(&ef), e2.mul_field(&ef), e3.mul_field(&ef))?;
    let omega = s.omega.add(&ext_d(&PForm::function(3, f.clone())).scale(2.0))?;
    let v = &s.v * &f.scale(-1.0).exp();
    EwStructure::new(&s.chart, frame, omega, v, &format!("{} (gauged)", s.provenance))
}

/// Weighted exterior derivative `Dψ = dψ − (m/2) ω∧ψ`.
pub fn weighted_d(psi: &WeightedForm, omega: &PForm) -> Result<PForm> {
    let twist = wedge(omega, &psi.form)?.scale(psi.weight / 2.0);
    ext_d(&psi.form).sub(&twist)
}

/// `Dψ − V ∗ψ`.
pub fn psi_residual(psi: &WeightedForm, s: &EwStructure, pt: &ChartPoint) -> Result<FormJet> {
    if psi.form.degree() != 1 || psi.form.dim() != 3 {
        return Err(Error::DegreeMismatch(format!(
            "ψ must be a 1-form on a 3-chart, got degree {} on dim {}",
            psi.form.degree(),
            psi.form.dim()
        )));
    }
    let jets = s.eval(pt, 0)?;
    let p = psi.form.eval(pt, 1)?;
    let dpsi = p.d()?;
    let p0 = p.truncate(0);
    let twist = jets.omega.wedge(&p0)?.scale(psi.weight / 2.0);
    let star = jets.frame.hodge(&p0)?.mul_jet(&jets.v);
    dpsi.sub(&twist)?.sub(&star)
}

/// Left-hand side of `H_xt − H_yy + H_y H_xx − H_x H_xy = 0`.
pub fn hcr_residual(h: &ScalarField, pt: &ChartPoint) -> Result<f64> {
    let (nonlinear, linear) = constraints_residual(h, pt)?;
    Ok(linear + nonlinear)
}

/// `(H_xx H_y − H_xy H_x, H_xt − H_yy)`: the nonlinear and linear parts of
/// the dispersionless equation.
pub fn constraints_residual(h: &ScalarField, pt: &ChartPoint) -> Result<(f64, f64)> {
    let j = h.jet(pt, 2)?;
    let nonlinear = j.hess(0, 0) * j.grad(1) - j.hess(0, 1) * j.grad(0);
    let linear = j.hess(0, 2) - j.hess(1, 1);
    Ok((nonlinear, linear))
}

/// Largest component magnitude over a list of residual forms.
pub fn max_abs(forms: &[FormJet]) -> f64 {
    forms.iter().map(FormJet::max_abs).fold(0.0, f64::max)
}
