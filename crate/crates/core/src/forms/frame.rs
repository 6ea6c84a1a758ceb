use crate::error::{Error, Result};
use crate::forms::{basis, FormJet, MetricField, PForm};
use crate::jets::linalg::{invert, JetMatrix};
use crate::jets::{Chart, ChartPoint, Jet};

const MIN_FRAME_DET: f64 = 1e-12;

/// Three 1-forms on a 3-chart, invertible wherever they are evaluated.
#[derive(Clone, Debug)]
pub struct Coframe3 {
    e: [PForm; 3],
}

impl Coframe3 {
    pub fn new(e1: PForm, e2: PForm, e3: PForm) -> Result<Coframe3> {
        for e in [&e1, &e2, &e3] {
            if e.dim() != 3 || e.degree() != 1 {
                return Err(Error::DegreeMismatch(format!(
                    "coframe members are 1-forms on a 3-chart, got degree {} on dim {}",
                    e.degree(),
                    e.dim()
                )));
            }
        }
        Ok(Coframe3 { e: [e1, e2, e3] })
    }

    /// Rows of coordinate components, one per frame form.
    pub fn from_exprs(chart: &Chart, rows: [[&str; 3]; 3], params: &[(&str, f64)]) -> Result<Coframe3> {
        let [a, b, c] = rows.map(|r| PForm::from_exprs(chart, 1, &r, params));
        Coframe3::new(a?, b?, c?)
    }

    pub fn forms(&self) -> &[PForm; 3] {
        &self.e
    }

    pub fn eval(&self, pt: &ChartPoint, order: usize) -> Result<FrameJet> {
        let forms = [
            self.e[0].eval(pt, order)?,
            self.e[1].eval(pt, order)?,
            self.e[2].eval(pt, order)?,
        ];
        FrameJet::new(forms)
    }
}

/// A coframe evaluated at one point, with its inverse.
#[derive(Clone, Debug)]
pub struct FrameJet {
    forms: [FormJet; 3],
    inverse: JetMatrix,
    det: Jet,
}

impl FrameJet {
    pub fn new(forms: [FormJet; 3]) -> Result<FrameJet> {
        let matrix: JetMatrix = forms.iter().map(|f| f.components().to_vec()).collect();
        let (inverse, det) = invert(&matrix, MIN_FRAME_DET).map_err(|e| match e {
            Error::SingularMetric { det } => Error::SingularFrame { det },
            other => other,
        })?;
        Ok(FrameJet { forms, inverse, det })
    }

    pub fn forms(&self) -> &[FormJet; 3] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &FormJet {
        &self.forms[i]
    }

    pub fn det(&self) -> &Jet {
        &self.det
    }

    /// `e^i ∧ e^j`.
    pub fn pair(&self, i: usize, j: usize) -> FormJet {
        self.forms[i].wedge(&self.forms[j]).expect("1-forms on a 3-chart")
    }

    /// Coefficients of `a` in the basis `{e^i}` or `{e^i∧e^j, i<j}`.
    pub fn expand(&self, a: &FormJet) -> Result<Vec<Jet>> {
        if a.dim() != 3 {
            return Err(Error::ChartMismatch(format!(
                "{}-dimensional form in a 3-frame",
                a.dim()
            )));
        }
        let comps = a.components();
        match a.degree() {
            0 => Ok(comps.to_vec()),
            1 => Ok((0..3)
                .map(|i| {
                    let mut acc = &comps[0] * &self.inverse[0][i];
                    for k in 1..3 {
                        acc += &(&comps[k] * &self.inverse[k][i]);
                    }
                    acc
                })
                .collect()),
            2 => {
                // Frame pairs written in coordinates, row per pair.
                let compound: JetMatrix = basis(3, 2)
                    .iter()
                    .map(|ij| self.pair(ij[0], ij[1]).components().to_vec())
                    .collect();
                let (inv, _) = invert(&compound, 0.0).map_err(|_| Error::SingularFrame {
                    det: self.det.value().abs(),
                })?;
                Ok((0..3)
                    .map(|i| {
                        let mut acc = &comps[0] * &inv[0][i];
                        for k in 1..3 {
                            acc += &(&comps[k] * &inv[k][i]);
                        }
                        acc
                    })
                    .collect())
            }
            _ => Ok(vec![comps[0].checked_div(&self.det)?]),
        }
    }

    /// Reassembles frame coefficients of the given degree into coordinates.
    pub fn assemble(&self, degree: usize, coeffs: &[Jet]) -> FormJet {
        let order = coeffs.iter().map(Jet::order).min().unwrap_or(0);
        let mut out = FormJet::zero(3, degree, order);
        let pieces: Vec<FormJet> = match degree {
            1 => self.forms.to_vec(),
            2 => basis(3, 2).iter().map(|ij| self.pair(ij[0], ij[1])).collect(),
            _ => panic!("assemble supports degrees 1 and 2"),
        };
        for (c, piece) in coeffs.iter().zip(&pieces) {
            out = out.add(&piece.mul_jet(c).truncate(order)).expect("same shape");
        }
        out
    }

    /// Frame Hodge star on 1-forms: `∗e¹ = e¹∧e²`, `∗e² = 2e¹∧e³`, `∗e³ = e²∧e³`.
    pub fn hodge(&self, a: &FormJet) -> Result<FormJet> {
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch(format!(
                "the 3D star acts on 1-forms, got degree {}",
                a.degree()
            )));
        }
        let c = self.expand(a)?;
        Ok(self.assemble(2, &[c[0].clone(), c[1].scale(2.0), c[2].clone()]))
    }

    /// `h = e²⊗e² − 2(e¹⊗e³ + e³⊗e¹)` in coordinates.
    pub fn metric(&self) -> JetMatrix {
        let e = |i: usize, a: usize| &self.forms[i].components()[a];
        (0..3)
            .map(|a| {
                (0..3)
                    .map(|b| {
                        let cross = &(e(0, a) * e(2, b)) + &(e(2, a) * e(0, b));
                        &(e(1, a) * e(1, b)) - &cross.scale(2.0)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Coefficients of a 1- or 2-form in the frame basis at a point.
pub fn frame_expand(a: &PForm, frame: &Coframe3, pt: &ChartPoint) -> Result<Vec<f64>> {
    if !(1..=2).contains(&a.degree()) {
        return Err(Error::DegreeMismatch(format!(
            "frame expansion of a degree-{} form",
            a.degree()
        )));
    }
    let fj = frame.eval(pt, 0)?;
    Ok(fj.expand(&a.eval(pt, 0)?)?.iter().map(Jet::value).collect())
}

/// Lazy frame Hodge star of a 1-form.
pub fn hodge3(a: &PForm, frame: &Coframe3) -> Result<PForm> {
    if a.degree() != 1 || a.dim() != 3 {
        return Err(Error::DegreeMismatch(format!(
            "the 3D star acts on 1-forms on a 3-chart, got degree {} on dim {}",
            a.degree(),
            a.dim()
        )));
    }
    let (a, frame) = (a.clone(), frame.clone());
    Ok(PForm::new(3, 2, move |pt, order| {
        frame.eval(pt, order)?.hodge(&a.eval(pt, order)?)
    }))
}

/// The metric of a coframe, `h = e²⊙e² − 4 e¹⊙e³`.
#[derive(Clone, Debug)]
pub struct FrameMetric {
    frame: Coframe3,
}

pub fn metric_from_coframe(frame: &Coframe3) -> FrameMetric {
    FrameMetric { frame: frame.clone() }
}

impl MetricField for FrameMetric {
    fn dim(&self) -> usize {
        3
    }

    fn components(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix> {
        Ok(self.frame.eval(pt, order)?.metric())
    }
}
