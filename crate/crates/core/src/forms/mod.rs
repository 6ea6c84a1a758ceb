//! Exterior calculus on coordinate charts.
//!
//! A [`PForm`] is a lazily evaluated differential form; evaluating it at a
//! point yields a [`FormJet`], whose components are jets in the sorted
//! coordinate basis `dx^{i₁}∧…∧dx^{i_p}` (`i₁ < … < i_p`, lexicographic).

mod frame;
mod metric;

use std::fmt;
use std::sync::Arc;

pub use frame::{frame_expand, hodge3, metric_from_coframe, Coframe3, FrameJet, FrameMetric};
pub use metric::{signature, ComponentMetric, MetricField, Signature};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jets::{Chart, ChartPoint, Jet, ScalarField};

/// Sorted multi-indices of degree `degree` in `dim` variables, lexicographic.
pub fn basis(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, degree, &mut Vec::new(), &mut out);
    out
}

fn position(dim: usize, degree: usize, idx: &[usize]) -> usize {
    basis(dim, degree)
        .iter()
        .position(|b| b == idx)
        .expect("sorted index in basis")
}

/// Components of a p-form at one point, each a jet.
#[derive(Clone, Debug, PartialEq)]
pub struct FormJet {
    dim: usize,
    degree: usize,
    comps: Vec<Jet>,
}

impl FormJet {
    pub fn new(dim: usize, degree: usize, comps: Vec<Jet>) -> Result<FormJet> {
        if degree > dim {
            return Err(Error::DegreeMismatch(format!("degree {degree} on a {dim}-chart")));
        }
        let n = basis(dim, degree).len();
        if comps.len() != n {
            return Err(Error::DegreeMismatch(format!(
                "{}-form on a {dim}-chart needs {n} components, got {}",
                degree,
                comps.len()
            )));
        }
        let order = comps.iter().map(Jet::order).min().unwrap_or(0);
        let comps = comps
            .into_iter()
            .map(|c| if c.order() > order { c.truncate(order) } else { c })
            .collect();
        Ok(FormJet { dim, degree, comps })
    }

    pub fn zero(dim: usize, degree: usize, order: usize) -> FormJet {
        let n = basis(dim, degree).len();
        FormJet {
            dim,
            degree,
            comps: vec![Jet::constant(dim, order, 0.0); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.comps.first().map_or(0, Jet::order)
    }

    pub fn components(&self) -> &[Jet] {
        &self.comps
    }

    /// Component at a sorted multi-index.
    pub fn component(&self, idx: &[usize]) -> &Jet {
        &self.comps[position(self.dim, self.degree, idx)]
    }

    pub fn values(&self) -> Vec<f64> {
        self.comps.iter().map(Jet::value).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.value().abs()).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &FormJet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ChartMismatch(format!(
                "forms on {}- and {}-charts",
                self.dim, other.dim
            )));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "adding a {}-form to a {}-form",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FormJet) -> Result<FormJet> {
        self.check_same(other)?;
        FormJet::new(
            self.dim,
            self.degree,
            self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &FormJet) -> Result<FormJet> {
        self.check_same(other)?;
        FormJet::new(
            self.dim,
            self.degree,
            self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn scale(&self, s: f64) -> FormJet {
        FormJet {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Multiplication by a scalar function.
    pub fn mul_jet(&self, f: &Jet) -> FormJet {
        FormJet::new(self.dim, self.degree, self.comps.iter().map(|c| c * f).collect()).expect("same shape")
    }

    pub fn truncate(&self, order: usize) -> FormJet {
        FormJet {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.truncate(order)).collect(),
        }
    }

    /// Re-expresses a form in a larger chart (see [`Jet::embed`]).
    pub fn embed(&self, new_dim: usize, map: &[usize]) -> FormJet {
        let mut out = FormJet::zero(new_dim, self.degree, self.order());
        for (idx, c) in basis(self.dim, self.degree).iter().zip(&self.comps) {
            let mapped: Vec<usize> = idx.iter().map(|&i| map[i]).collect();
            let (sorted, sign) = sort_with_sign(&mapped);
            let k = position(new_dim, self.degree, &sorted);
            out.comps[k] = c.embed(new_dim, map).scale(sign);
        }
        out
    }

    /// Graded-antisymmetric wedge product.
    pub fn wedge(&self, other: &FormJet) -> Result<FormJet> {
        if self.dim != other.dim {
            return Err(Error::ChartMismatch(format!(
                "wedge of forms on {}- and {}-charts",
                self.dim, other.dim
            )));
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::DegreeMismatch(format!(
                "wedge degree {degree} exceeds chart dimension {}",
                self.dim
            )));
        }
        let order = self.order().min(other.order());
        let mut out = FormJet::zero(self.dim, degree, order);
        let left = basis(self.dim, self.degree);
        let right = basis(self.dim, other.degree);
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if a.iter().any(|x| b.contains(x)) {
                    continue;
                }
                let inversions = a.iter().map(|x| b.iter().filter(|&y| y < x).count()).sum::<usize>();
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                let mut k: Vec<usize> = a.iter().chain(b).copied().collect();
                k.sort_unstable();
                let pos = position(self.dim, degree, &k);
                let term = (&self.comps[i] * &other.comps[j]).scale(sign);
                out.comps[pos] += &term;
            }
        }
        Ok(out)
    }

    /// Exterior derivative; the result has one order less.
    pub fn d(&self) -> Result<FormJet> {
        if self.degree >= self.dim {
            return Ok(FormJet::zero(self.dim, self.dim, self.order().saturating_sub(1)));
        }
        if self.order() == 0 {
            return Err(Error::OrderTooHigh { requested: 1, max: 0 });
        }
        let order = self.order() - 1;
        let mut out = FormJet::zero(self.dim, self.degree + 1, order);
        for (idx, c) in basis(self.dim, self.degree).iter().zip(&self.comps) {
            for v in 0..self.dim {
                if idx.contains(&v) {
                    continue;
                }
                let before = idx.iter().filter(|&&i| i < v).count();
                let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
                let mut k = idx.clone();
                k.push(v);
                k.sort_unstable();
                let pos = position(self.dim, self.degree + 1, &k);
                out.comps[pos] += &c.partial(v).scale(sign);
            }
        }
        Ok(out)
    }
}

fn sort_with_sign(idx: &[usize]) -> (Vec<usize>, f64) {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

type FormFn = dyn Fn(&ChartPoint, usize) -> Result<FormJet> + Send + Sync;

/// A differential form whose components are jet-evaluable fields.
#[derive(Clone)]
pub struct PForm {
    dim: usize,
    degree: usize,
    eval: Arc<FormFn>,
}

impl fmt::Debug for PForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PForm(degree {}, dim {})", self.degree, self.dim)
    }
}

impl PForm {
    pub fn new(
        dim: usize,
        degree: usize,
        eval: impl Fn(&ChartPoint, usize) -> Result<FormJet> + Send + Sync + 'static,
    ) -> PForm {
        assert!(degree <= dim, "form degree exceeds dimension");
        PForm {
            dim,
            degree,
            eval: Arc::new(eval),
        }
    }

    /// Builds a form from its components in the sorted basis.
    pub fn from_components(dim: usize, degree: usize, comps: Vec<ScalarField>) -> Result<PForm> {
        let n = basis(dim, degree).len();
        if comps.len() != n {
            return Err(Error::DegreeMismatch(format!(
                "{degree}-form on a {dim}-chart needs {n} components, got {}",
                comps.len()
            )));
        }
        Ok(PForm::new(dim, degree, move |pt, order| {
            let jets = comps.iter().map(|c| c.jet(pt, order)).collect::<Result<Vec<_>>>()?;
            FormJet::new(dim, degree, jets)
        }))
    }

    /// Components given as expression sources over the chart coordinates.
    pub fn from_exprs(chart: &Chart, degree: usize, sources: &[&str], params: &[(&str, f64)]) -> Result<PForm> {
        let mut names: Vec<&str> = chart.names().iter().map(String::as_str).collect();
        names.extend(params.iter().map(|(n, _)| *n));
        let comps = sources
            .iter()
            .map(|s| Expr::parse(s, &names)?.bind(chart, params))
            .collect::<Result<Vec<_>>>()?;
        PForm::from_components(chart.dim(), degree, comps)
    }

    /// A function viewed as a 0-form.
    pub fn function(dim: usize, f: ScalarField) -> PForm {
        PForm::new(dim, 0, move |pt, order| FormJet::new(dim, 0, vec![f.jet(pt, order)?]))
    }

    pub fn zero(dim: usize, degree: usize) -> PForm {
        PForm::new(dim, degree, move |_, order| Ok(FormJet::zero(dim, degree, order)))
    }

    /// The coordinate differential `dx^i`.
    pub fn coordinate_differential(dim: usize, i: usize) -> PForm {
        PForm::new(dim, 1, move |pt, order| {
            let mut comps = vec![Jet::constant(dim, order, 0.0); dim];
            comps[i] = Jet::constant(dim, order, 1.0);
            let _ = pt;
            FormJet::new(dim, 1, comps)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, pt: &ChartPoint, order: usize) -> Result<FormJet> {
        if pt.dim() != self.dim {
            return Err(Error::ChartMismatch(format!(
                "{}-dimensional form evaluated on chart {}",
                self.dim,
                pt.chart()
            )));
        }
        (self.eval)(pt, order)
    }

    /// The component at basis position `i` as a scalar field.
    pub fn component(&self, i: usize) -> ScalarField {
        let form = self.clone();
        ScalarField::new(move |pt, order| Ok(form.eval(pt, order)?.comps[i].clone()))
    }

    pub fn add(&self, other: &PForm) -> Result<PForm> {
        self.check_same(other)?;
        let (a, b) = (self.clone(), other.clone());
        Ok(PForm::new(self.dim, self.degree, move |pt, order| {
            a.eval(pt, order)?.add(&b.eval(pt, order)?)
        }))
    }

    pub fn sub(&self, other: &PForm) -> Result<PForm> {
        self.check_same(other)?;
        let (a, b) = (self.clone(), other.clone());
        Ok(PForm::new(self.dim, self.degree, move |pt, order| {
            a.eval(pt, order)?.sub(&b.eval(pt, order)?)
        }))
    }

    pub fn scale(&self, s: f64) -> PForm {
        let a = self.clone();
        PForm::new(self.dim, self.degree, move |pt, order| Ok(a.eval(pt, order)?.scale(s)))
    }

    pub fn mul_field(&self, f: &ScalarField) -> PForm {
        let (a, f) = (self.clone(), f.clone());
        PForm::new(self.dim, self.degree, move |pt, order| {
            Ok(a.eval(pt, order)?.mul_jet(&f.jet(pt, order)?))
        })
    }

    fn check_same(&self, other: &PForm) -> Result<()> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "({}, {}) vs ({}, {}) (degree, dim)",
                self.degree, self.dim, other.degree, other.dim
            )));
        }
        Ok(())
    }
}

/// Lazy wedge product.
pub fn wedge(a: &PForm, b: &PForm) -> Result<PForm> {
    if a.dim != b.dim {
        return Err(Error::ChartMismatch(format!(
            "wedge of {}- and {}-dimensional forms",
            a.dim, b.dim
        )));
    }
    if a.degree + b.degree > a.dim {
        return Err(Error::DegreeMismatch(format!(
            "wedge degree {} exceeds chart dimension {}",
            a.degree + b.degree,
            a.dim
        )));
    }
    let (a, b) = (a.clone(), b.clone());
    Ok(PForm::new(a.dim, a.degree + b.degree, move |pt, order| {
        a.eval(pt, order)?.wedge(&b.eval(pt, order)?)
    }))
}

/// Lazy exterior derivative.
pub fn ext_d(a: &PForm) -> PForm {
    let a = a.clone();
    let degree = (a.degree + 1).min(a.dim);
    PForm::new(a.dim, degree, move |pt, order| a.eval(pt, order + 1)?.d())
}
