use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jets::linalg::JetMatrix;
use crate::jets::{Chart, ChartPoint, ScalarField};

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.zero == 0 && self.negative == 1
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = "+".repeat(self.positive) + &"-".repeat(self.negative) + &"0".repeat(self.zero);
        write!(f, "({s})")
    }
}

/// Signature of a symmetric matrix; eigenvalues below `1e-12` times the
/// largest magnitude count as zero.
pub fn signature(values: &[Vec<f64>]) -> Signature {
    let n = values.len();
    let m = DMatrix::from_fn(n, n, |i, j| values[i][j]);
    let eig = SymmetricEigen::new(m).eigenvalues;
    let scale = eig.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let tiny = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for &e in eig.iter() {
        if e > tiny {
            sig.positive += 1;
        } else if e < -tiny {
            sig.negative += 1;
        } else {
            sig.zero += 1;
        }
    }
    sig
}

/// A pseudo-Riemannian metric whose components can be evaluated as jets.
pub trait MetricField: Send + Sync {
    fn dim(&self) -> usize;

    /// Component matrix `g_ab`, symmetric, evaluated to `order`.
    fn components(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix>;

    fn values(&self, pt: &ChartPoint) -> Result<Vec<Vec<f64>>> {
        let m = self.components(pt, 0)?;
        Ok(m.iter().map(|r| r.iter().map(|j| j.value()).collect()).collect())
    }

    fn signature(&self, pt: &ChartPoint) -> Result<Signature> {
        Ok(signature(&self.values(pt)?))
    }
}

impl<M: MetricField + ?Sized> MetricField for Arc<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn components(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix> {
        (**self).components(pt, order)
    }
}

/// Metric given by its upper-triangular component fields.
#[derive(Clone, Debug)]
pub struct ComponentMetric {
    dim: usize,
    upper: Vec<ScalarField>,
}

fn upper_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl ComponentMetric {
    /// Components `g_ij` for `i <= j`, row by row.
    pub fn from_upper(dim: usize, upper: Vec<ScalarField>) -> Result<ComponentMetric> {
        if upper.len() != dim * (dim + 1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "a {dim}-dimensional metric needs {} upper components, got {}",
                dim * (dim + 1) / 2,
                upper.len()
            )));
        }
        Ok(ComponentMetric { dim, upper })
    }

    /// Full matrix of expression sources; the two triangles must agree
    /// expression for expression.
    pub fn from_exprs(chart: &Chart, rows: &[Vec<&str>], params: &[(&str, f64)]) -> Result<ComponentMetric> {
        let dim = chart.dim();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter(format!("metric matrix must be {dim}x{dim}")));
        }
        let mut names: Vec<&str> = chart.names().iter().map(String::as_str).collect();
        names.extend(params.iter().map(|(n, _)| *n));
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| Expr::parse(s, &names)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut upper = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                if parsed[i][j] != parsed[j][i] {
                    return Err(Error::NonSymmetricMetric(i, j));
                }
                upper.push(parsed[i][j].bind(chart, params)?);
            }
        }
        ComponentMetric::from_upper(dim, upper)
    }

    pub fn component(&self, i: usize, j: usize) -> &ScalarField {
        &self.upper[upper_index(self.dim, i, j)]
    }
}

impl MetricField for ComponentMetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn components(&self, pt: &ChartPoint, order: usize) -> Result<JetMatrix> {
        if pt.dim() != self.dim {
            return Err(Error::ChartMismatch(format!(
                "{}-dimensional metric at a point of {}",
                self.dim,
                pt.chart()
            )));
        }
        let upper = self
            .upper
            .iter()
            .map(|f| f.jet(pt, order))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| upper[upper_index(self.dim, i, j)].clone())
                    .collect()
            })
            .collect())
    }
}
