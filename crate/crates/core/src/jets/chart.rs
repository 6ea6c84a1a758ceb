use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{Jet, MAX_DIM};

/// Ordered coordinate names of a local chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Arc<[String]>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Chart> {
        if names.is_empty() || names.len() > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "chart must have 1..={MAX_DIM} coordinates, got {}",
                names.len()
            )));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidParameter(format!("duplicate coordinate `{n}`")));
            }
        }
        Ok(Chart { names: names.into() })
    }

    fn fixed(names: &[&str]) -> Chart {
        Chart::new(names).expect("built-in chart")
    }

    /// Base chart `(x, y, t)`.
    pub fn xyt() -> Chart {
        Chart::fixed(&["x", "y", "t"])
    }

    /// Legendre chart `(p, y, t)` used by Classes A, B and C.
    pub fn pyt() -> Chart {
        Chart::fixed(&["p", "y", "t"])
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The chart with one extra coordinate prepended.
    pub fn prepend(&self, name: &str) -> Result<Chart> {
        let mut names = vec![name.to_string()];
        names.extend(self.names.iter().cloned());
        Chart::new(&names)
    }

    /// Drops the first coordinate.
    pub fn tail(&self) -> Result<Chart> {
        Chart::new(&self.names[1..])
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(","))
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A point of a chart plus named constant parameters (such as `ell`).
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    chart: Chart,
    coords: Vec<f64>,
    params: BTreeMap<String, f64>,
}

impl ChartPoint {
    pub fn new(chart: &Chart, coords: &[f64]) -> Result<ChartPoint> {
        if coords.len() != chart.dim() {
            return Err(Error::ChartMismatch(format!(
                "chart {chart} needs {} coordinates, got {}",
                chart.dim(),
                coords.len()
            )));
        }
        Ok(ChartPoint {
            chart: chart.clone(),
            coords: coords.to_vec(),
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, name: &str, value: f64) -> ChartPoint {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    /// Same chart and parameters, different coordinates.
    pub fn moved(&self, coords: &[f64]) -> ChartPoint {
        debug_assert_eq!(coords.len(), self.coords.len());
        ChartPoint {
            chart: self.chart.clone(),
            coords: coords.to_vec(),
            params: self.params.clone(),
        }
    }

    /// Reinterprets the coordinates in another chart of the same dimension.
    pub fn on_chart(&self, chart: &Chart, coords: &[f64]) -> Result<ChartPoint> {
        let mut p = ChartPoint::new(chart, coords)?;
        p.params = self.params.clone();
        Ok(p)
    }

    /// The point of the chart without its first coordinate.
    pub fn tail(&self) -> Result<ChartPoint> {
        let mut p = ChartPoint::new(&self.chart.tail()?, &self.coords[1..])?;
        p.params = self.params.clone();
        Ok(p)
    }

    /// Jet of coordinate `i` at this point.
    pub fn coordinate_jet(&self, i: usize, order: usize) -> Jet {
        Jet::variable(self.dim(), order, i, self.coords[i])
    }

    pub fn constant_jet(&self, value: f64, order: usize) -> Jet {
        Jet::constant(self.dim(), order, value)
    }
}
