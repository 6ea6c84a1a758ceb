use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jets::{Chart, ChartPoint, ScalarField};

const MAX_DRAWS: usize = 1_000_000;
const MIN_ACCEPTANCE: f64 = 0.01;

/// Predicate `expression > threshold` that excludes a singular set.
#[derive(Clone, Debug)]
pub struct Guard {
    label: String,
    field: ScalarField,
    threshold: f64,
}

impl Guard {
    /// Parses `source` against the chart coordinates.
    pub fn parse(chart: &Chart, source: &str, threshold: f64) -> Result<Guard> {
        let names: Vec<&str> = chart.names().iter().map(String::as_str).collect();
        let expr = Expr::parse(source, &names)?;
        Ok(Guard {
            label: format!("{expr} > {threshold}"),
            field: expr.bind(chart, &[])?,
            threshold,
        })
    }

    pub fn from_field(label: &str, field: ScalarField, threshold: f64) -> Guard {
        Guard {
            label: format!("{label} > {threshold}"),
            field,
            threshold,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn holds(&self, pt: &ChartPoint) -> bool {
        matches!(self.field.value(pt), Ok(v) if v > self.threshold)
    }

    /// The same guard on a chart with one coordinate prepended.
    fn prepended(&self) -> Guard {
        let f = self.field.clone();
        Guard {
            label: self.label.clone(),
            field: ScalarField::new(move |pt, order| {
                let map: Vec<usize> = (1..pt.dim()).collect();
                Ok(f.jet(&pt.tail()?, order)?.embed(pt.dim(), &map))
            }),
            threshold: self.threshold,
        }
    }
}

/// Axis-aligned box with guards, seed and point count; sampling is a pure
/// function of these.
#[derive(Clone, Debug)]
pub struct SampleDomain {
    pub chart: Chart,
    pub bounds: Vec<(f64, f64)>,
    pub guards: Vec<Guard>,
    pub seed: u64,
    pub count: usize,
}

impl SampleDomain {
    pub fn new(chart: &Chart, bounds: &[(f64, f64)]) -> SampleDomain {
        SampleDomain {
            chart: chart.clone(),
            bounds: bounds.to_vec(),
            guards: Vec::new(),
            seed: 0,
            count: 100,
        }
    }

    pub fn guard(mut self, source: &str, threshold: f64) -> Result<SampleDomain> {
        self.guards.push(Guard::parse(&self.chart, source, threshold)?);
        Ok(self)
    }

    pub fn with_guard(mut self, guard: Guard) -> SampleDomain {
        self.guards.push(guard);
        self
    }

    pub fn seed(mut self, seed: u64) -> SampleDomain {
        self.seed = seed;
        self
    }

    pub fn count(mut self, count: usize) -> SampleDomain {
        self.count = count;
        self
    }

    pub fn sample(&self) -> Result<Vec<ChartPoint>> {
        sample(self)
    }

    /// The box with a new first coordinate; guards carry over.
    pub fn prepend(&self, name: &str, bounds: (f64, f64)) -> Result<SampleDomain> {
        let mut all = vec![bounds];
        all.extend(self.bounds.iter().copied());
        Ok(SampleDomain {
            chart: self.chart.prepend(name)?,
            bounds: all,
            guards: self.guards.iter().map(Guard::prepended).collect(),
            seed: self.seed,
            count: self.count,
        })
    }
}

/// Uniform rejection sampling in the box; fails when fewer than 1% of the
/// first million draws pass the guards.
pub fn sample(domain: &SampleDomain) -> Result<Vec<ChartPoint>> {
    if domain.bounds.len() != domain.chart.dim() {
        return Err(Error::ChartMismatch(format!(
            "{} bounds for chart {}",
            domain.bounds.len(),
            domain.chart
        )));
    }
    for (i, &(lo, hi)) in domain.bounds.iter().enumerate() {
        if lo >= hi || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "degenerate interval [{lo}, {hi}] for `{}`",
                domain.chart.names()[i]
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(domain.seed);
    let mut out = Vec::with_capacity(domain.count);
    let mut coords = vec![0.0; domain.bounds.len()];
    let mut draws = 0usize;
    while out.len() < domain.count {
        if draws >= MAX_DRAWS && (out.len() as f64) < MIN_ACCEPTANCE * draws as f64 {
            return Err(Error::SamplingExhausted {
                accepted: out.len(),
                draws,
            });
        }
        draws += 1;
        for (c, &(lo, hi)) in coords.iter_mut().zip(&domain.bounds) {
            *c = rng.gen_range(lo..hi);
        }
        let pt = ChartPoint::new(&domain.chart, &coords)?;
        if domain.guards.iter().all(|g| g.holds(&pt)) {
            out.push(pt);
        }
    }
    Ok(out)
}
