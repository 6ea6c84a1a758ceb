use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Family;

/// What a run does; chosen by the subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Verify,
    Lift,
    Limit,
    Eval,
}

impl Mode {
    fn default_checks(self) -> Vec<Check> {
        match self {
            Mode::Verify => vec![Check::Gt, Check::Monopole, Check::Weyl],
            Mode::Lift => vec![Check::Em, Check::Maxwell],
            Mode::Limit => vec![Check::Limit],
            Mode::Eval => vec![],
        }
    }

    fn default_tol(self) -> f64 {
        match self {
            Mode::Verify | Mode::Eval => 1e-7,
            Mode::Lift => 1e-6,
            Mode::Limit => 0.4,
        }
    }
}

/// A named residual check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Gt,
    Monopole,
    Hypercr,
    Constraints,
    Psi,
    Weyl,
    Em,
    Maxwell,
    Invariants,
    Limit,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Gt,
        Check::Monopole,
        Check::Hypercr,
        Check::Constraints,
        Check::Psi,
        Check::Weyl,
        Check::Em,
        Check::Maxwell,
        Check::Invariants,
        Check::Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Gt => "gt",
            Check::Monopole => "monopole",
            Check::Hypercr => "hypercr",
            Check::Constraints => "constraints",
            Check::Psi => "psi",
            Check::Weyl => "weyl",
            Check::Em => "em",
            Check::Maxwell => "maxwell",
            Check::Invariants => "invariants",
            Check::Limit => "limit",
        }
    }

    fn allowed_in(self, mode: Mode) -> bool {
        match self {
            Check::Em | Check::Maxwell => mode == Mode::Lift,
            Check::Invariants => matches!(mode, Mode::Verify | Mode::Lift),
            Check::Limit => mode == Mode::Limit,
            _ => mode == Mode::Verify,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check `{s}`")))
    }
}

/// Parses a comma-separated check list.
pub fn parse_checks(s: &str) -> Result<Vec<Check>> {
    s.split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(str::parse)
        .collect()
}

/// Which chart a lift is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartChoice {
    Alpha,
    Regular,
}

/// A configuration layer: every field optional, so JSON files and flags can
/// be stacked with [`PartialConfig::overlay`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialConfig {
    pub case: Option<String>,
    pub ell: Option<f64>,
    pub beta: Option<String>,
    #[serde(rename = "F")]
    pub f_class_b: Option<String>,
    #[serde(rename = "K")]
    pub k_class_c: Option<String>,
    #[serde(rename = "H")]
    pub h: Option<String>,
    #[serde(rename = "A")]
    pub a: Option<String>,
    #[serde(rename = "B")]
    pub b: Option<String>,
    pub c: Option<String>,
    pub psi_k: Option<String>,
    pub f: Option<String>,
    pub chart: Option<ChartChoice>,
    pub checks: Option<Vec<Check>>,
    #[serde(alias = "count")]
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub bounds: Option<Vec<[f64; 2]>>,
    pub ells: Option<Vec<f64>>,
    pub expr: Option<String>,
    pub vars: Option<Vec<String>>,
    pub at: Option<Vec<f64>>,
    pub order: Option<usize>,
    pub out: Option<PathBuf>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($field:ident),*) => {
        PartialConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl PartialConfig {
    pub fn from_json_file(path: &Path) -> Result<PartialConfig> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        PartialConfig::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<PartialConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: PartialConfig) -> PartialConfig {
        let base = self;
        overlay_fields!(base, top;
            case, ell, beta, f_class_b, k_class_c, h, a, b, c, psi_k, f, chart, checks,
            points, seed, tol, bounds, ells, expr, vars, at, order, out)
    }

    /// Fills defaults for `mode` and validates.
    pub fn resolve(self, mode: Mode) -> Result<RunConfig> {
        let case = self.case.clone().unwrap_or_else(|| "heisenberg".into());
        let checks = self.checks.clone().unwrap_or_else(|| mode.default_checks());
        for c in &checks {
            if !c.allowed_in(mode) {
                return Err(Error::Config(format!("check `{c}` is not available in {mode:?} mode")));
            }
        }
        let tol = self.tol.unwrap_or_else(|| mode.default_tol());
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
        }
        let points = self.points.unwrap_or(200);
        if points == 0 {
            return Err(Error::Config("need at least one point".into()));
        }
        let cfg = RunConfig {
            mode,
            case,
            ell: self.ell,
            beta: self.beta,
            f_class_b: self.f_class_b,
            k_class_c: self.k_class_c,
            h: self.h,
            a: self.a,
            b: self.b,
            c: self.c.unwrap_or_else(|| "0".into()),
            psi_k: self.psi_k,
            f: self.f,
            chart: self.chart.unwrap_or(ChartChoice::Regular),
            checks,
            points,
            seed: self.seed.unwrap_or(0),
            tol,
            bounds: self.bounds,
            ells: self.ells.unwrap_or_else(|| vec![100.0, 1000.0, 10000.0]),
            expr: self.expr,
            vars: self.vars.unwrap_or_else(|| vec!["x".into(), "y".into(), "t".into()]),
            at: self.at,
            order: self.order.unwrap_or(2),
            out: self.out,
        };
        if mode == Mode::Eval {
            if cfg.expr.is_none() || cfg.at.is_none() {
                return Err(Error::Config("eval needs an expression and a point".into()));
            }
        } else if mode != Mode::Limit {
            cfg.family()?;
        }
        Ok(cfg)
    }
}

/// A complete, validated run configuration; echoed into the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub f_class_b: Option<String>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k_class_c: Option<String>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    pub c: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_k: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    pub chart: ChartChoice,
    pub checks: Vec<Check>,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
    pub ells: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    pub vars: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<f64>>,
    pub order: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// The base family named by `case`, with defaults for missing parameters.
    pub fn family(&self) -> Result<Family> {
        let text = |v: &Option<String>, default: &str| v.clone().unwrap_or_else(|| default.to_string());
        let required = |v: &Option<String>, name: &str| {
            v.clone()
                .ok_or_else(|| Error::Config(format!("case `{}` needs --{name}", self.case)))
        };
        Ok(match self.case.as_str() {
            "heisenberg" => Family::Heisenberg {
                ell: self.ell.unwrap_or(1.0),
            },
            "class-a" => Family::ClassA {
                beta: text(&self.beta, "y^2-2*t"),
            },
            "class-b" => Family::ClassB {
                f: text(&self.f_class_b, "1"),
            },
            "class-c" => Family::ClassC {
                k: text(&self.k_class_c, "s"),
            },
            "from-H" => Family::FromH {
                h: required(&self.h, "H")?,
            },
            "from-G" => Family::FromG {
                a: required(&self.a, "A")?,
                b: required(&self.b, "B")?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown case `{other}` (expected heisenberg, class-a, class-b, class-c, from-H or from-G)"
                )))
            }
        })
    }
}
