use serde::Serialize;

use crate::run::config::RunConfig;

pub const SCHEMA: u32 = 1;

/// Statistics of one residual over the sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub worst_point: Vec<f64>,
    pub tol: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn of(passed: bool) -> Verdict {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl CheckReport {
    /// Aggregates per-point values in sample order. NaN counts as a failure.
    pub fn from_values(name: &str, values: &[f64], points: &[Vec<f64>], tol: f64) -> CheckReport {
        let mut worst = 0;
        for (i, v) in values.iter().enumerate() {
            if v.is_nan() || (!values[worst].is_nan() && *v > values[worst]) {
                worst = i;
                if v.is_nan() {
                    break;
                }
            }
        }
        let max = values.get(worst).copied().unwrap_or(0.0);
        let mean = if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        CheckReport {
            name: name.to_string(),
            max,
            mean,
            worst_point: points.get(worst).cloned().unwrap_or_default(),
            tol,
            verdict: Verdict::of(max <= tol),
        }
    }
}

/// Sign and normalization choices the residuals are computed with.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conventions {
    pub ricci: &'static str,
    pub einstein_maxwell: &'static str,
    pub field_norm: &'static str,
    pub orientation: &'static str,
    pub ell_sign: String,
}

impl Default for Conventions {
    fn default() -> Conventions {
        Conventions {
            ricci: "R_bd = R^a_bad; AdS of radius l has R_ab = -3/l^2 g_ab",
            einstein_maxwell: "R_ab + 3/l^2 g_ab + 2 F_ac F_bd g^cd - 1/2 |F|^2 g_ab = 0",
            field_norm: "|F|^2 = F_ab F^ab",
            orientation: "eps_0123 = +1 in chart order",
            ell_sign: "lift parameter chosen so that V = -2/l".into(),
        }
    }
}

/// How a lift was set up from the base.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftInfo {
    pub ell: f64,
    pub chart: String,
    pub adjustment: String,
    pub gauge_residual: f64,
    pub gt_residual: f64,
    pub psi_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRowReport {
    pub ell: f64,
    pub metric_error: f64,
    pub doubled_error: f64,
    pub ratio: f64,
    pub field_norm: f64,
    pub field_error: f64,
    pub limit_riemann: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitInfo {
    pub rows: Vec<LimitRowReport>,
    pub diverges: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Derivative {
    pub wrt: Vec<String>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalInfo {
    pub expr: String,
    pub point: Vec<f64>,
    pub value: f64,
    pub derivatives: Vec<Derivative>,
}

/// The JSON report. Field order here is the key order on disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: RunConfig,
    pub structure: String,
    pub chart: Vec<String>,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalInfo>,
    pub checks: Vec<CheckReport>,
    pub conventions: Conventions,
    pub verdict: Verdict,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The JSON with the wall time zeroed, for byte comparisons.
    pub fn to_stable_json(&self) -> String {
        VerificationReport {
            wall_time_s: 0.0,
            ..self.clone()
        }
        .to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_picks_first_worst_point() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        let r = CheckReport::from_values("gt", &[1e-9, 3e-8, 3e-8], &pts, 1e-7);
        assert_eq!(r.max, 3e-8);
        assert_eq!(r.worst_point, vec![1.0]);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = CheckReport::from_values("gt", &[1e-9, f64::NAN, 5.0], &pts, 1e-7);
        assert!(r.max.is_nan());
        assert_eq!(r.verdict, Verdict::Fail);
    }
}
