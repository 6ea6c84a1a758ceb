//! The verification driver behind the command-line tool: resolve a
//! configuration, sample, run the requested checks, and report.

mod config;
mod report;

pub use config::{parse_checks, ChartChoice, Check, Mode, PartialConfig, RunConfig};
pub use report::{
    CheckReport, Conventions, Derivative, EvalInfo, LiftInfo, LimitInfo, LimitRowReport, Verdict, VerificationReport,
    SCHEMA,
};

use std::time::Instant;

use rayon::prelude::*;

use crate::curv::{curvature, em_residual, field_invariant, maxwell_residual};
use crate::error::{Error, Result};
use crate::ew::{
    constraints_residual, gauge_transform, gt_residual, hcr_residual, hypercr_residual, max_abs, monopole_residual,
    psi_residual, EwStructure, WeightedForm,
};
use crate::expr::Expr;
use crate::families::Family;
use crate::forms::MetricField;
use crate::jets::{Chart, ChartPoint, SampleDomain};
use crate::lift::{
    build_alpha, build_regular, flat_limit, gauge_fix, limit_family, psi_c_omega, psi_heisenberg, LiftChart,
    LiftConfig, Spacetime,
};

/// Process exit status for a finished run.
pub fn exit_code(report: &VerificationReport) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

/// Process exit status for a run that could not finish.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Syntax { .. } | Error::UnknownIdentifier(_) | Error::InvalidParameter(_) => 2,
        Error::GaugeViolation(_) | Error::PsiResidual(_) | Error::HeatResidual(_) => 1,
        _ => 3,
    }
}

/// Runs under the thread cap from `EWBENCH_THREADS`, if set.
pub fn run(cfg: &RunConfig) -> Result<VerificationReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("EWBENCH_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Config(format!("EWBENCH_THREADS must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))?;
    pool.install(|| run_here(cfg))
}

fn run_here(cfg: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = match cfg.mode {
        Mode::Verify => verify(cfg)?,
        Mode::Lift => lift(cfg)?,
        Mode::Limit => limit(cfg)?,
        Mode::Eval => eval(cfg)?,
    };
    report.verdict = Verdict::of(report.checks.iter().all(|c| c.verdict == Verdict::Pass));
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn blank_report(cfg: &RunConfig, structure: String, chart: &Chart, n_points: usize) -> VerificationReport {
    VerificationReport {
        schema: SCHEMA,
        config: cfg.clone(),
        structure,
        chart: chart.names().to_vec(),
        n_points,
        lift: None,
        limit: None,
        eval: None,
        checks: Vec::new(),
        conventions: Conventions::default(),
        verdict: Verdict::Pass,
        wall_time_s: 0.0,
    }
}

/// Evaluates `f` at every point in parallel; results keep sample order.
fn per_point<F>(points: &[ChartPoint], f: F) -> Result<Vec<f64>>
where
    F: Fn(&ChartPoint) -> Result<f64> + Send + Sync,
{
    points.par_iter().map(f).collect()
}

fn check_report(check: Check, values: &[f64], points: &[ChartPoint], tol: f64) -> CheckReport {
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    CheckReport::from_values(check.name(), values, &coords, tol)
}

fn base_domain(cfg: &RunConfig, family: &Family) -> Result<SampleDomain> {
    let mut domain = family.default_domain()?.seed(cfg.seed).count(cfg.points);
    if let Some(bounds) = &cfg.bounds {
        if bounds.len() != domain.chart.dim() {
            return Err(Error::Config(format!(
                "expected {} bounds for chart {}, got {}",
                domain.chart.dim(),
                domain.chart,
                bounds.len()
            )));
        }
        domain.bounds = bounds.iter().map(|[lo, hi]| (*lo, *hi)).collect();
    }
    Ok(domain)
}

/// The family structure, gauge-transformed by `f` when one is given.
fn base_structure(cfg: &RunConfig, family: &Family, domain: &SampleDomain) -> Result<EwStructure> {
    let s = family.structure(domain)?;
    match &cfg.f {
        None => Ok(s),
        Some(src) => {
            let names: Vec<&str> = s.chart.names().iter().map(String::as_str).collect();
            let f = Expr::parse(src, &names)?.bind(&s.chart, &[])?;
            let mut gauged = gauge_transform(&s, &f)?;
            gauged.potentials = None;
            Ok(gauged)
        }
    }
}

/// `ψ = c ω` for constant `c`; otherwise `c(x) ω + d(c + k)`.
fn psi_form(cfg: &RunConfig, base: &EwStructure) -> Result<WeightedForm> {
    if let Ok(c) = cfg.c.trim().parse::<f64>() {
        if cfg.psi_k.is_none() {
            return Ok(psi_c_omega(base, c));
        }
    }
    if base.chart.index_of("x").is_none() {
        return Err(Error::Config("a non-constant c(x) needs a base on (x, y, t)".into()));
    }
    psi_heisenberg(base, &cfg.c, cfg.psi_k.as_deref().unwrap_or("0"))
}

fn verify(cfg: &RunConfig) -> Result<VerificationReport> {
    let family = cfg.family()?;
    let domain = base_domain(cfg, &family)?;
    let s = base_structure(cfg, &family, &domain)?;
    let points = domain.sample()?;
    let h_field = match &family {
        Family::FromH { h } => Some(Expr::parse(h, &["x", "y", "t"])?.bind(&Chart::xyt(), &[])?),
        _ => None,
    };
    let mut report = blank_report(cfg, s.provenance.clone(), &s.chart, points.len());
    for &check in &cfg.checks {
        let values = match check {
            Check::Gt => per_point(&points, |p| Ok(max_abs(&gt_residual(&s, p)?)))?,
            Check::Monopole => per_point(&points, |p| Ok(monopole_residual(&s, p)?.max_abs()))?,
            Check::Weyl => per_point(&points, |p| {
                let (compat, ew) = crate::curv::weyl_ricci_residual(&s, p)?;
                Ok(compat.max(ew))
            })?,
            Check::Hypercr => {
                let (u, w) = s.potentials.clone().ok_or_else(|| {
                    Error::Config(format!(
                        "hypercr needs a structure built from (u, w); {} is not",
                        s.provenance
                    ))
                })?;
                per_point(&points, |p| {
                    let (a, b) = hypercr_residual(&u, &w, p)?;
                    let hcr = match &h_field {
                        Some(h) => hcr_residual(h, p)?.abs(),
                        None => 0.0,
                    };
                    Ok(a.abs().max(b.abs()).max(hcr))
                })?
            }
            Check::Constraints => {
                let h = h_field
                    .as_ref()
                    .ok_or_else(|| Error::Config("constraints need case from-H".into()))?;
                per_point(&points, |p| {
                    let (nl, lin) = constraints_residual(h, p)?;
                    Ok(nl.abs().max(lin.abs()))
                })?
            }
            Check::Psi => {
                let psi = psi_form(cfg, &s)?;
                per_point(&points, |p| Ok(psi_residual(&psi, &s, p)?.max_abs()))?
            }
            Check::Invariants => {
                let h = s.metric();
                per_point(&points, |p| {
                    let sig = h.signature(p)?;
                    Ok(if sig.positive == 2 && sig.negative == 1 {
                        0.0
                    } else {
                        1.0
                    })
                })?
            }
            Check::Em | Check::Maxwell | Check::Limit => unreachable!("rejected by config validation"),
        };
        report.checks.push(check_report(check, &values, &points, cfg.tol));
    }
    Ok(report)
}

/// Chooses `ℓ` for the lift and puts the base in the gauge `V = −2/ℓ`.
fn lift_parameters(
    cfg: &RunConfig,
    family: &Family,
    base: EwStructure,
    domain: &SampleDomain,
) -> Result<(EwStructure, f64, String)> {
    let probe = domain.clone().count(domain.count.min(16)).sample()?;
    let vs = probe.iter().map(|p| base.v.value(p)).collect::<Result<Vec<f64>>>()?;
    let v0 = vs[0];
    if v0 == 0.0 || !v0.is_finite() {
        return Err(Error::GaugeViolation(format!(
            "V = {v0} at {:?}; no ℓ gives V = −2/ℓ",
            probe[0].coords()
        )));
    }
    let natural = -2.0 / v0;
    let spread = vs.iter().fold(0.0f64, |m, v| m.max((v - v0).abs()));
    let constant = spread <= 1e-12 * v0.abs().max(1.0);
    let requested = match family {
        Family::Heisenberg { .. } => None,
        _ => cfg.ell,
    };
    if constant {
        if let Family::Heisenberg { ell } = family {
            return Ok((
                base,
                natural,
                format!("heisenberg has V = +2/l with l = {ell}; lifted with l = {natural}"),
            ));
        }
        return match requested {
            None => Ok((base, natural, format!("V = {v0} is constant; l = -2/V = {natural}"))),
            Some(l) if l * natural > 0.0 && l != natural => Ok((
                gauge_fix(&base, l)?,
                l,
                format!("constant rescaling f = ln(-lV/2) to reach l = {l}"),
            )),
            Some(l) if l == natural => Ok((base, natural, format!("l = {l} matches V = {v0}"))),
            Some(l) => Ok((
                base,
                natural,
                format!("requested l = {l} has the wrong sign for V = {v0}; lifted with l = {natural}"),
            )),
        };
    }
    let (ell, note) = match requested {
        Some(l) if l * natural > 0.0 => (l, String::new()),
        Some(l) => (-l, format!("requested l = {l} has the wrong sign for V; ")),
        None => (natural, String::new()),
    };
    if vs.iter().any(|v| v * ell >= 0.0) {
        return Err(Error::GaugeViolation(
            "V changes sign on the domain; no single gauge V = −2/ℓ".into(),
        ));
    }
    Ok((
        gauge_fix(&base, ell)?,
        ell,
        format!("{note}V is not constant; gauge fixed with f = ln(-lV/2) at l = {ell}"),
    ))
}

fn lift(cfg: &RunConfig) -> Result<VerificationReport> {
    let family = cfg.family()?;
    let domain = base_domain(cfg, &family)?;
    let base = base_structure(cfg, &family, &domain)?;
    let (base, ell, adjustment) = lift_parameters(cfg, &family, base, &domain)?;
    let psi = psi_form(cfg, &base)?;
    let lc = LiftConfig::new(base, psi, ell, domain.clone());
    let hyp = lc.validate()?;
    let st = match cfg.chart {
        ChartChoice::Alpha => build_alpha(&lc)?,
        ChartChoice::Regular => build_regular(&lc)?,
    };
    let points = st.domain(&domain)?.sample()?;
    let mut report = blank_report(cfg, st.base().provenance.clone(), st.chart(), points.len());
    report.conventions.ell_sign = format!("lift parameter chosen so that V = -2/l: {adjustment}");
    report.lift = Some(LiftInfo {
        ell,
        chart: st.kind().coordinate().to_string(),
        adjustment,
        gauge_residual: hyp.gauge,
        gt_residual: hyp.gt,
        psi_residual: hyp.psi,
    });
    let a = st.potential();
    for &check in &cfg.checks {
        let values = match check {
            Check::Em => per_point(&points, |p| {
                let r = em_residual(&st, &a, ell, p)?;
                Ok(r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())))
            })?,
            Check::Maxwell => per_point(&points, |p| Ok(maxwell_residual(&a, &st, p)?.max_abs()))?,
            Check::Invariants => per_point(&points, |p| chart_discrepancy(&st, p))?,
            _ => unreachable!("rejected by config validation"),
        };
        report.checks.push(check_report(check, &values, &points, cfg.tol));
    }
    Ok(report)
}

/// Relative disagreement of the Kretschmann scalar and `|F|²` between the
/// two charts at matched points; 1 when the metric is not Lorentzian.
fn chart_discrepancy(st: &Spacetime, p: &ChartPoint) -> Result<f64> {
    let sig = st.signature(p)?;
    if !(sig.positive == 3 && sig.negative == 1) {
        return Ok(1.0);
    }
    let other_kind = match st.kind() {
        LiftChart::Alpha => LiftChart::Regular,
        LiftChart::Regular => LiftChart::Alpha,
    };
    let other = st.in_chart(other_kind);
    let q = st.matched_point(p)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let k = rel(curvature(st, p)?.kretschmann, curvature(&other, &q)?.kretschmann);
    let f = rel(
        field_invariant(&st.potential(), st, p)?,
        field_invariant(&other.potential(), &other, &q)?,
    );
    Ok(k.max(f))
}

fn limit(cfg: &RunConfig) -> Result<VerificationReport> {
    let family = limit_family(&cfg.case)?;
    let base_chart = match cfg.case.as_str() {
        "class-b" => Chart::pyt(),
        _ => Chart::xyt(),
    };
    let chart = base_chart.prepend("r")?;
    let bounds: Vec<(f64, f64)> = match &cfg.bounds {
        Some(b) if b.len() == 4 => b.iter().map(|[lo, hi]| (*lo, *hi)).collect(),
        Some(b) => {
            return Err(Error::Config(format!(
                "expected 4 bounds for the limit chart, got {}",
                b.len()
            )))
        }
        None => vec![(-1.0, 1.0); 4],
    };
    let domain = SampleDomain::new(&chart, &bounds).seed(cfg.seed).count(cfg.points);
    let lim = flat_limit(&*family, &cfg.ells, &domain)?;
    let mut report = blank_report(cfg, format!("limit family {}", cfg.case), &chart, domain.count);
    // Per ℓ: distance of the error ratio from 4, or the log growth of |F| along the sequence.
    let values: Vec<f64> = lim
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let growth = if i == 0 {
                0.0
            } else {
                (row.field_norm / lim.rows[i - 1].field_norm).ln().max(0.0)
            };
            (row.ratio - 4.0).abs().max(growth)
        })
        .collect();
    let ells: Vec<Vec<f64>> = cfg.ells.iter().map(|l| vec![*l]).collect();
    for &check in &cfg.checks {
        report
            .checks
            .push(CheckReport::from_values(check.name(), &values, &ells, cfg.tol));
    }
    report.limit = Some(LimitInfo {
        rows: lim
            .rows
            .iter()
            .map(|r| LimitRowReport {
                ell: r.ell,
                metric_error: r.metric_error,
                doubled_error: r.doubled_error,
                ratio: r.ratio,
                field_norm: r.field_norm,
                field_error: r.field_error,
                limit_riemann: r.limit_riemann,
            })
            .collect(),
        diverges: lim.diverges,
    });
    Ok(report)
}

/// Nondecreasing index tuples of length `k` over `dim` variables.
fn multi_indices(dim: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in multi_indices(dim, k - 1) {
        let from = head.last().copied().unwrap_or(0);
        for i in from..dim {
            let mut next = head.clone();
            next.push(i);
            out.push(next);
        }
    }
    out
}

fn eval(cfg: &RunConfig) -> Result<VerificationReport> {
    let src = cfg.expr.as_deref().expect("checked by resolve");
    let at = cfg.at.as_deref().expect("checked by resolve");
    let chart = Chart::new(&cfg.vars)?;
    let names: Vec<&str> = cfg.vars.iter().map(String::as_str).collect();
    let expr = Expr::parse(src, &names)?;
    let pt = ChartPoint::new(&chart, at)?;
    let jet = expr.bind(&chart, &[])?.jet(&pt, cfg.order)?;
    let derivatives = (1..=cfg.order)
        .flat_map(|k| multi_indices(chart.dim(), k))
        .map(|idx| Derivative {
            wrt: idx.iter().map(|&i| cfg.vars[i].clone()).collect(),
            value: jet.derivative(&idx),
        })
        .collect();
    let mut report = blank_report(cfg, "expression".into(), &chart, 1);
    report.eval = Some(EvalInfo {
        expr: expr.to_string(),
        point: at.to_vec(),
        value: jet.value(),
        derivatives,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(mode: Mode, json: &str) -> RunConfig {
        PartialConfig::from_json(json).unwrap().resolve(mode).unwrap()
    }

    #[test]
    fn heisenberg_verification_passes() {
        let cfg = resolve(
            Mode::Verify,
            r#"{"ell": 1, "points": 20, "seed": 7, "checks": ["gt","monopole","weyl","psi","invariants","hypercr"]}"#,
        );
        let r = run(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.n_points, 20);
    }

    #[test]
    fn non_solution_fails() {
        let cfg = resolve(
            Mode::Verify,
            r#"{"case": "from-H", "H": "x*y", "checks": ["gt"], "points": 10}"#,
        );
        let r = run(&cfg).unwrap();
        assert_eq!(exit_code(&r), 1);
    }

    #[test]
    fn heisenberg_lift_fixes_the_sign() {
        let cfg = resolve(
            Mode::Lift,
            r#"{"ell": 1, "c": "0.5", "points": 10, "checks": ["em","maxwell","invariants"]}"#,
        );
        let r = run(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.lift.as_ref().unwrap().ell, -1.0);
    }

    #[test]
    fn eval_reports_derivatives() {
        let cfg = resolve(
            Mode::Eval,
            r#"{"expr": "x^2*y", "vars": ["x","y"], "at": [3, 2], "order": 2}"#,
        );
        let r = run(&cfg).unwrap();
        let e = r.eval.unwrap();
        assert_eq!(e.value, 18.0);
        let get = |w: &[&str]| e.derivatives.iter().find(|d| d.wrt == w).unwrap().value;
        assert_eq!(get(&["x"]), 12.0);
        assert_eq!(get(&["x", "x"]), 4.0);
        assert_eq!(get(&["x", "y"]), 6.0);
        assert_eq!(get(&["y", "y"]), 0.0);
    }

    #[test]
    fn reports_are_byte_stable() {
        let cfg = resolve(
            Mode::Verify,
            r#"{"case": "class-b", "F": "1+p^2", "points": 15, "seed": 3}"#,
        );
        assert_eq!(run(&cfg).unwrap().to_stable_json(), run(&cfg).unwrap().to_stable_json());
    }
}
