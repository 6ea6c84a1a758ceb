//! Acceptance suite: one line per criterion, non-zero exit if any fails.

#![allow(clippy::needless_range_loop)]

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ewbench::curv::{curvature, em_residual, field_invariant, maxwell_residual};
use ewbench::ew::{
    constraints_residual, gauge_transform, gt_residual, hcr_residual, max_abs, monopole_residual, EwStructure,
};
use ewbench::expr::Expr;
use ewbench::families::{catalog, class_b, from_generator, fundamental_h, heisenberg, Family};
use ewbench::forms::{ext_d, ComponentMetric, MetricField, PForm};
use ewbench::jets::{fd_oracle, Chart, ChartPoint, SampleDomain, ScalarField};
use ewbench::lift::{flat_limit, limit_family, LiftChart, Spacetime};
use ewbench::run::{run, Mode, PartialConfig, Verdict};
use ewbench::Result;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn matrix_max(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
}

fn family_certification() -> Result<Outcome> {
    let mut worst = (0.0f64, String::new());
    for preset in catalog()
        .into_iter()
        .filter(|p| !matches!(p.family, Family::FromH { .. }))
    {
        let domain = preset.family.default_domain()?.count(200).seed(7);
        let s = preset.family.structure(&domain)?;
        for pt in domain.sample()? {
            let (compat, ew) = ewbench::curv::weyl_ricci_residual(&s, &pt)?;
            let r = max_abs(&gt_residual(&s, &pt)?)
                .max(monopole_residual(&s, &pt)?.max_abs())
                .max(compat)
                .max(ew);
            if r > worst.0 {
                worst = (r, preset.label.to_string());
            }
        }
    }
    outcome(
        worst.0 <= 1e-7,
        format!("max gt/monopole/weyl {:.2e} ({})", worst.0, worst.1),
    )
}

fn fundamental_solution() -> Result<Outcome> {
    let h = fundamental_h();
    let domain = Family::FromH { h: String::new() }
        .default_domain()?
        .guard("y^2 - 4*x*t - 0.25", 0.0)?
        .count(200)
        .seed(7);
    let (mut hcr, mut cons) = (0.0f64, 0.0f64);
    for pt in domain.sample()? {
        hcr = hcr.max(hcr_residual(&h, &pt)?.abs());
        let (a, b) = constraints_residual(&h, &pt)?;
        cons = cons.max(a.abs()).max(b.abs());
    }
    outcome(
        hcr <= 1e-8 && cons <= 1e-8,
        format!("hcr {hcr:.2e}, constraints {cons:.2e}"),
    )
}

fn closed_forms_agree() -> Result<Outcome> {
    let mut gen = 0.0f64;
    for preset in catalog() {
        let (Some(g), Some(closed)) = (preset.generator()?, preset.family.closed_form()?) else {
            continue;
        };
        let s = from_generator(&g)?;
        for pt in preset.family.default_domain()?.count(100).seed(3).sample()? {
            let d = s.metric().values(&pt)?;
            let c = closed.metric.values(&pt)?;
            for (rd, rc) in d.iter().zip(&c) {
                for (a, b) in rd.iter().zip(rc) {
                    gen = gen.max((a - b).abs());
                }
            }
            gen = gen.max(s.omega.eval(&pt, 0)?.sub(&closed.omega.eval(&pt, 0)?)?.max_abs());
        }
    }
    let mut quarter = 0.0f64;
    for ell in [1.0, 2.0, -0.5] {
        let b = class_b(&format!("-({ell})/4"))?;
        let s = heisenberg(ell)?;
        let jac = [4.0 / ell, 1.0, 1.0];
        for pt in SampleDomain::new(&Chart::xyt(), &[(-1.0, 1.0); 3])
            .count(100)
            .seed(5)
            .sample()?
        {
            let [x, y, t] = [pt.coord(0), pt.coord(1), pt.coord(2)];
            let hb = b
                .metric()
                .values(&ChartPoint::new(&Chart::pyt(), &[4.0 * x / ell, y, t])?)?;
            let hh = s.metric().values(&pt)?;
            for i in 0..3 {
                for j in 0..3 {
                    quarter = quarter.max((hb[i][j] * jac[i] * jac[j] - hh[i][j]).abs());
                }
            }
        }
    }
    outcome(
        gen <= 1e-9 && quarter <= 1e-10,
        format!("generator vs closed form {gen:.2e}, class B vs Heisenberg {quarter:.2e}"),
    )
}

fn lift_run(case_json: &str, c: &str) -> Result<f64> {
    let json = format!(r#"{{{case_json}, "c": "{c}", "checks": ["em", "maxwell"], "points": 100, "seed": 11}}"#);
    let report = run(&PartialConfig::from_json(&json)?.resolve(Mode::Lift)?)?;
    Ok(report.checks.iter().fold(0.0f64, |m, ch| m.max(ch.max)))
}

/// EM and Maxwell residuals of an unchecked lift; `quarter` swaps in the
/// rejected normalization `|F|² = ½ F_ab F^ab`.
fn unchecked_residual(base: &EwStructure, psi: &PForm, ell: f64, quarter: bool) -> Result<f64> {
    let st = Spacetime::unchecked(base, psi, ell, LiftChart::Regular)?;
    let a = st.potential();
    let domain = st.domain(&SampleDomain::new(&base.chart, &[(-1.0, 1.0); 3]).count(30).seed(2))?;
    let mut worst = 0.0f64;
    for pt in domain.sample()? {
        let mut r = em_residual(&st, &a, ell, &pt)?;
        if quarter {
            let f2 = field_invariant(&a, &st, &pt)?;
            let g = st.values(&pt)?;
            for (ra, ga) in r.iter_mut().zip(&g) {
                for (v, gv) in ra.iter_mut().zip(ga) {
                    *v += 0.25 * f2 * gv;
                }
            }
        }
        worst = worst.max(matrix_max(&r)).max(maxwell_residual(&a, &st, &pt)?.max_abs());
    }
    Ok(worst)
}

fn lift_solves_field_equations() -> Result<Outcome> {
    let cases = [
        r#""case": "heisenberg", "ell": 1"#,
        r#""case": "class-b", "F": "1""#,
        r#""case": "class-a", "beta": "y^2-2*t", "ell": 2"#,
    ];
    let mut worst = 0.0f64;
    for case in cases {
        for c in ["0", "0.5"] {
            worst = worst.max(lift_run(case, c)?);
        }
    }
    let chart = Chart::xyt();
    let parse = |s: &str| Expr::parse(s, &["x", "y", "t"])?.bind(&chart, &[]);
    let gauge_broken = EwStructure::from_uw(&parse("4*x + 0.1*x^2")?, &ScalarField::zero(), "u + 0.1x^2")?;
    let gt_broken = EwStructure::from_uw(&parse("4*x + 0.1*x^2")?, &parse("0.1*y")?, "u + 0.1x^2, w = 0.1y")?;
    let zero = PForm::zero(3, 1);
    let control =
        unchecked_residual(&gauge_broken, &zero, -1.0, false)?.min(unchecked_residual(&gt_broken, &zero, -1.0, false)?);
    outcome(
        worst <= 1e-6 && control > 1e-3,
        format!("3 bases x c in {{0, 0.5}}: max {worst:.2e}; perturbed controls min {control:.2e}"),
    )
}

fn conventions_pinned() -> Result<Outcome> {
    let ell = 1.5;
    let chart = Chart::new(&["x", "y", "z", "t"])?;
    let rows = [
        vec!["l^2/z^2", "0", "0", "0"],
        vec!["0", "l^2/z^2", "0", "0"],
        vec!["0", "0", "l^2/z^2", "0"],
        vec!["0", "0", "0", "-l^2/z^2"],
    ];
    let g = ComponentMetric::from_exprs(&chart, &rows, &[("l", ell)])?;
    let (mut einstein, mut kret) = (0.0f64, 0.0f64);
    let domain = SampleDomain::new(&chart, &[(-1.0, 1.0), (-1.0, 1.0), (0.3, 2.0), (-1.0, 1.0)])
        .count(50)
        .seed(4);
    for pt in domain.sample()? {
        let k = curvature(&g, &pt)?;
        for a in 0..4 {
            for b in 0..4 {
                einstein = einstein.max((k.ricci[a][b] + 3.0 / (ell * ell) * k.metric[a][b]).abs());
            }
        }
        let expected = 24.0 / ell.powi(4);
        kret = kret.max((k.kretschmann - expected).abs() / expected);
    }
    let base = heisenberg(1.0)?;
    let psi = base.omega.scale(0.5);
    let rejected = unchecked_residual(&base, &psi, -1.0, true)?;
    outcome(
        einstein <= 1e-7 && kret <= 1e-6 && rejected > 1e-6,
        format!("AdS {einstein:.2e}, Kretschmann rel {kret:.2e}; half-normalized |F|^2 gives {rejected:.2e}"),
    )
}

fn random_gauge(rng: &mut ChaCha8Rng, chart: &Chart) -> Result<ScalarField> {
    let names = chart.names();
    let mut c = || rng.gen_range(-0.5..0.5);
    let src = format!(
        "{} * {a} + {} * {b}^2 + {} * sin({c}) + {} * {a}*{b}*{c}",
        c(),
        c(),
        c(),
        c(),
        a = names[0],
        b = names[1],
        c = names[2]
    );
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    Expr::parse(&src, &vars)?.bind(chart, &[])
}

fn conformal_invariance() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for preset in catalog() {
        let domain = preset.family.default_domain()?.count(20).seed(9);
        let s = preset.family.structure(&domain)?;
        for _ in 0..10 {
            let gauged = gauge_transform(&s, &random_gauge(&mut rng, &s.chart)?)?;
            for pt in domain.sample()? {
                worst = worst.max(max_abs(&gt_residual(&gauged, &pt)?));
            }
        }
    }
    outcome(
        worst <= 1e-6,
        format!("10 random gauges per structure: max gt {worst:.2e}"),
    )
}

fn flat_limit_rate() -> Result<Outcome> {
    let domain = SampleDomain::new(&Chart::new(&["r", "x", "y", "t"])?, &[(-1.0, 1.0); 4])
        .count(20)
        .seed(6);
    let report = flat_limit(&*limit_family("heisenberg")?, &[100.0, 1000.0, 10000.0], &domain)?;
    let ratios_ok = report.rows.iter().all(|r| (3.6..=4.4).contains(&r.ratio));
    let riemann = report.rows.last().map_or(f64::NAN, |r| r.limit_riemann);
    let frozen = flat_limit(&*limit_family("frozen")?, &[100.0, 1000.0], &domain)?;
    let ratios: Vec<String> = report.rows.iter().map(|r| format!("{:.3}", r.ratio)).collect();
    outcome(
        ratios_ok && riemann <= 1e-6 && !report.diverges && frozen.diverges,
        format!(
            "ratios [{}], Riemann at 1e4 {riemann:.2e}, frozen control diverges: {}",
            ratios.join(", "),
            frozen.diverges
        ),
    )
}

fn catalog_fields(s: &EwStructure) -> Vec<ScalarField> {
    let mut fields: Vec<ScalarField> = s
        .frame
        .forms()
        .iter()
        .flat_map(|e| (0..3).map(|i| e.component(i)))
        .collect();
    fields.extend((0..3).map(|i| s.omega.component(i)));
    fields.push(s.v.clone());
    fields
}

fn infrastructure() -> Result<Outcome> {
    let chart = Chart::xyt();
    let mut dd = 0.0f64;
    let forms = [
        PForm::from_exprs(&chart, 0, &["exp(x*y)*sin(t)"], &[])?,
        PForm::from_exprs(&chart, 1, &["y*t^2", "sin(x*t)", "cosh(x-y)"], &[])?,
        PForm::from_exprs(&chart, 2, &["x^3*y", "ln(2+y^2)", "t*exp(x)"], &[])?,
    ];
    for pt in SampleDomain::new(&chart, &[(-1.0, 1.0); 3])
        .count(100)
        .seed(8)
        .sample()?
    {
        for f in &forms {
            dd = dd.max(ext_d(&ext_d(f)).eval(&pt, 0)?.max_abs());
        }
    }

    let mut fd = 0.0f64;
    let seconds: Vec<Vec<usize>> = (0..3).flat_map(|i| (i..3).map(move |j| vec![i, j])).collect();
    for preset in catalog() {
        let domain = preset.family.default_domain()?.count(5).seed(12);
        let s = preset.family.structure(&domain)?;
        for pt in domain.sample()? {
            for field in catalog_fields(&s) {
                let jet = field.jet(&pt, 2)?;
                for vars in (0..3).map(|i| vec![i]).chain(seconds.iter().cloned()) {
                    let exact = jet.derivative(&vars);
                    let approx = fd_oracle(&field, &pt, &vars)?;
                    fd = fd.max((exact - approx).abs() / exact.abs().max(1.0));
                }
            }
        }
    }

    let cfg = PartialConfig::from_json(
        r#"{"case": "class-c", "K": "s", "checks": ["gt", "weyl"], "points": 60, "seed": 5}"#,
    )?
    .resolve(Mode::Verify)?;
    let first = run(&cfg)?;
    std::env::set_var("EWBENCH_THREADS", "1");
    let single = run(&cfg)?;
    std::env::remove_var("EWBENCH_THREADS");
    let stable = first.to_stable_json() == single.to_stable_json() && first.verdict == Verdict::Pass;

    outcome(
        dd <= 1e-9 && fd <= 1e-4 && stable,
        format!("|dd| {dd:.2e}, jets vs fd rel {fd:.2e}, byte-stable reports: {stable}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("family certification", family_certification),
        ("fundamental solution and constraints", fundamental_solution),
        ("closed forms vs generators", closed_forms_agree),
        ("Einstein-Maxwell lift", lift_solves_field_equations),
        ("convention pinning", conventions_pinned),
        ("conformal invariance", conformal_invariance),
        ("flat limit", flat_limit_rate),
        ("infrastructure", infrastructure),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (verdict, detail) = match check() {
            Ok(o) => (if o.passed { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!("criterion {} {name:<38} {verdict}  {detail}", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
