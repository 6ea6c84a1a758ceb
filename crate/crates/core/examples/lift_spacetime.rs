//! Lift Einstein–Weyl bases to cosmological Einstein–Maxwell space-times and
//! check the field equations, plus a perturbed base that must fail.

use ewbench::curv::{em_residual, maxwell_residual};
use ewbench::ew::EwStructure;
use ewbench::families::{class_b, heisenberg, Family};
use ewbench::forms::{MetricField, PForm};
use ewbench::jets::{Chart, SampleDomain};
use ewbench::lift::{build_regular, gauge_fix, psi_c_omega, LiftChart, LiftConfig, Spacetime};

fn residuals(st: &Spacetime, domain: &SampleDomain) -> ewbench::Result<(f64, f64)> {
    let a = st.potential();
    let (mut em, mut mx) = (0.0f64, 0.0f64);
    for pt in st.domain(domain)?.sample()? {
        let r = em_residual(st, &a, st.ell(), &pt)?;
        em = r.iter().flatten().fold(em, |m, v| m.max(v.abs()));
        mx = mx.max(maxwell_residual(&a, st, &pt)?.max_abs());
    }
    Ok((em, mx))
}

fn main() -> ewbench::Result<()> {
    let xyt = SampleDomain::new(&Chart::xyt(), &[(-1.0, 1.0); 3]).count(40).seed(1);
    let class_a = Family::ClassA { beta: "y^2-2*t".into() };
    let a_domain = class_a.default_domain()?.count(40).seed(1);
    let bases = [
        // V = +2 on the Heisenberg base, so the lift runs with l = -1
        ("heisenberg", heisenberg(1.0)?, -1.0, xyt.clone()),
        (
            "class-b F=1",
            class_b("1")?,
            4.0,
            Family::ClassB { f: "1".into() }.default_domain()?.count(40).seed(1),
        ),
        (
            "class-a (gauge fixed)",
            gauge_fix(&class_a.structure(&a_domain)?, 2.0)?,
            2.0,
            a_domain,
        ),
    ];
    for (label, base, ell, domain) in bases {
        for c in [0.0, 0.5] {
            let cfg = LiftConfig::new(base.clone(), psi_c_omega(&base, c), ell, domain.clone());
            let st = build_regular(&cfg)?;
            let (em, mx) = residuals(&st, &domain)?;
            let sig = st.signature(&st.domain(&domain)?.sample()?[0])?;
            println!("{label:<24} c={c:<4} em {em:.2e}  maxwell {mx:.2e}  signature {sig}");
        }
    }

    // u = 4x + 0.1x² still solves the hyper-CR system with w = 0 but leaves the gauge V = -2/l
    let chart = Chart::xyt();
    let u = ewbench::expr::Expr::parse("4*x + 0.1*x^2", &["x"])?.bind(&chart, &[])?;
    let w = ewbench::jets::ScalarField::zero();
    let perturbed = EwStructure::from_uw(&u, &w, "perturbed heisenberg")?;
    let st = Spacetime::unchecked(&perturbed, &PForm::zero(3, 1), -1.0, LiftChart::Regular)?;
    let (em, mx) = residuals(&st, &xyt)?;
    println!(
        "{:<24} c=0    em {em:.2e}  maxwell {mx:.2e}  (expected to fail)",
        "perturbed heisenberg"
    );
    Ok(())
}
