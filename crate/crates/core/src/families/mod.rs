//! The solution catalog: the Heisenberg example, Classes A, B and C, and the
//! Legendre generator machinery they come from.
//!
//! Classes A, B and C live on the chart `(p, y, t)` and are built from
//! Legendre data (see [`from_legendre`]); their closed forms in [`closed`]
//! are written out independently and serve as a cross-check.

mod closed;
mod legendre;

pub use closed::{class_a_closed_form, class_b_closed_form, class_c_closed_form, heisenberg_closed_form, ClosedForm};
pub use legendre::{branch_residual, from_generator, from_legendre, g_equation_residual, GeneratorG, LegendreData};

use crate::error::{Error, Result};
use crate::ew::EwStructure;
use crate::expr::Expr;
use crate::jets::{Chart, ChartPoint, Guard, Jet, SampleDomain, ScalarField};

const HEAT_TOL: f64 = 1e-9;

/// Parses `src` over the names in `subs` and substitutes the fields.
pub(crate) fn formula(src: &str, subs: &[(&str, &ScalarField)]) -> Result<ScalarField> {
    let names: Vec<&str> = subs.iter().map(|(n, _)| *n).collect();
    let expr = Expr::parse(src, &names)?;
    let used = expr.variables();
    expr.compose(
        subs.iter()
            .filter(|(n, _)| used.contains(*n))
            .map(|(n, f)| (n.to_string(), (*f).clone()))
            .collect(),
    )
}

/// A solution `β(y, t)` of the backward heat equation `β_t + β_yy = 0`,
/// as a field on `(p, y, t)`.
#[derive(Clone, Debug)]
pub struct Beta {
    expr: Expr,
    field: ScalarField,
}

impl Beta {
    pub fn parse(src: &str) -> Result<Beta> {
        let expr = Expr::parse(src, &["y", "t"])?;
        let field = expr.bind(&Chart::pyt(), &[])?;
        Ok(Beta { expr, field })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn field(&self) -> ScalarField {
        self.field.clone()
    }

    /// `β_t + β_yy` at a point of `(p, y, t)`.
    pub fn heat_residual(&self, pt: &ChartPoint) -> Result<f64> {
        let j = self.field.jet(pt, 2)?;
        Ok(j.grad(2) + j.hess(1, 1))
    }

    /// Fails with the largest residual when it exceeds `1e-9` on the sample.
    pub fn check_heat(&self, domain: &SampleDomain) -> Result<f64> {
        let mut worst = 0.0f64;
        for pt in domain.sample()? {
            worst = worst.max(self.heat_residual(&pt)?.abs());
        }
        if worst > HEAT_TOL {
            return Err(Error::HeatResidual(worst));
        }
        Ok(worst)
    }
}

/// A function of one coordinate of `(p, y, t)`, or of `s = t p²`.
fn parse_in(src: &str, var: &str) -> Result<ScalarField> {
    let expr = Expr::parse(src, &[var])?;
    match var {
        "s" => {
            let (p, t) = (ScalarField::coordinate(0), ScalarField::coordinate(2));
            expr.compose(vec![("s".into(), &t * &(&p * &p))])
        }
        _ => expr.bind(&Chart::pyt(), &[]),
    }
}

/// The Heisenberg structure `u = 4x/ℓ`, `w = 0`, with `V = 2/ℓ`.
pub fn heisenberg(ell: f64) -> Result<EwStructure> {
    if ell == 0.0 || !ell.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ℓ must be finite and nonzero, got {ell}"
        )));
    }
    let u = ScalarField::coordinate(0).scale(4.0 / ell);
    EwStructure::from_uw(&u, &ScalarField::zero(), &format!("heisenberg(ell={ell})"))
}

/// Class A, after checking the heat equation for `β` on `domain`.
pub fn class_a(beta: &Beta, domain: &SampleDomain) -> Result<EwStructure> {
    beta.check_heat(domain)?;
    let p = ScalarField::coordinate(0);
    let b = beta.field();
    let (by, bt) = (b.partial(1), b.partial(2));
    let data = LegendreData {
        g_pp: p.recip(),
        g_py: -&by.div(&b),
        g_pt: -&bt.div(&b),
        g_y: -&(&p * &by.div(&b)),
    };
    from_legendre(&data, &format!("class-a(beta={})", beta.expr()))
}

/// Class B with `F = F(p)` given as an expression in `p`.
pub fn class_b(f: &str) -> Result<EwStructure> {
    let field = parse_in(f, "p")?;
    let data = LegendreData {
        g_pp: field,
        g_py: ScalarField::zero(),
        g_pt: ScalarField::zero(),
        g_y: ScalarField::zero(),
    };
    from_legendre(&data, &format!("class-b(F={})", Expr::parse(f, &["p"])?))
}

/// Class C with `K = K(s)`, `s = t p²`, given as an expression in `s`.
pub fn class_c(k: &str) -> Result<EwStructure> {
    let k_field = parse_in(k, "s")?;
    let (p, y, t) = (
        ScalarField::coordinate(0),
        ScalarField::coordinate(1),
        ScalarField::coordinate(2),
    );
    let subs = [("p", &p), ("y", &y), ("t", &t), ("K", &k_field)];
    let data = LegendreData {
        g_pp: formula("2*K/p", &subs)?,
        g_py: formula("-y/(2*t)", &subs)?,
        g_pt: formula("K/t + y^2/(4*t^2)", &subs)?,
        g_y: formula("-p*y/(2*t)", &subs)?,
    };
    from_legendre(&data, &format!("class-c(K={})", Expr::parse(k, &["s"])?))
}

/// `H = (y² − 4xt)^{−1/2}` on `(x, y, t)`.
pub fn fundamental_h() -> ScalarField {
    Expr::parse("(y^2 - 4*x*t)^(-1/2)", &["x", "y", "t"])
        .and_then(|e| e.bind(&Chart::xyt(), &[]))
        .expect("built-in expression")
}

/// Jet of the fundamental solution through third order.
pub fn fundamental_h_jet(pt: &ChartPoint) -> Result<Jet> {
    fundamental_h().jet(pt, 3)
}

/// A family selector with its parameters as expression text.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Heisenberg { ell: f64 },
    ClassA { beta: String },
    ClassB { f: String },
    ClassC { k: String },
    FromH { h: String },
    FromG { a: String, b: String },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Heisenberg { .. } => "heisenberg",
            Family::ClassA { .. } => "class-a",
            Family::ClassB { .. } => "class-b",
            Family::ClassC { .. } => "class-c",
            Family::FromH { .. } => "from-H",
            Family::FromG { .. } => "from-G",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Family::Heisenberg { ell } => format!("heisenberg ell={ell}"),
            Family::ClassA { beta } => format!("class-a beta={beta}"),
            Family::ClassB { f } => format!("class-b F={f}"),
            Family::ClassC { k } => format!("class-c K={k}"),
            Family::FromH { h } => format!("from-H H={h}"),
            Family::FromG { a, b } => format!("from-G A={a} B={b}"),
        }
    }

    pub fn chart(&self) -> Chart {
        match self {
            Family::Heisenberg { .. } | Family::FromH { .. } => Chart::xyt(),
            _ => Chart::pyt(),
        }
    }

    /// The default sampling box with the guards that keep it off singular sets.
    pub fn default_domain(&self) -> Result<SampleDomain> {
        let chart = self.chart();
        let domain = match self {
            Family::Heisenberg { .. } => SampleDomain::new(&chart, &[(-1.0, 1.0); 3]),
            Family::ClassA { beta } => {
                let b = Beta::parse(beta)?;
                SampleDomain::new(&chart, &[(0.5, 2.0), (1.0, 2.0), (-1.0, 0.2)]).with_guard(Guard::from_field(
                    &format!("{}", b.expr()),
                    b.field(),
                    1e-3,
                ))
            }
            Family::ClassB { f } => {
                let field = parse_in(f, "p")?;
                SampleDomain::new(&chart, &[(-1.0, 1.0); 3]).with_guard(Guard::from_field(
                    &format!("({f})^2"),
                    &field * &field,
                    1e-12,
                ))
            }
            Family::ClassC { k } => {
                let field = parse_in(k, "s")?;
                SampleDomain::new(&chart, &[(0.5, 2.0), (-1.0, 1.0), (0.5, 2.0)]).with_guard(Guard::from_field(
                    &format!("({k})^2"),
                    &field * &field,
                    1e-12,
                ))
            }
            Family::FromH { .. } => SampleDomain::new(&chart, &[(-0.2, 0.2), (1.0, 2.0), (-1.0, 1.0)]),
            Family::FromG { .. } => SampleDomain::new(&chart, &[(0.5, 2.0), (-1.0, 1.0), (0.5, 2.0)]),
        };
        Ok(domain)
    }

    /// Builds the structure; Class A checks the heat equation on `domain`.
    pub fn structure(&self, domain: &SampleDomain) -> Result<EwStructure> {
        match self {
            Family::Heisenberg { ell } => heisenberg(*ell),
            Family::ClassA { beta } => class_a(&Beta::parse(beta)?, domain),
            Family::ClassB { f } => class_b(f),
            Family::ClassC { k } => class_c(k),
            Family::FromH { h } => {
                let field = Expr::parse(h, &["x", "y", "t"])?.bind(&Chart::xyt(), &[])?;
                EwStructure::from_h(&field, &format!("from-H(H={h})"))
            }
            Family::FromG { a, b } => from_generator(&GeneratorG::new(a, b)?),
        }
    }

    /// The closed form, where the catalog has one.
    pub fn closed_form(&self) -> Result<Option<ClosedForm>> {
        Ok(match self {
            Family::Heisenberg { ell } => Some(heisenberg_closed_form(*ell)?),
            Family::ClassA { beta } => Some(class_a_closed_form(&Beta::parse(beta)?)?),
            Family::ClassB { f } => Some(class_b_closed_form(&parse_in(f, "p")?)?),
            Family::ClassC { k } => Some(class_c_closed_form(&parse_in(k, "s")?)?),
            Family::FromH { .. } | Family::FromG { .. } => None,
        })
    }
}

/// A named catalog member, optionally with an explicit generator `(A, B)`.
#[derive(Clone, Debug)]
pub struct Preset {
    pub label: &'static str,
    pub family: Family,
    pub generator: Option<(&'static str, &'static str)>,
}

impl Preset {
    pub fn generator(&self) -> Result<Option<GeneratorG>> {
        self.generator.map(|(a, b)| GeneratorG::new(a, b)).transpose()
    }
}

/// The catalog members checked by default.
pub fn catalog() -> Vec<Preset> {
    let preset = |label, family, generator| Preset {
        label,
        family,
        generator,
    };
    vec![
        preset("heisenberg", Family::Heisenberg { ell: 1.0 }, None),
        preset(
            "class-a beta=y^2-2t",
            Family::ClassA { beta: "y^2-2*t".into() },
            Some(("p*ln(p)-p", "-ln(y^2-2*t)")),
        ),
        preset(
            "class-a beta=e^t sin y",
            Family::ClassA {
                beta: "exp(t)*sin(y)".into(),
            },
            Some(("p*ln(p)-p", "-ln(exp(t)*sin(y))")),
        ),
        preset(
            "class-b F=-1/4",
            Family::ClassB { f: "-1/4".into() },
            Some(("-p^2/8", "0")),
        ),
        preset("class-b F=1", Family::ClassB { f: "1".into() }, Some(("p^2/2", "0"))),
        preset(
            "class-b F=1+p^2",
            Family::ClassB { f: "1+p^2".into() },
            Some(("p^2/2+p^4/12", "0")),
        ),
        preset(
            "class-c fundamental",
            Family::ClassC {
                k: "-(1/3)*2^(-4/3)*s^(-1/3)".into(),
            },
            Some(("3*2^(-4/3)*t^(-1/3)*p^(1/3)", "-y^2/(4*t)")),
        ),
        preset(
            "class-c K=s",
            Family::ClassC { k: "s".into() },
            Some(("t*p^3/3", "-y^2/(4*t)")),
        ),
        preset(
            "fundamental H",
            Family::FromH {
                h: "(y^2-4*x*t)^(-1/2)".into(),
            },
            None,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ew::{gt_residual, max_abs, monopole_residual};
    use crate::forms::MetricField;

    fn close(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn heisenberg_rejects_zero_ell() {
        assert!(heisenberg(0.0).is_err());
        let s = heisenberg(1.0).unwrap();
        let h = s
            .metric()
            .values(&ChartPoint::new(&Chart::xyt(), &[0.0, 0.3, 0.5]).unwrap())
            .unwrap();
        assert!(close(
            &h,
            &[vec![0.0, 0.0, -2.0], vec![0.0, 1.0, 0.0], vec![-2.0, 0.0, 0.0]],
            0.0
        ));
    }

    #[test]
    fn every_preset_is_einstein_weyl_and_matches_its_closed_form() {
        for preset in catalog() {
            let domain = preset.family.default_domain().unwrap().count(20).seed(3);
            let s = preset.family.structure(&domain).unwrap();
            let closed = preset.family.closed_form().unwrap();
            let generated = preset.generator().unwrap().map(|g| from_generator(&g).unwrap());
            for pt in domain.sample().unwrap() {
                assert!(max_abs(&gt_residual(&s, &pt).unwrap()) < 1e-9, "{}", preset.label);
                assert!(monopole_residual(&s, &pt).unwrap().max_abs() < 1e-9, "{}", preset.label);
                let h = s.metric().values(&pt).unwrap();
                let omega = s.omega.eval(&pt, 0).unwrap();
                if let Some(c) = &closed {
                    assert!(close(&h, &c.metric.values(&pt).unwrap(), 1e-9), "{}", preset.label);
                    assert!(omega.sub(&c.omega.eval(&pt, 0).unwrap()).unwrap().max_abs() < 1e-9);
                }
                if let Some(g) = &generated {
                    assert!(close(&h, &g.metric().values(&pt).unwrap(), 1e-9), "{}", preset.label);
                    assert!(omega.sub(&g.omega.eval(&pt, 0).unwrap()).unwrap().max_abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn class_b_quarter_is_heisenberg() {
        for ell in [1.0, 2.0, -0.5] {
            let b = class_b(&format!("-({ell})/4")).unwrap();
            let s = heisenberg(ell).unwrap();
            for (x, y, t) in [(0.3, 0.2, -0.4), (-0.8, 0.9, 0.1)] {
                let p = 4.0 * x / ell;
                let hb = b
                    .metric()
                    .values(&ChartPoint::new(&Chart::pyt(), &[p, y, t]).unwrap())
                    .unwrap();
                let hh = s
                    .metric()
                    .values(&ChartPoint::new(&Chart::xyt(), &[x, y, t]).unwrap())
                    .unwrap();
                // dp = (4/ℓ) dx
                let jac = [4.0 / ell, 1.0, 1.0];
                for i in 0..3 {
                    for j in 0..3 {
                        assert!((hb[i][j] * jac[i] * jac[j] - hh[i][j]).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn class_a_rejects_non_heat_beta() {
        let domain = Family::ClassA { beta: "y^2+t".into() }
            .default_domain()
            .unwrap()
            .count(5);
        let err = class_a(&Beta::parse("y^2+t").unwrap(), &domain).unwrap_err();
        assert!(matches!(err, Error::HeatResidual(r) if (r - 3.0).abs() < 1e-12));
    }

    #[test]
    fn class_c_potential() {
        // V = −1/(2 G_pp) = −p/(4K)
        let s = class_c("s").unwrap();
        let pt = ChartPoint::new(&Chart::pyt(), &[1.5, 0.2, 0.8]).unwrap();
        let k = 0.8 * 1.5 * 1.5;
        assert!((s.v.value(&pt).unwrap() + 1.5 / (4.0 * k)).abs() < 1e-14);
    }

    #[test]
    fn fundamental_solution_values() {
        let h = fundamental_h_jet(&ChartPoint::new(&Chart::xyt(), &[1.0, 3.0, 2.0]).unwrap()).unwrap();
        assert_eq!(h.value(), 1.0);
        assert!(matches!(
            fundamental_h_jet(&ChartPoint::new(&Chart::xyt(), &[1.0, 2.0, 1.0]).unwrap()),
            Err(Error::Domain { .. })
        ));
    }
}
