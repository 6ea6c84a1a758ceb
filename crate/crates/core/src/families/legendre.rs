use crate::error::{Error, Result};
use crate::ew::EwStructure;
use crate::expr::Expr;
use crate::forms::{Coframe3, PForm};
use crate::jets::{Chart, ChartPoint, ScalarField};

const MIN_G_PP: f64 = 1e-10;

/// Second derivatives of a Legendre generator `G(p, y, t)` that enter the
/// Einstein–Weyl structure, plus `G_y`.
#[derive(Clone, Debug)]
pub struct LegendreData {
    pub g_pp: ScalarField,
    pub g_py: ScalarField,
    pub g_pt: ScalarField,
    pub g_y: ScalarField,
}

/// Builds the structure on `(p, y, t)` from Legendre data.
///
/// With `H_x = p`, `x = −G_p` and `w = −G_y`, substituting
/// `dx = −(G_pp dp + G_py dy + G_pt dt)` into the `(x, y, t)` coframe gives
///
/// ```text
/// e¹ = −G_pp dp − (G_py + p) dy + (w − G_pt) dt,   e² = dy − p dt,   e³ = dt,
/// ω  = −(dy + p dt)/G_pp − 2 (G_py/G_pp) dt,       V = −1/(2 G_pp).
/// ```
pub fn from_legendre(data: &LegendreData, provenance: &str) -> Result<EwStructure> {
    let g_pp = data.g_pp.map(|j| {
        if j.value().abs() < MIN_G_PP {
            Err(Error::DegenerateLegendre(j.value()))
        } else {
            Ok(j)
        }
    });
    let inv = g_pp.recip();
    let p = ScalarField::coordinate(0);
    let one = ScalarField::constant(1.0);
    let zero = ScalarField::zero();
    let w = -&data.g_y;

    let e1 = PForm::from_components(3, 1, vec![-&g_pp, -&(&data.g_py + &p), &w - &data.g_pt])?;
    let e2 = PForm::from_components(3, 1, vec![zero.clone(), one.clone(), -&p])?;
    let e3 = PForm::from_components(3, 1, vec![zero.clone(), zero.clone(), one])?;
    let omega_t = -&(&(&p * &inv) + &(&data.g_py * &inv).scale(2.0));
    let omega = PForm::from_components(3, 1, vec![zero, -&inv, omega_t])?;
    EwStructure::new(
        &Chart::pyt(),
        Coframe3::new(e1, e2, e3)?,
        omega,
        inv.scale(-0.5),
        provenance,
    )
}

/// A generator `G = A(p, t) + p B(y, t)` on the chart `(p, y, t)`.
#[derive(Clone, Debug)]
pub struct GeneratorG {
    a: Expr,
    b: Expr,
    a_field: ScalarField,
    b_field: ScalarField,
}

impl GeneratorG {
    pub fn new(a: &str, b: &str) -> Result<GeneratorG> {
        let chart = Chart::pyt();
        let a = Expr::parse(a, &["p", "t"])?;
        let b = Expr::parse(b, &["y", "t"])?;
        Ok(GeneratorG {
            a_field: a.bind(&chart, &[])?,
            b_field: b.bind(&chart, &[])?,
            a,
            b,
        })
    }

    pub fn a(&self) -> &Expr {
        &self.a
    }

    pub fn b(&self) -> &Expr {
        &self.b
    }

    pub fn field(&self) -> ScalarField {
        &self.a_field + &(&ScalarField::coordinate(0) * &self.b_field)
    }

    pub fn legendre(&self) -> LegendreData {
        let g = self.field();
        let g_p = g.partial(0);
        LegendreData {
            g_pp: g_p.partial(0),
            g_py: g_p.partial(1),
            g_pt: g_p.partial(2),
            g_y: g.partial(1),
        }
    }
}

impl std::fmt::Display for GeneratorG {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G = {} + p*({})", self.a, self.b)
    }
}

pub fn from_generator(g: &GeneratorG) -> Result<EwStructure> {
    from_legendre(&g.legendre(), &g.to_string())
}

/// `G_yp² − G_yy G_pp − G_pt`, the wave equation in Legendre form.
pub fn g_equation_residual(g: &GeneratorG, pt: &ChartPoint) -> Result<f64> {
    let j = g.field().jet(pt, 2)?;
    Ok(j.hess(0, 1).powi(2) - j.hess(1, 1) * j.hess(0, 0) - j.hess(0, 2))
}

/// `2 B_y B_yy − p B_yyy A_pp − B_yt`.
pub fn branch_residual(g: &GeneratorG, pt: &ChartPoint) -> Result<f64> {
    let a = g.a_field.jet(pt, 3)?;
    let b = g.b_field.jet(pt, 3)?;
    let p = pt.coord(0);
    Ok(2.0 * b.grad(1) * b.hess(1, 1) - p * b.third(1, 1, 1) * a.hess(0, 0) - b.hess(1, 2))
}
