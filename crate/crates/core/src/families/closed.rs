//! The catalog members written out directly as `(h, ω)`, independently of
//! the Legendre construction, to serve as its cross-check.

use crate::error::Result;
use crate::forms::{ComponentMetric, PForm};
use crate::jets::ScalarField;

use super::{formula, Beta};

/// A structure given by metric and Weyl form components.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub metric: ComponentMetric,
    pub omega: PForm,
}

fn build(upper: [&str; 6], omega: [&str; 3], subs: &[(&str, &ScalarField)]) -> Result<ClosedForm> {
    let metric = ComponentMetric::from_upper(3, upper.iter().map(|s| formula(s, subs)).collect::<Result<_>>()?)?;
    let omega = PForm::from_components(3, 1, omega.iter().map(|s| formula(s, subs)).collect::<Result<_>>()?)?;
    Ok(ClosedForm { metric, omega })
}

/// `h = (dy + 4x/ℓ dt)² − 4 dx dt`, `ω = 4/ℓ (dy + 4x/ℓ dt)` on `(x, y, t)`.
pub fn heisenberg_closed_form(ell: f64) -> Result<ClosedForm> {
    let x = ScalarField::coordinate(0);
    let ell = ScalarField::constant(ell);
    build(
        ["0", "0", "-2", "1", "4*x/l", "16*x^2/l^2"],
        ["0", "4/l", "16*x/l^2"],
        &[("x", &x), ("l", &ell)],
    )
}

fn pyt_coords() -> (ScalarField, ScalarField, ScalarField) {
    (
        ScalarField::coordinate(0),
        ScalarField::coordinate(1),
        ScalarField::coordinate(2),
    )
}

/// Class A:
/// `h = (dy + p dt)² + 4(dp/p − β_y/β (dy + p dt) − β_t/β dt) dt`,
/// `ω = −p(dy + p dt) + 2p β_y/β dt`.
pub fn class_a_closed_form(beta: &Beta) -> Result<ClosedForm> {
    let (p, _, _) = pyt_coords();
    let (b, by, bt) = (beta.field(), beta.field().partial(1), beta.field().partial(2));
    build(
        ["0", "0", "2/p", "1", "p - 2*by/b", "p^2 - 4*p*by/b - 4*bt/b"],
        ["0", "-p", "-p^2 + 2*p*by/b"],
        &[("p", &p), ("b", &b), ("by", &by), ("bt", &bt)],
    )
}

/// Class B: `h = (dy + p dt)² + 4F dp dt`, `ω = −(dy + p dt)/F`.
pub fn class_b_closed_form(f: &ScalarField) -> Result<ClosedForm> {
    let (p, _, _) = pyt_coords();
    build(
        ["0", "0", "2*F", "1", "p", "p^2"],
        ["0", "-1/F", "-p/F"],
        &[("p", &p), ("F", f)],
    )
}

/// Class C:
/// `h = (dy + p dt)² + 4(2K dp/p − y/(2t) dy + (y²/(4t) + K − py/2)/t dt) dt`,
/// `ω = −p/(2K) (dy + p dt − y/t dt)`.
pub fn class_c_closed_form(k: &ScalarField) -> Result<ClosedForm> {
    let (p, y, t) = pyt_coords();
    build(
        ["0", "0", "4*K/p", "1", "p - y/t", "p^2 + 4*(y^2/(4*t) + K - p*y/2)/t"],
        ["0", "-p/(2*K)", "-p/(2*K)*(p - y/t)"],
        &[("p", &p), ("y", &y), ("t", &t), ("K", k)],
    )
}
