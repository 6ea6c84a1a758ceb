//! Build structures from a generating function G = A(p, t) + p B(y, t) and
//! compare them with the closed forms of the catalog.

use ewbench::families::{catalog, from_generator, g_equation_residual};
use ewbench::forms::MetricField;

fn main() -> ewbench::Result<()> {
    for preset in catalog() {
        let Some(g) = preset.generator()? else { continue };
        let Some(closed) = preset.family.closed_form()? else {
            continue;
        };
        let domain = preset.family.default_domain()?.count(50).seed(5);
        let s = from_generator(&g)?;
        let h = s.metric();
        let (mut eq, mut dh, mut domega) = (0.0f64, 0.0f64, 0.0f64);
        for pt in domain.sample()? {
            eq = eq.max(g_equation_residual(&g, &pt)?.abs());
            let (a, b) = (h.values(&pt)?, closed.metric.values(&pt)?);
            for (ra, rb) in a.iter().zip(&b) {
                for (x, y) in ra.iter().zip(rb) {
                    dh = dh.max((x - y).abs());
                }
            }
            domega = domega.max(s.omega.eval(&pt, 0)?.sub(&closed.omega.eval(&pt, 0)?)?.max_abs());
        }
        println!(
            "{:<24} {g}\n{:<24} G-equation {eq:.1e}  |h - h_closed| {dh:.1e}  |w - w_closed| {domega:.1e}",
            preset.label, ""
        );
    }
    Ok(())
}
