//! Certify every catalog structure against the Gauduchon–Tod equations,
//! the monopole equation and the Einstein–Weyl condition.

use ewbench::curv::weyl_ricci_residual;
use ewbench::ew::{gt_residual, max_abs, monopole_residual};
use ewbench::families::catalog;

fn main() -> ewbench::Result<()> {
    println!("{:<24} {:>10} {:>10} {:>10}", "structure", "gt", "monopole", "weyl");
    for preset in catalog() {
        let domain = preset.family.default_domain()?.seed(7).count(200);
        let s = preset.family.structure(&domain)?;
        let (mut gt, mut mono, mut weyl) = (0.0f64, 0.0f64, 0.0f64);
        for pt in domain.sample()? {
            gt = gt.max(max_abs(&gt_residual(&s, &pt)?));
            mono = mono.max(monopole_residual(&s, &pt)?.max_abs());
            let (compat, ew) = weyl_ricci_residual(&s, &pt)?;
            weyl = weyl.max(compat.max(ew));
        }
        println!("{:<24} {gt:>10.2e} {mono:>10.2e} {weyl:>10.2e}", preset.label);
    }
    Ok(())
}
