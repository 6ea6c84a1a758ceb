//! Follow the lift as l grows: the metric approaches (dr + r ω/2)² + h at
//! rate l⁻², while a base whose ω does not scale leaves an unbounded field.

use ewbench::jets::{Chart, SampleDomain};
use ewbench::lift::{flat_limit, limit_family};

fn main() -> ewbench::Result<()> {
    let domain = SampleDomain::new(&Chart::new(&["r", "x", "y", "t"])?, &[(-1.0, 1.0); 4])
        .count(16)
        .seed(3);
    for name in ["heisenberg", "frozen"] {
        let report = flat_limit(&*limit_family(name)?, &[100.0, 1000.0, 10000.0], &domain)?;
        println!("{name}: diverges = {}", report.diverges);
        for row in &report.rows {
            println!(
                "  l = {:>7}  |g - g_lim| = {:.3e}  ratio {:.4}  |F| = {:.3e}  Riemann(g_lim) = {:.1e}",
                row.ell, row.metric_error, row.ratio, row.field_norm, row.limit_riemann
            );
        }
    }
    Ok(())
}
