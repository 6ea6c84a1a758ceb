//! Curvature of the Poincaré patch of AdS: the sign and normalization
//! conventions every other residual relies on.

use ewbench::curv::{curvature, curvature_fd};
use ewbench::forms::ComponentMetric;
use ewbench::jets::{Chart, ChartPoint};

fn main() -> ewbench::Result<()> {
    let ell = 2.0;
    let chart = Chart::new(&["x", "y", "z", "t"])?;
    let c = "l^2/z^2";
    let rows = [
        vec![c, "0", "0", "0"],
        vec!["0", c, "0", "0"],
        vec!["0", "0", c, "0"],
        vec!["0", "0", "0", "-l^2/z^2"],
    ];
    let g = ComponentMetric::from_exprs(&chart, &rows, &[("l", ell)])?;
    let pt = ChartPoint::new(&chart, &[0.3, -0.1, 0.8, 0.2])?;

    let k = curvature(&g, &pt)?;
    let mut einstein = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            einstein = einstein.max((k.ricci[a][b] + 3.0 / (ell * ell) * k.metric[a][b]).abs());
        }
    }
    println!("max |R_ab + 3/l^2 g_ab| = {einstein:.2e}");
    println!("scalar curvature {:.10} (expected {})", k.scalar, -12.0 / (ell * ell));
    println!("Kretschmann {:.10} (expected {})", k.kretschmann, 24.0 / ell.powi(4));

    let fd = curvature_fd(&g, &pt)?;
    println!("finite-difference Kretschmann {:.8}", fd.kretschmann);
    Ok(())
}
