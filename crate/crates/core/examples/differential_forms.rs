//! Wedge products, exterior derivatives and the frame Hodge star on a
//! three-dimensional chart.

use ewbench::forms::{ext_d, frame_expand, hodge3, metric_from_coframe, wedge, Coframe3, MetricField, PForm};
use ewbench::jets::{Chart, ChartPoint};

fn main() -> ewbench::Result<()> {
    let chart = Chart::xyt();
    let pt = ChartPoint::new(&chart, &[0.4, -0.2, 0.7])?;

    let alpha = PForm::from_exprs(&chart, 1, &["y*t", "sin(x)", "x^2"], &[])?;
    let beta = PForm::from_exprs(&chart, 1, &["1", "t", "exp(y)"], &[])?;
    let ab = wedge(&alpha, &beta)?;
    let ba = wedge(&beta, &alpha)?;
    println!("a^b components (xy, xt, yt): {:?}", ab.eval(&pt, 0)?.values());
    println!("a^b + b^a = {:.1e}", ab.add(&ba)?.eval(&pt, 0)?.max_abs());

    let dda = ext_d(&ext_d(&alpha));
    println!("|dda| = {:.1e}", dda.eval(&pt, 0)?.max_abs());

    // a coframe e1 = dx - u dy, e2 = dy - u dt, e3 = dt with u = 4x
    let frame = Coframe3::from_exprs(&chart, [["1", "-4*x", "0"], ["0", "1", "-4*x"], ["0", "0", "1"]], &[])?;
    let omega = PForm::from_exprs(&chart, 1, &["0", "4", "16*x"], &[])?;
    println!("omega in the frame: {:?}", frame_expand(&omega, &frame, &pt)?);
    let star = hodge3(&omega, &frame)?;
    println!("*omega in the frame: {:?}", frame_expand(&star, &frame, &pt)?);
    println!("signature of h: {}", metric_from_coframe(&frame).signature(&pt)?);
    Ok(())
}
