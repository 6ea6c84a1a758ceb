//! Parse an expression, evaluate it as a jet, and compare the exact
//! derivatives with central finite differences.

use ewbench::expr::Expr;
use ewbench::jets::{fd_oracle, Chart, ChartPoint};

fn main() -> ewbench::Result<()> {
    let chart = Chart::xyt();
    let src = "(y^2 - 4*x*t)^(-1/2)";
    let expr = Expr::parse(src, &["x", "y", "t"])?;
    let field = expr.bind(&chart, &[])?;
    let pt = ChartPoint::new(&chart, &[0.1, 1.5, -0.3])?;

    let jet = field.jet(&pt, 3)?;
    println!("H = {expr}");
    println!("H at {:?} = {:.12}", pt.coords(), jet.value());
    for vars in [vec![0], vec![1, 1], vec![0, 2], vec![1, 1, 1]] {
        let exact = jet.derivative(&vars);
        let fd = fd_oracle(&field, &pt, &vars)?;
        let names: Vec<&str> = vars.iter().map(|&i| chart.names()[i].as_str()).collect();
        println!(
            "d/d{:<6} jet {exact:>16.10}  fd {fd:>16.10}  rel {:.1e}",
            names.join(""),
            (exact - fd).abs() / exact.abs().max(1.0)
        );
    }

    // the fundamental solution of u_t + w_y + u w_x - w u_x = 0 (u = H_x, w = -H_y)
    let hcr = ewbench::ew::hcr_residual(&field, &pt)?;
    println!("hyper-CR residual of H: {hcr:.2e}");
    Ok(())
}
