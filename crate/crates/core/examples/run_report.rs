//! Drive a verification run from code, the same way the `ewbench` binary
//! does, and print the JSON report.

use ewbench::run::{run, Mode, PartialConfig};

fn main() -> ewbench::Result<()> {
    let cfg = PartialConfig::from_json(
        r#"{"case": "class-c", "K": "s", "checks": ["gt", "monopole", "weyl", "invariants"], "points": 50, "seed": 7}"#,
    )?
    .resolve(Mode::Verify)?;
    let report = run(&cfg)?;
    print!("{}", report.to_json());
    println!("passed: {}", report.passed());
    Ok(())
}
