use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ewbench::run::{error_exit_code, exit_code, parse_checks, run, ChartChoice, Mode, PartialConfig};
use ewbench::{Error, Result};

/// Verify Einstein–Weyl structures and their Einstein–Maxwell lifts.
#[derive(Parser)]
#[command(name = "ewbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a base structure: gt, monopole, hypercr, constraints, psi, weyl, invariants.
    Verify(Flags),
    /// Lift a base to a space-time and check em, maxwell, invariants.
    Lift(Flags),
    /// Follow a lift as ℓ grows (case: heisenberg, class-b, frozen).
    Limit(Flags),
    /// Evaluate an expression and its derivatives at a point.
    Eval(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long = "F", allow_hyphen_values = true)]
    f_class_b: Option<String>,
    #[arg(long = "K", allow_hyphen_values = true)]
    k_class_c: Option<String>,
    #[arg(long = "H", allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true)]
    b: Option<String>,
    /// ψ = c ω, or c(x) ω + d(c + k) for an expression in x.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// k(t) in ψ = c(x) ω + d(c + k).
    #[arg(long, allow_hyphen_values = true)]
    psi_k: Option<String>,
    /// Gauge function applied to the base before checking.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, value_parser = parse_chart)]
    chart: Option<ChartChoice>,
    /// Comma-separated list of checks.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long, alias = "count")]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Sampling box as lo:hi pairs, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    bounds: Option<String>,
    /// ℓ sequence for `limit`, comma separated.
    #[arg(long)]
    ells: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// Variable names for `eval`, comma separated.
    #[arg(long)]
    vars: Option<String>,
    /// Point for `eval`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_chart(s: &str) -> std::result::Result<ChartChoice, String> {
    match s {
        "alpha" => Ok(ChartChoice::Alpha),
        "regular" | "r" => Ok(ChartChoice::Regular),
        _ => Err(format!("unknown chart `{s}` (alpha or regular)")),
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("not a number: `{v}`")))
        })
        .collect()
}

fn bounds(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(',')
        .map(|pair| {
            let (lo, hi) = pair
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("bounds need lo:hi, got `{pair}`")))?;
            let [lo, hi] = [lo, hi].map(|v| v.trim().parse::<f64>());
            match (lo, hi) {
                (Ok(lo), Ok(hi)) if lo < hi => Ok([lo, hi]),
                _ => Err(Error::Config(format!("invalid bounds `{pair}`"))),
            }
        })
        .collect()
}

impl Flags {
    fn into_partial(self) -> Result<(Option<PathBuf>, PartialConfig)> {
        let partial = PartialConfig {
            case: self.case,
            ell: self.ell,
            beta: self.beta,
            f_class_b: self.f_class_b,
            k_class_c: self.k_class_c,
            h: self.h,
            a: self.a,
            b: self.b,
            c: self.c,
            psi_k: self.psi_k,
            f: self.f,
            chart: self.chart,
            checks: self.checks.as_deref().map(parse_checks).transpose()?,
            points: self.points,
            seed: self.seed,
            tol: self.tol,
            bounds: self.bounds.as_deref().map(bounds).transpose()?,
            ells: self.ells.as_deref().map(numbers).transpose()?,
            expr: self.expr,
            vars: self.vars.map(|v| v.split(',').map(|s| s.trim().to_string()).collect()),
            at: self.at.as_deref().map(numbers).transpose()?,
            order: self.order,
            out: self.out,
        };
        Ok((self.config, partial))
    }
}

fn execute(mode: Mode, flags: Flags) -> Result<i32> {
    let (file, from_flags) = flags.into_partial()?;
    let base = match file {
        Some(path) => PartialConfig::from_json_file(&path)?,
        None => PartialConfig::default(),
    };
    let cfg = base.overlay(from_flags).resolve(mode)?;
    let report = run(&cfg)?;
    let json = report.to_json();
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &json).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?
        }
        None => print!("{json}"),
    }
    for c in &report.checks {
        eprintln!("{:<12} max {:.3e}  tol {:.1e}  {:?}", c.name, c.max, c.tol, c.verdict);
    }
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mode, flags) = match cli.command {
        Command::Verify(f) => (Mode::Verify, f),
        Command::Lift(f) => (Mode::Lift, f),
        Command::Limit(f) => (Mode::Limit, f),
        Command::Eval(f) => (Mode::Eval, f),
    };
    let code = execute(mode, flags).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        error_exit_code(&e)
    });
    ExitCode::from(code as u8)
}
