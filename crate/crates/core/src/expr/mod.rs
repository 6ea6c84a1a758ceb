//! A small arithmetic language for the free functions of the solution
//! families (β, F, K, H, A, B, c, k, gauge functions), evaluated exactly on jets.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::jets::{Chart, ChartPoint, Jet, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sin,
    Cos,
    Sqrt,
    Tanh,
    Cosh,
    Sinh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Ln,
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Sqrt,
        Func::Tanh,
        Func::Cosh,
        Func::Sinh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, arg: &Jet) -> Option<Jet> {
        Some(match self {
            Func::Ln => return arg.ln(),
            Func::Sqrt => return arg.sqrt(),
            Func::Exp => arg.exp(),
            Func::Sin => arg.sin(),
            Func::Cos => arg.cos(),
            Func::Tanh => arg.tanh(),
            Func::Cosh => arg.cosh(),
            Func::Sinh => arg.sinh(),
        })
    }
}

/// Parsed expression tree. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Parses `source`, accepting only the identifiers listed in `vars`.
pub fn parse(source: &str, vars: &[&str]) -> Result<Expr> {
    parser::Parser::new(source, vars)?.parse_all()
}

impl Expr {
    pub fn parse(source: &str, vars: &[&str]) -> Result<Expr> {
        parse(source, vars)
    }

    /// Names referenced by the expression.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_vars(out),
            Expr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.variables().is_empty()
    }

    /// Evaluates with every variable resolved by `resolve` to a jet of
    /// dimension `dim` and at least order `order`.
    pub fn eval_with(&self, dim: usize, order: usize, resolve: &dyn Fn(&str) -> Option<Jet>) -> Result<Jet> {
        match self {
            Expr::Num(v) => Ok(Jet::constant(dim, order, *v)),
            Expr::Var(name) => resolve(name)
                .map(|j| if j.order() > order { j.truncate(order) } else { j })
                .ok_or_else(|| Error::UnknownIdentifier(name.clone())),
            Expr::Neg(e) => Ok(-e.eval_with(dim, order, resolve)?),
            Expr::Call(f, e) => {
                let arg = e.eval_with(dim, order, resolve)?;
                f.apply(&arg).ok_or_else(|| Error::Domain {
                    op: f.name(),
                    expr: e.to_string(),
                    value: arg.value(),
                })
            }
            Expr::Bin(op, a, b) => {
                let lhs = a.eval_with(dim, order, resolve)?;
                if *op == BinOp::Pow {
                    return self.eval_pow(&lhs, a, b, dim, order, resolve);
                }
                let rhs = b.eval_with(dim, order, resolve)?;
                Ok(match op {
                    BinOp::Add => lhs + rhs,
                    BinOp::Sub => lhs - rhs,
                    BinOp::Mul => lhs * rhs,
                    BinOp::Div => {
                        if rhs.value() == 0.0 {
                            return Err(Error::Domain {
                                op: "division",
                                expr: b.to_string(),
                                value: 0.0,
                            });
                        }
                        lhs.checked_div(&rhs)?
                    }
                    BinOp::Pow => unreachable!(),
                })
            }
        }
    }

    fn eval_pow(
        &self,
        base: &Jet,
        base_expr: &Expr,
        exp_expr: &Expr,
        dim: usize,
        order: usize,
        resolve: &dyn Fn(&str) -> Option<Jet>,
    ) -> Result<Jet> {
        let domain = |value: f64| Error::Domain {
            op: "pow",
            expr: base_expr.to_string(),
            value,
        };
        if exp_expr.is_constant() {
            let e = exp_expr.eval_with(dim, 0, resolve)?.value();
            if e.fract() == 0.0 && e.abs() <= 1024.0 {
                return base.powi(e as i32).map_err(|_| domain(base.value()));
            }
            return base.powf(e).ok_or_else(|| domain(base.value()));
        }
        let exponent = exp_expr.eval_with(dim, order, resolve)?;
        let ln = base.ln().ok_or_else(|| domain(base.value()))?;
        Ok((exponent * ln).exp())
    }

    /// Evaluates at a chart point: coordinates resolve to coordinate jets,
    /// other names to the point's parameters.
    pub fn eval_jet(&self, point: &ChartPoint, order: usize) -> Result<Jet> {
        let dim = point.dim();
        self.eval_with(dim, order, &|name| {
            if let Some(i) = point.chart().index_of(name) {
                Some(point.coordinate_jet(i, order))
            } else {
                point.param(name).map(|v| Jet::constant(dim, order, v))
            }
        })
    }

    /// Binds the expression to a chart: every variable must be a coordinate of
    /// `chart` or one of `params`.
    pub fn bind(&self, chart: &Chart, params: &[(&str, f64)]) -> Result<ScalarField> {
        enum Slot {
            Coord(usize),
            Param(f64),
        }
        let mut slots = Vec::new();
        for name in self.variables() {
            let slot = if let Some(i) = chart.index_of(&name) {
                Slot::Coord(i)
            } else if let Some(&(_, v)) = params.iter().find(|(n, _)| *n == name) {
                Slot::Param(v)
            } else {
                return Err(Error::UnknownIdentifier(name));
            };
            slots.push((name, slot));
        }
        let expr = self.clone();
        let chart = chart.clone();
        Ok(ScalarField::new(move |pt, order| {
            if pt.chart() != &chart {
                return Err(Error::ChartMismatch(format!(
                    "expression bound to {chart} evaluated on {}",
                    pt.chart()
                )));
            }
            let dim = pt.dim();
            expr.eval_with(dim, order, &|name| {
                slots.iter().find(|(n, _)| n == name).map(|(_, s)| match s {
                    Slot::Coord(i) => pt.coordinate_jet(*i, order),
                    Slot::Param(v) => Jet::constant(dim, order, *v),
                })
            })
        }))
    }

    /// Substitutes jet-valued fields for variables: `subs` maps each variable
    /// name to a field on the evaluation chart.
    pub fn compose(&self, subs: Vec<(String, ScalarField)>) -> Result<ScalarField> {
        for name in self.variables() {
            if !subs.iter().any(|(n, _)| *n == name) {
                return Err(Error::UnknownIdentifier(name));
            }
        }
        let expr = self.clone();
        Ok(ScalarField::new(move |pt, order| {
            let mut vals = Vec::with_capacity(subs.len());
            for (name, f) in &subs {
                vals.push((name.as_str(), f.jet(pt, order)?));
            }
            expr.eval_with(pt.dim(), order, &|name| {
                vals.iter().find(|(n, _)| *n == name).map(|(_, j)| j.clone())
            })
        }))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(name) => f.write_str(name),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Bin(op, a, b) => {
                let (sym, prec) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    wrap(f, a, a.precedence() <= 4)?;
                    f.write_str(sym)?;
                    wrap(f, b, b.precedence() < 3)
                } else {
                    wrap(f, a, a.precedence() < prec)?;
                    f.write_str(sym)?;
                    wrap(f, b, b.precedence() <= prec)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Chart;

    fn at(chart: &Chart, coords: &[f64]) -> ChartPoint {
        ChartPoint::new(chart, coords).unwrap()
    }

    #[test]
    fn p_log_p_minus_p() {
        let e = parse("p*ln(p)-p", &["p"]).unwrap();
        let chart = Chart::new(&["p"]).unwrap();
        let v = e.eval_jet(&at(&chart, &[1.0]), 0).unwrap().value();
        assert_eq!(v, -1.0);
    }

    #[test]
    fn discriminant_arithmetic() {
        let e = parse("y^2-4*x*t", &["x", "y", "t"]).unwrap();
        let v = e.eval_jet(&at(&Chart::xyt(), &[1.0, 3.0, 2.0]), 0).unwrap().value();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn unbalanced_paren_offset() {
        let err = parse("2*(p", &["p"]).unwrap_err();
        assert!(matches!(err, Error::Syntax { offset: 4, .. }), "{err:?}");
    }

    #[test]
    fn unknown_identifier_is_named() {
        assert_eq!(
            parse("x + q", &["x"]).unwrap_err(),
            Error::UnknownIdentifier("q".into())
        );
        assert_eq!(
            parse("foo(x)", &["x"]).unwrap_err(),
            Error::UnknownIdentifier("foo".into())
        );
    }

    #[test]
    fn empty_source_rejected() {
        assert!(matches!(parse("  ", &[]), Err(Error::Syntax { .. })));
    }

    #[test]
    fn precedence_rules() {
        let v = ["a", "b", "c"];
        assert_eq!(parse("a-b-c", &v).unwrap(), parse("(a-b)-c", &v).unwrap());
        assert_eq!(parse("a^b^c", &v).unwrap(), parse("a^(b^c)", &v).unwrap());
        assert_eq!(parse("-a^b", &v).unwrap(), parse("-(a^b)", &v).unwrap());
        assert_eq!(parse("a+b*c", &v).unwrap(), parse("a+(b*c)", &v).unwrap());
        assert_eq!(parse("a/b/c", &v).unwrap(), parse("(a/b)/c", &v).unwrap());
    }

    #[test]
    fn exp_t_sin_y_is_t_eigenfunction() {
        let e = parse("exp(t)*sin(y)", &["x", "y", "t"]).unwrap();
        let j = e.eval_jet(&at(&Chart::xyt(), &[0.2, 0.7, -0.4]), 2).unwrap();
        assert!((j.grad(2) - j.value()).abs() < 1e-15);
        assert!((j.hess(2, 2) - j.value()).abs() < 1e-15);
    }

    #[test]
    fn triple_product_partials() {
        let e = parse("x*y*t", &["x", "y", "t"]).unwrap();
        let j = e.eval_jet(&at(&Chart::xyt(), &[0.3, -2.0, 5.0]), 3).unwrap();
        assert_eq!(j.third(0, 1, 2), 1.0);
        for i in 0..3 {
            assert_eq!(j.third(i, i, i), 0.0);
            assert_eq!(j.hess(i, i), 0.0);
        }
    }

    #[test]
    fn inverse_square_root_derivative() {
        let e = parse("1/sqrt(y^2-4*x*t)", &["x", "y", "t"]).unwrap();
        let j = e.eval_jet(&at(&Chart::xyt(), &[1.0, 3.0, 2.0]), 1).unwrap();
        assert!((j.value() - 1.0).abs() < 1e-15);
        // ∂x r^{-1} = 2t r^{-3}
        assert!((j.grad(0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse("ln(x-1)", &["x"]).unwrap();
        let chart = Chart::new(&["x"]).unwrap();
        match e.eval_jet(&at(&chart, &[0.5]), 0) {
            Err(Error::Domain { op: "ln", expr, .. }) => assert_eq!(expr, "x - 1"),
            other => panic!("{other:?}"),
        }
        let d = parse("1/(x-1)", &["x"]).unwrap();
        assert!(matches!(
            d.eval_jet(&at(&chart, &[1.0]), 0),
            Err(Error::Domain { op: "division", .. })
        ));
        let s = parse("sqrt(x)", &["x"]).unwrap();
        assert!(s.eval_jet(&at(&chart, &[-1.0]), 0).is_err());
    }

    #[test]
    fn fractional_power_needs_positive_base() {
        let chart = Chart::new(&["s"]).unwrap();
        let e = parse("s^(-1/3)", &["s"]).unwrap();
        let j = e.eval_jet(&at(&chart, &[8.0]), 1).unwrap();
        assert!((j.value() - 0.5).abs() < 1e-15);
        assert!((j.grad(0) + (1.0 / 3.0) * 8f64.powf(-4.0 / 3.0)).abs() < 1e-15);
        assert!(e.eval_jet(&at(&chart, &[-8.0]), 0).is_err());
        // integer exponents accept negative bases
        let sq = parse("s^2", &["s"]).unwrap();
        assert_eq!(sq.eval_jet(&at(&chart, &[-3.0]), 0).unwrap().value(), 9.0);
    }

    #[test]
    fn parameters_resolve_from_point() {
        let e = parse("x/ell", &["x", "ell"]).unwrap();
        let chart = Chart::new(&["x"]).unwrap();
        let pt = at(&chart, &[3.0]).with_param("ell", 2.0);
        assert_eq!(e.eval_jet(&pt, 0).unwrap().value(), 1.5);
        let f = e.bind(&chart, &[("ell", 4.0)]).unwrap();
        assert_eq!(f.value(&at(&chart, &[3.0])).unwrap(), 0.75);
        assert!(e.bind(&chart, &[]).is_err());
    }

    #[test]
    fn display_round_trips() {
        let vars = ["a", "b", "c"];
        for src in [
            "a - (b - c)",
            "-(a*b)",
            "(-a)^b",
            "a^-b",
            "(a^b)^c",
            "--a",
            "a*-b",
            "sin(a)/(b*c)",
            "2.5e-7*a",
        ] {
            let e = parse(src, &vars).unwrap();
            let again = parse(&e.to_string(), &vars).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }
}
