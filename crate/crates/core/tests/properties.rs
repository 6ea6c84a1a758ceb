use proptest::prelude::*;

use ewbench::ew::{gauge_transform, gt_residual, max_abs, psi_residual, WeightedForm};
use ewbench::expr::Expr;
use ewbench::families::heisenberg;
use ewbench::forms::{ext_d, hodge3, wedge, PForm};
use ewbench::jets::{fd_oracle, Chart, ChartPoint};
use ewbench::lift::psi_c_omega;

const VARS: [&str; 3] = ["x", "y", "t"];

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("t".to_string()),
        (-3i32..=3).prop_map(|n| n.to_string()),
        (1u32..9).prop_map(|n| format!("0.{n}")),
    ]
}

/// Smooth expressions on the whole box, so jets never hit a domain error.
fn smooth_expr() -> impl Strategy<Value = String> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} * {b}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp(0.3*{a})")),
            inner.prop_map(|a| format!("({a})^2")),
        ]
    })
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-0.9f64..0.9, -0.9f64..0.9, -0.9f64..0.9]
}

fn form(chart: &Chart, degree: usize, comps: &[String]) -> PForm {
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    PForm::from_exprs(chart, degree, &refs, &[]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn display_round_trips(src in smooth_expr(), p in point()) {
        let e = Expr::parse(&src, &VARS).unwrap();
        let again = Expr::parse(&e.to_string(), &VARS).unwrap();
        prop_assert_eq!(e.to_string(), again.to_string());
        let pt = ChartPoint::new(&Chart::xyt(), &p).unwrap();
        let (a, b) = (e.eval_jet(&pt, 0).unwrap().value(), again.eval_jet(&pt, 0).unwrap().value());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn jets_match_finite_differences(src in smooth_expr(), p in point()) {
        let chart = Chart::xyt();
        let field = Expr::parse(&src, &VARS).unwrap().bind(&chart, &[]).unwrap();
        let pt = ChartPoint::new(&chart, &p).unwrap();
        let jet = field.jet(&pt, 2).unwrap();
        for vars in [vec![0], vec![1], vec![2], vec![0, 1], vec![2, 2]] {
            let exact = jet.derivative(&vars);
            let approx = fd_oracle(&field, &pt, &vars).unwrap();
            prop_assert!((exact - approx).abs() <= 1e-4 * exact.abs().max(1.0), "{src} {vars:?}: {exact} vs {approx}");
        }
    }

    #[test]
    fn d_squared_vanishes(a in smooth_expr(), b in smooth_expr(), c in smooth_expr(), p in point()) {
        let chart = Chart::xyt();
        let pt = ChartPoint::new(&chart, &p).unwrap();
        let comps = [a, b, c];
        for degree in 0..=2 {
            let f = form(&chart, degree, &comps[..if degree == 0 { 1 } else { 3 }]);
            prop_assert!(ext_d(&ext_d(&f)).eval(&pt, 0).unwrap().max_abs() <= 1e-9);
        }
    }

    #[test]
    fn wedge_is_graded_and_associative(
        a in prop::collection::vec(smooth_expr(), 3),
        b in prop::collection::vec(smooth_expr(), 3),
        c in prop::collection::vec(smooth_expr(), 3),
        p in point(),
    ) {
        let chart = Chart::xyt();
        let pt = ChartPoint::new(&chart, &p).unwrap();
        let (fa, fb, fc) = (form(&chart, 1, &a), form(&chart, 1, &b), form(&chart, 1, &c));
        let ab = wedge(&fa, &fb).unwrap().eval(&pt, 0).unwrap();
        let ba = wedge(&fb, &fa).unwrap().eval(&pt, 0).unwrap();
        prop_assert!(ab.add(&ba).unwrap().max_abs() <= 1e-12 * ab.max_abs().max(1.0));
        let left = wedge(&wedge(&fa, &fb).unwrap(), &fc).unwrap().eval(&pt, 0).unwrap();
        let right = wedge(&fa, &wedge(&fb, &fc).unwrap()).unwrap().eval(&pt, 0).unwrap();
        prop_assert!(left.sub(&right).unwrap().max_abs() <= 1e-10 * left.max_abs().max(1.0));
    }

    #[test]
    fn hodge_star_is_linear(
        a in prop::collection::vec(smooth_expr(), 3),
        b in prop::collection::vec(smooth_expr(), 3),
        k in -2.0f64..2.0,
        p in point(),
    ) {
        let chart = Chart::xyt();
        let pt = ChartPoint::new(&chart, &p).unwrap();
        let frame = heisenberg(1.0).unwrap().frame;
        let (fa, fb) = (form(&chart, 1, &a), form(&chart, 1, &b));
        let combined = hodge3(&fa.scale(k).add(&fb).unwrap(), &frame).unwrap().eval(&pt, 0).unwrap();
        let separate = hodge3(&fa, &frame).unwrap().eval(&pt, 0).unwrap().scale(k)
            .add(&hodge3(&fb, &frame).unwrap().eval(&pt, 0).unwrap()).unwrap();
        prop_assert!(combined.sub(&separate).unwrap().max_abs() <= 1e-9 * combined.max_abs().max(1.0));
    }

    #[test]
    fn gauge_transforms_preserve_gt(f in smooth_expr(), p in point()) {
        let chart = Chart::xyt();
        let s = heisenberg(1.0).unwrap();
        let f = Expr::parse(&format!("0.2*({f})"), &VARS).unwrap().bind(&chart, &[]).unwrap();
        let gauged = gauge_transform(&s, &f).unwrap();
        let pt = ChartPoint::new(&chart, &p).unwrap();
        prop_assert!(max_abs(&gt_residual(&gauged, &pt).unwrap()) <= 1e-6);
    }

    #[test]
    fn psi_equation_is_conformally_covariant(f in smooth_expr(), c in -1.0f64..1.0, p in point()) {
        // ψ of weight −1 transforms as e^{-f} ψ alongside the structure
        let chart = Chart::xyt();
        let s = heisenberg(1.0).unwrap();
        let psi = psi_c_omega(&s, c);
        let f = Expr::parse(&format!("0.2*({f})"), &VARS).unwrap().bind(&chart, &[]).unwrap();
        let gauged = gauge_transform(&s, &f).unwrap();
        let moved = WeightedForm::new(psi.form.mul_field(&f.scale(-1.0).exp()), -1.0);
        let pt = ChartPoint::new(&chart, &p).unwrap();
        prop_assert!(psi_residual(&moved, &gauged, &pt).unwrap().max_abs() <= 1e-9);
    }
}
