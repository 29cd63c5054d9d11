use ftt_core::phasefn::{parse_expr, Expr, Func, PhaseExpr, Var};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-2.0..2.0f64).prop_map(|c| Expr::Const((c * 1000.0).round() / 1000.0)),
        Just(Expr::Var(Var::X)),
        Just(Expr::Var(Var::T)),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        let bx = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |a| Expr::Neg(bx(a))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Add(bx(a), bx(c))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Sub(bx(a), bx(c))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Mul(bx(a), bx(c))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Div(bx(a), bx(c))),
            (inner.clone(), prop::sample::select(vec![2.0, 3.0, 0.5, -1.0]))
                .prop_map(move |(a, p)| Expr::Pow(bx(a), bx(Expr::Const(p)))),
            (inner.clone(), prop::sample::select(vec![Func::Sin, Func::Cos, Func::Exp, Func::Sqrt, Func::Ln]))
                .prop_map(move |(a, f)| Expr::Call(f, bx(a))),
        ]
    })
}

fn central(e: &Expr, v: Var, x: f64, t: f64, h: f64) -> Option<f64> {
    let (p, m) = match v {
        Var::X => (e.eval(x + h, t).ok()?, e.eval(x - h, t).ok()?),
        Var::T => (e.eval(x, t + h).ok()?, e.eval(x, t - h).ok()?),
    };
    Some((p - m) / (2.0 * h))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn symbolic_derivative_matches_central_difference(
        e in expr(),
        x in -1.5..1.5f64,
        t in -1.5..1.5f64,
        wrt_x in any::<bool>(),
    ) {
        let v = if wrt_x { Var::X } else { Var::T };
        let f = e.eval(x, t);
        let d = e.derivative(v).eval(x, t);
        let fd = central(&e, v, x, t, 1e-5);
        // away from singularities and where f is moderate, so that the
        // difference quotient itself is trustworthy
        let (Ok(f), Ok(d), Some(fd)) = (f, d, fd) else { return Ok(()) };
        prop_assume!(f.abs() < 1e3 && d.abs() < 1e4);
        let fd2 = central(&e, v, x, t, 2e-5).unwrap_or(f64::NAN);
        prop_assume!((fd - fd2).abs() <= 1e-7 * d.abs().max(1.0));
        prop_assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "{} at ({}, {}): {} vs {}", e, x, t, d, fd);
    }

    #[test]
    fn print_parse_round_trip(e in expr(), seed in any::<u64>()) {
        let printed = e.to_string();
        let back = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        let mut state = seed | 1;
        for _ in 0..100 {
            // xorshift for the 100 sample points
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = (state % 10_000) as f64 / 2500.0 - 2.0;
            let t = ((state >> 20) % 10_000) as f64 / 2500.0 - 2.0;
            match (e.eval(x, t), back.eval(x, t)) {
                (Ok(a), Ok(c)) => prop_assert_eq!(a.to_bits(), c.to_bits(), "{} -> {}", e, printed),
                (Err(_), Err(_)) => {}
                (a, c) => prop_assert!(false, "{} vs {}: {:?} / {:?}", e, printed, a, c),
            }
        }
    }

    #[test]
    fn simplification_preserves_values(e in expr(), x in -1.5..1.5f64, t in -1.5..1.5f64) {
        if let (Ok(a), Ok(c)) = (e.eval(x, t), e.simplify().eval(x, t)) {
            prop_assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0), "{} vs {}", e, e.simplify());
        }
    }

    #[test]
    fn bent_preset_is_linear_in_each_variable(c in -1.0..1.0f64, x in -5.0..5.0f64, t in 0.0..5.0f64) {
        let p: PhaseExpr = format!("bent:{c}").parse().unwrap();
        prop_assert!((p.eval(x, t).unwrap() - c * x * t).abs() < 1e-12);
        prop_assert!((p.eval_dx(x, t).unwrap() - c * t).abs() < 1e-12);
        prop_assert!((p.eval_dt(x, t).unwrap() - c * x).abs() < 1e-12);
    }
}
