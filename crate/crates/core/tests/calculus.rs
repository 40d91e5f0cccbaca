use noether_core::expr::{parse, Binding};
use noether_core::{Expr, Rational};
use proptest::prelude::*;

const VARS: [&str; 3] = ["t", "q1", "p1"];

/// Random expression trees over `VARS` with the four functions.
fn expression() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-4i64..=4).prop_map(Expr::int),
        prop::sample::select(VARS.to_vec()).prop_map(Expr::var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), 0u32..=3).prop_map(|(a, n)| a.pow(n)),
            inner.clone().prop_map(|a| -a),
            inner.clone().prop_map(|a| a.sin()),
            inner.clone().prop_map(|a| a.cos()),
            // bounded argument keeps exp finite on the sample box
            inner.prop_map(|a| a.sin().exp()),
        ]
    })
}

fn binding(t: f64, q: f64, p: f64) -> Binding<f64> {
    Binding::new().with("t", t).with("q1", q).with("p1", p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(e in expression()) {
        let back = parse(&e.to_string(), &VARS, &[]).unwrap();
        let b = binding(0.3, -1.1, 0.7);
        let (x, y) = (e.evaluate(&b).unwrap(), back.evaluate(&b).unwrap());
        prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn derivative_matches_central_difference(
        e in expression(),
        var in 0usize..3,
        t in -1.0f64..1.0,
        q in -1.0f64..1.0,
        p in -1.0f64..1.0,
    ) {
        let name = VARS[var];
        let d = e.differentiate(name);
        let at = |dx: f64| {
            let mut b = binding(t, q, p);
            let v = *b.get(name).unwrap();
            b.set(name, v + dx);
            e.evaluate(&b).unwrap()
        };
        let exact = d.evaluate(&binding(t, q, p)).unwrap();
        let fd = |h: f64| (at(h) - at(-h)) / (2.0 * h);
        let (e1, e2) = ((fd(1e-3) - exact).abs(), (fd(5e-4) - exact).abs());
        let scale = 1.0 + exact.abs();
        // either already at rounding level or shrinking like h^2
        prop_assert!(e2 <= 1e-7 * scale || e2 <= 0.3 * e1, "exact {exact}, errors {e1} {e2}");
    }
}

#[test]
fn rational_evaluation_is_exact() {
    let e = parse("(q1 + 1/3)^2 - q1^2 - 2/3*q1", &["q1"], &[]).unwrap();
    let b: Binding<Rational> = [("q1", Rational::new(7, 5))].into_iter().collect();
    assert_eq!(e.evaluate(&b).unwrap(), Rational::new(1, 9));
    let d = e.differentiate("q1");
    assert_eq!(d.evaluate(&b).unwrap(), Rational::from_integer(0));
}

#[test]
fn float_and_single_precision_agree() {
    let e = parse("exp(-k*t)*p1^2/2 + sin(q1)", &["t", "q1", "p1"], &["k"]).unwrap();
    let b64 = Binding::new()
        .with("t", 0.5f64)
        .with("q1", 0.25)
        .with("p1", 1.5)
        .with("k", 1.0);
    let b32 = Binding::new()
        .with("t", 0.5f32)
        .with("q1", 0.25)
        .with("p1", 1.5)
        .with("k", 1.0);
    let (x, y) = (e.evaluate(&b64).unwrap(), e.evaluate(&b32).unwrap());
    assert!((x - y as f64).abs() < 1e-6);
}
