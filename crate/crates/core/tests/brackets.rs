use noether_core::classical::{
    hamilton_derivative, homogeneous_hamiltonian, lie_derivative_coefficient, noether_rate,
    poisson_homogeneous, poisson_vertical, ConfigurationSpace, Hamiltonian, ProjectableField,
    SymmetryCheck,
};
use noether_core::expr::compare;
use noether_core::Expr;
use proptest::prelude::*;

const PHASE: [&str; 6] = ["t", "q1", "q2", "p1", "p2", "p"];

fn space() -> ConfigurationSpace {
    ConfigurationSpace::new(2).unwrap()
}

/// Sum of up to four monomials with small integer coefficients and
/// exponents at most 2 in the first `nvars` of `PHASE`.
fn polynomial(nvars: usize) -> impl Strategy<Value = Expr> {
    let term = (-3i64..=3, prop::collection::vec(0u32..=2, nvars));
    prop::collection::vec(term, 1..=4).prop_map(move |terms| {
        Expr::sum(terms.into_iter().map(|(c, exps)| {
            exps.iter().enumerate().fold(Expr::int(c), |acc, (i, e)| {
                acc * Expr::var(PHASE[i]).pow(*e)
            })
        }))
    })
}

fn assert_zero(e: &Expr) -> Result<(), TestCaseError> {
    let s = space();
    let check = SymmetryCheck::default();
    let c = compare(
        e,
        &Expr::zero(),
        &s.sample_domain(&check),
        32,
        1e-9,
        check.seed,
    )
    .unwrap();
    prop_assert!(
        c.equal,
        "residual {} at {:?}",
        c.max_residual,
        c.worst_point
    );
    Ok(())
}

fn assert_same(a: &Expr, b: &Expr) -> Result<(), TestCaseError> {
    let s = space();
    let check = SymmetryCheck::default();
    let c = compare(a, b, &s.sample_domain(&check), 32, 1e-9, check.seed).unwrap();
    prop_assert!(
        c.equal,
        "residual {} at {:?}",
        c.max_residual,
        c.worst_point
    );
    Ok(())
}

fn field(at_connection: bool, comps: Vec<Expr>) -> ProjectableField {
    ProjectableField::new(&space(), if at_connection { 1 } else { 0 }, comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn antisymmetry(f in polynomial(6), g in polynomial(6)) {
        let s = space();
        assert_same(&poisson_homogeneous(&s, &f, &g), &(-poisson_homogeneous(&s, &g, &f)))?;
    }

    #[test]
    fn leibniz(f in polynomial(6), g in polynomial(6), h in polynomial(6)) {
        let s = space();
        let lhs = poisson_homogeneous(&s, &f, &(&g * &h));
        let rhs = poisson_homogeneous(&s, &f, &g) * &h + &g * poisson_homogeneous(&s, &f, &h);
        assert_same(&lhs, &rhs)?;
    }

    #[test]
    fn jacobi(f in polynomial(6), g in polynomial(6), h in polynomial(6)) {
        let s = space();
        let b = |x: &Expr, y: &Expr| poisson_homogeneous(&s, x, y);
        let rest = b(&g, &b(&h, &f)) + b(&h, &b(&f, &g));
        assert_same(&b(&f, &b(&g, &h)), &(-rest))?;
    }

    #[test]
    fn vertical_bracket_is_restriction(f in polynomial(5), g in polynomial(5)) {
        let s = space();
        assert_same(&poisson_vertical(&s, &f, &g).unwrap(), &poisson_homogeneous(&s, &f, &g))?;
    }

    #[test]
    fn homogeneous_hamiltonian_generates_flow(h in polynomial(5), f in polynomial(5)) {
        let s = space();
        let h = Hamiltonian::new(s.clone(), h).unwrap();
        let lhs = hamilton_derivative(&h, &f);
        let rhs = poisson_homogeneous(&s, &homogeneous_hamiltonian(&h), &f);
        assert_same(&lhs, &rhs)?;
    }

    #[test]
    fn lie_derivative_is_minus_noether_rate(
        h in polynomial(5),
        connection in any::<bool>(),
        u1 in polynomial(3),
        u2 in polynomial(3),
    ) {
        let h = Hamiltonian::new(space(), h).unwrap();
        let u = field(connection, vec![u1, u2]);
        assert_zero(&(lie_derivative_coefficient(&u, &h) + noether_rate(&u, &h)))?;
    }
}
