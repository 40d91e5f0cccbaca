use noether_core::classical::{
    poisson_homogeneous, ConfigurationSpace, Hamiltonian, SymmetryCheck,
};
use noether_core::quantum::{
    dirac_residual, hermiticity_residual, quantize_affine, quantize_hamiltonian, stationary_states,
    AffineObservable, Grid, GridOperator, Ordering, QuadraticHamiltonian, WaveFunction,
};
use noether_core::Expr;
use num_complex::Complex;
use proptest::prelude::*;

fn space() -> ConfigurationSpace {
    ConfigurationSpace::new(1)
        .unwrap()
        .with_parameter("k", 1.0)
        .unwrap()
}

/// Polynomials in `(t, q1)` of degree at most 2 in each.
fn coefficient() -> impl Strategy<Value = Expr> {
    let term = (-3i64..=3, 0u32..=2, 0u32..=2);
    prop::collection::vec(term, 1..=3).prop_map(|terms| {
        Expr::sum(
            terms
                .into_iter()
                .map(|(c, i, j)| Expr::int(c) * Expr::var("t").pow(i) * Expr::var("q1").pow(j)),
        )
    })
}

fn affine() -> impl Strategy<Value = AffineObservable> {
    (0i64..=1, coefficient(), coefficient())
        .prop_map(|(at, a, b)| AffineObservable::new(&space(), at, a, b).unwrap())
}

fn obs(at: i64, a: &str, b: &str) -> AffineObservable {
    let s = space();
    AffineObservable::new(&s, at, s.parse(a).unwrap(), s.parse(b).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn dirac_condition_holds(f in affine(), g in affine()) {
        let s = space();
        let r = dirac_residual(&s, &f, &g, Ordering::Symmetric).unwrap();
        let (worst, at) = r.max_residual(&s, &SymmetryCheck::default()).unwrap();
        prop_assert!(worst <= 1e-9, "{at}: {worst}");
    }

    #[test]
    fn quantized_affine_is_hermitian(a in coefficient(), b in coefficient(), t in 0.0f64..2.0) {
        let s = space();
        let grid = Grid::new(-3.0, 3.0, 40).unwrap();
        let op = quantize_affine(&s, &AffineObservable::new(&s, 0, a, b).unwrap(), &grid, t).unwrap();
        prop_assert!(op.hermitian_defect() <= 1e-13 * (1.0 + op.max_abs()));
    }
}

#[test]
fn dirac_needs_divergence_term() {
    let s = space();
    let check = SymmetryCheck::default();
    let f = obs(0, "q1", "0");
    let g = obs(0, "q1^2", "0");
    assert!(dirac_residual(&s, &f, &g, Ordering::Symmetric)
        .unwrap()
        .is_zero(&s, &check)
        .unwrap());
    assert!(!dirac_residual(&s, &f, &g, Ordering::Transport)
        .unwrap()
        .is_zero(&s, &check)
        .unwrap());
}

#[test]
fn dirac_examples() {
    let s = space();
    let check = SymmetryCheck::default();
    let p = obs(0, "1", "0");
    let q = obs(0, "0", "q1");
    for (f, g) in [(&p, &q), (&p, &p), (&obs(0, "q1", "0"), &p)] {
        assert!(dirac_residual(&s, f, g, Ordering::Symmetric)
            .unwrap()
            .is_zero(&s, &check)
            .unwrap());
    }
}

#[test]
fn quantized_hamiltonians_are_hermitian() {
    let s = space();
    let grid = Grid::new(-5.0, 5.0, 80).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.0, 0.4, 0.7, -1.3).unwrap();
    for text in [
        "exp(-k*t)*p1^2/2",
        "(p1^2 + k*q1*p1)/2",
        "(1 + q1^2)*p1^2/2 + t*q1*p1 + q1^4",
    ] {
        let h = Hamiltonian::parse(s.clone(), text).unwrap();
        let q = QuadraticHamiltonian::from_hamiltonian(&h, &SymmetryCheck::default()).unwrap();
        let op = quantize_hamiltonian(&q, &grid, 0.6).unwrap();
        assert!(op.hermitian_defect() <= 1e-13, "{text}");
        assert!(
            hermiticity_residual(&op, &psi).unwrap() <= 1e-13 * (1.0 + op.max_abs()),
            "{text}"
        );
    }
}

/// `h`-weighted norm of `[F, G] psi + i B psi` over points at least three
/// cells from the walls.
fn grid_bracket_defect(f: &AffineObservable, g: &AffineObservable, m: usize) -> f64 {
    let s = space();
    let grid = Grid::new(-8.0, 8.0, m).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.0, 0.0, 1.0, 0.5).unwrap();
    let fo = quantize_affine(&s, f, &grid, 0.0).unwrap();
    let go = quantize_affine(&s, g, &grid, 0.0).unwrap();
    let b = poisson_homogeneous(&s, &f.expr(&s), &g.expr(&s));
    let bo = quantize_affine(
        &s,
        &AffineObservable::decompose(&s, &b).unwrap(),
        &grid,
        0.0,
    )
    .unwrap();
    let fg = fo.apply(&go.apply(&psi.values));
    let gf = go.apply(&fo.apply(&psi.values));
    let bp = bo.apply(&psi.values);
    let i = Complex::new(0.0, 1.0);
    let sum: f64 = (3..m - 3)
        .map(|j| (fg[j] - gf[j] + i * bp[j]).norm_sqr())
        .sum();
    (sum * grid.spacing()).sqrt()
}

#[test]
fn grid_bracket_converges_at_second_order() {
    let f = obs(0, "1 + q1^2/4", "q1");
    let g = obs(0, "q1", "q1^2");
    let coarse = grid_bracket_defect(&f, &g, 199);
    let fine = grid_bracket_defect(&f, &g, 399);
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");

    let c1 = obs(0, "1", "2");
    let c2 = obs(0, "-3", "1/2");
    assert!(grid_bracket_defect(&c1, &c2, 199) <= 1e-12);
}

fn spectrum_op(text: &str, grid: Grid<f64>) -> GridOperator<f64> {
    let h = Hamiltonian::parse(space(), text).unwrap();
    let q = QuadraticHamiltonian::from_hamiltonian(&h, &SymmetryCheck::default()).unwrap();
    quantize_hamiltonian(&q, &grid, 0.0).unwrap()
}

#[test]
fn particle_in_a_box_ground_state() {
    let grid = Grid::new(0.0, 1.0, 200).unwrap();
    let states = stationary_states(&spectrum_op("p1^2/2", grid), 4).unwrap();
    let e1 = std::f64::consts::PI.powi(2) / 2.0;
    for (n, s) in states.iter().enumerate() {
        let want = ((n + 1) * (n + 1)) as f64 * e1;
        assert!((s.energy - want).abs() / want < 0.02);
    }
}

#[test]
fn primed_friction_spectrum_is_real() {
    let grid = Grid::new(-8.0, 8.0, 120).unwrap();
    let op = spectrum_op("(p1^2 + k*q1*p1)/2", grid);
    let states = stationary_states(&op, 12).unwrap();
    for (i, a) in states.iter().enumerate() {
        // Rayleigh quotient of the returned vector is real and equals the eigenvalue
        let z = noether_core::quantum::expectation(&a.state, &op).unwrap();
        assert!(z.im.abs() <= 1e-10);
        assert!((z.re - a.energy).abs() <= 1e-9 * (1.0 + a.energy.abs()));
        for b in &states[i + 1..] {
            assert!(a.state.inner(&b.state).unwrap().norm() <= 1e-10);
        }
    }
}
