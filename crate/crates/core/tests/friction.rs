//! The damped particle `H = e^{-kt} p^2 / 2` against its closed-form solution
//! `q(t) = q0 + p0 (1 - e^{-kt}) / k`, `p(t) = p0`.

use noether_core::classical::{
    conservation_drift, integrate, is_symmetry, noether_function, ConfigurationSpace, Hamiltonian,
    ProjectableField, SymmetryCheck,
};
use noether_core::Binding;

fn setup(k: f64) -> (ConfigurationSpace, Hamiltonian, ProjectableField) {
    let s = ConfigurationSpace::new(1)
        .unwrap()
        .with_parameter("k", k)
        .unwrap();
    let h = Hamiltonian::parse(s.clone(), "exp(-k*t)*p1^2/2").unwrap();
    let gamma = ProjectableField::parse(&s, 1, &["-k/2*q1"]).unwrap();
    (s, h, gamma)
}

fn q_exact(k: f64, q0: f64, p0: f64, t: f64) -> f64 {
    q0 + p0 * (1.0 - (-k * t).exp()) / k
}

#[test]
fn symmetry_verdicts() {
    let check = SymmetryCheck::default();
    let (s, h, gamma) = setup(1.0);
    assert!(is_symmetry(&gamma, &h, &check).unwrap());
    assert!(is_symmetry(&ProjectableField::translation(&s, 0), &h, &check).unwrap());
    let force = Hamiltonian::parse(s.clone(), "p1^2/2 + q1").unwrap();
    assert!(!is_symmetry(&ProjectableField::translation(&s, 0), &force, &check).unwrap());
    // Gamma with the wrong rate is not a symmetry
    let wrong = ProjectableField::parse(&s, 1, &["-k*q1"]).unwrap();
    assert!(!is_symmetry(&wrong, &h, &check).unwrap());
}

#[test]
fn conserved_noether_functions() {
    let (s, h, gamma) = setup(1.0);
    let init = Binding::new().with("q1", 0.0).with("p1", 1.0);
    let traj = integrate(&h, &init, 0.0, 5.0, 1e-3).unwrap();
    let energy = noether_function(&gamma, &h);
    let momentum = noether_function(&ProjectableField::translation(&s, 0), &h);
    assert!(conservation_drift(&traj, &s, &energy).unwrap() <= 1e-8);
    assert!(conservation_drift(&traj, &s, &momentum).unwrap() <= 1e-12);
    assert!((traj.final_state()[0] - q_exact(1.0, 0.0, 1.0, 5.0)).abs() <= 1e-9);
}

#[test]
fn other_damping_rates() {
    for k in [0.3, 2.5] {
        let (s, h, gamma) = setup(k);
        let init = Binding::new().with("q1", -0.5).with("p1", 2.0);
        let traj = integrate(&h, &init, 0.0, 3.0, 1e-3).unwrap();
        assert!((traj.final_state()[0] - q_exact(k, -0.5, 2.0, 3.0)).abs() <= 1e-9);
        assert!(conservation_drift(&traj, &s, &noether_function(&gamma, &h)).unwrap() <= 1e-8);
    }
}

#[test]
fn rk4_is_fourth_order() {
    let (_, h, _) = setup(1.0);
    let init = Binding::new().with("q1", 0.0).with("p1", 1.0);
    let err = |dt: f64| {
        let traj = integrate(&h, &init, 0.0, 5.0, dt).unwrap();
        (traj.final_state()[0] - q_exact(1.0, 0.0, 1.0, 5.0)).abs()
    };
    let ratio = err(0.2) / err(0.1);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}
