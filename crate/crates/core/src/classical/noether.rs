use super::bracket::hamilton_derivative;
use super::space::{ConfigurationSpace, Hamiltonian, ProjectableField, SymmetryCheck, TIME};
use crate::expr::{compare, Comparison, Expr, SampleError};

/// Components of the canonical lift of a projectable field to phase space:
/// coefficients of `d_t`, `d_{q^i}` and `d_{p_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedField {
    pub time: Expr,
    pub position: Vec<Expr>,
    pub momentum: Vec<Expr>,
}

impl LiftedField {
    pub fn add(&self, other: &LiftedField) -> LiftedField {
        let zip = |a: &[Expr], b: &[Expr]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        LiftedField {
            time: &self.time + &other.time,
            position: zip(&self.position, &other.position),
            momentum: zip(&self.momentum, &other.momentum),
        }
    }
}

/// `u^t d_t + u^i d_i - p_j d_i u^j d^i`.
pub fn canonical_lift(space: &ConfigurationSpace, u: &ProjectableField) -> LiftedField {
    let n = space.dimension();
    let momentum = (0..n)
        .map(|i| {
            -Expr::sum((0..n).map(|j| {
                Expr::var(space.momentum(j)) * u.components()[j].differentiate(space.coordinate(i))
            }))
        })
        .collect();
    LiftedField {
        time: Expr::int(u.time_component()),
        position: u.components().to_vec(),
        momentum,
    }
}

/// `u^i p_i`.
pub fn momentum_along(space: &ConfigurationSpace, u: &ProjectableField) -> Expr {
    Expr::sum(
        u.components()
            .iter()
            .enumerate()
            .map(|(i, c)| c * Expr::var(space.momentum(i))),
    )
}

/// Noether symmetry function `u^t H - u^i p_i`: minus the momentum along a
/// vertical field, an energy function for a connection.
pub fn noether_function(u: &ProjectableField, h: &Hamiltonian) -> Expr {
    let momentum = momentum_along(h.space(), u);
    if u.is_connection() {
        h.expr() - momentum
    } else {
        -momentum
    }
}

/// The `dt` coefficient of the Lie derivative of the Hamiltonian form along
/// the canonical lift of `u`:
/// `d_t(p_i u^i - u^t H) - u^i d_i H + p_j d_i u^j d^i H`.
pub fn lie_derivative_coefficient(u: &ProjectableField, h: &Hamiltonian) -> Expr {
    let space = h.space();
    let n = space.dimension();
    let ut_h = if u.is_connection() {
        h.expr().clone()
    } else {
        Expr::zero()
    };
    let time_part = (momentum_along(space, u) - ut_h).differentiate(TIME);
    let transport =
        Expr::sum((0..n).map(|i| &u.components()[i] * h.expr().differentiate(space.coordinate(i))));
    let rescale = Expr::sum((0..n).flat_map(|i| {
        let dh = h.expr().differentiate(space.momentum(i));
        (0..n).map(move |j| {
            Expr::var(space.momentum(j))
                * u.components()[j].differentiate(space.coordinate(i))
                * &dh
        })
    }));
    time_part - transport + rescale
}

/// Samples the Lie-derivative coefficient against zero.
pub fn symmetry_residual(
    u: &ProjectableField,
    h: &Hamiltonian,
    check: &SymmetryCheck,
) -> Result<Comparison, SampleError> {
    let domain = h.space().sample_domain(check);
    compare(
        &lie_derivative_coefficient(u, h),
        &Expr::zero(),
        &domain,
        check.samples,
        check.tol,
        check.seed,
    )
}

/// Whether `u` generates a symmetry of the Hamiltonian form.
pub fn is_symmetry(
    u: &ProjectableField,
    h: &Hamiltonian,
    check: &SymmetryCheck,
) -> Result<bool, SampleError> {
    symmetry_residual(u, h, check).map(|c| c.equal)
}

/// `gamma_H` contracted with `dT_u`; the negative of the Lie coefficient.
pub fn noether_rate(u: &ProjectableField, h: &Hamiltonian) -> Expr {
    hamilton_derivative(h, &noether_function(u, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::probabilistic_equal;

    fn friction() -> (ConfigurationSpace, Hamiltonian, ProjectableField) {
        let s = ConfigurationSpace::new(1)
            .unwrap()
            .with_parameter("k", 1.0)
            .unwrap();
        let h = Hamiltonian::parse(s.clone(), "exp(-k*t)*p1^2/2").unwrap();
        let gamma = ProjectableField::parse(&s, 1, &["-k/2*q1"]).unwrap();
        (s, h, gamma)
    }

    fn zero_on(s: &ConfigurationSpace, e: &Expr) -> bool {
        let d = s.sample_domain(&SymmetryCheck::default());
        probabilistic_equal(e, &Expr::zero(), &d, 64, 1e-12, 3).unwrap()
    }

    #[test]
    fn lift_of_translation() {
        let s = ConfigurationSpace::new(1).unwrap();
        let lift = canonical_lift(&s, &ProjectableField::translation(&s, 0));
        assert!(lift.time.is_zero());
        assert!(lift.position[0].is_one());
        assert!(lift.momentum[0].is_zero());
    }

    #[test]
    fn lift_of_friction_connection() {
        let (s, _, gamma) = friction();
        let lift = canonical_lift(&s, &gamma);
        assert!(lift.time.is_one());
        assert!(zero_on(
            &s,
            &(&lift.position[0] - s.parse("-k/2*q1").unwrap())
        ));
        assert!(zero_on(
            &s,
            &(&lift.momentum[0] - s.parse("k/2*p1").unwrap())
        ));
    }

    #[test]
    fn noether_functions_of_example() {
        let (s, h, gamma) = friction();
        let momentum = noether_function(&ProjectableField::translation(&s, 0), &h);
        assert_eq!(momentum, -Expr::var("p1"));
        let energy = noether_function(&gamma, &h);
        assert!(zero_on(
            &s,
            &(energy - s.parse("(exp(-k*t)*p1^2 + k*q1*p1)/2").unwrap())
        ));
    }

    #[test]
    fn friction_symmetries() {
        let (s, h, gamma) = friction();
        let check = SymmetryCheck::default();
        assert!(is_symmetry(&gamma, &h, &check).unwrap());
        assert!(is_symmetry(&ProjectableField::translation(&s, 0), &h, &check).unwrap());
    }

    #[test]
    fn constant_force_breaks_translation() {
        let s = ConfigurationSpace::new(1).unwrap();
        let h = Hamiltonian::parse(s.clone(), "p1^2/2 + q1").unwrap();
        let u = ProjectableField::translation(&s, 0);
        assert_eq!(
            lie_derivative_coefficient(&u, &h).as_rational(),
            Some((-1).into())
        );
        assert!(!is_symmetry(&u, &h, &SymmetryCheck::default()).unwrap());
    }

    #[test]
    fn lie_coefficient_is_minus_noether_rate() {
        let (s, h, gamma) = friction();
        let other = ProjectableField::parse(&s, 1, &["t*q1^2 + 1"]).unwrap();
        for u in [gamma, other] {
            assert!(zero_on(
                &s,
                &(lie_derivative_coefficient(&u, &h) + noether_rate(&u, &h))
            ));
        }
    }
}
