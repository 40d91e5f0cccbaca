//! Randomized identity testing.
//!
//! Two expressions are declared equal when they agree, to a relative
//! tolerance, at every point of a reproducible pseudo-random sample drawn
//! from a box. The sample sequence is a ChaCha8 stream seeded with a `u64`,
//! so a given `(domain, n_samples, seed)` always visits the same points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Binding, EvalError, Expr};

/// Seed used whenever the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x4e6f_6574_6865_7221;

/// Sample boxes are clipped to `[-MAX_ABS_COORD, MAX_ABS_COORD]`.
pub const MAX_ABS_COORD: f64 = 10.0;

/// Redraw budget per requested sample for points hitting a singularity.
const REJECTION_FACTOR: usize = 64;

/// A box of variable ranges plus fixed values (typically parameters).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Domain {
    ranges: Vec<(String, f64, f64)>,
    fixed: Binding<f64>,
}

impl Domain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds (or replaces) a sampled range, clipped to the bounded box.
    pub fn range(mut self, name: &str, lo: f64, hi: f64) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let lo = lo.clamp(-MAX_ABS_COORD, MAX_ABS_COORD);
        let hi = hi.clamp(-MAX_ABS_COORD, MAX_ABS_COORD);
        self.ranges.retain(|(n, _, _)| n != name);
        self.ranges.push((name.to_string(), lo, hi));
        self
    }

    pub fn fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.set(name, value);
        self
    }

    pub fn with_fixed(mut self, values: &Binding<f64>) -> Self {
        self.fixed.extend(values);
        self
    }

    pub fn ranges(&self) -> &[(String, f64, f64)] {
        &self.ranges
    }

    fn covers(&self, name: &str) -> bool {
        self.fixed.get(name).is_some() || self.ranges.iter().any(|(n, _, _)| n == name)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Binding<f64> {
        let mut b = self.fixed.clone();
        for (name, lo, hi) in &self.ranges {
            let v = if lo == hi {
                *lo
            } else {
                rng.random_range(*lo..=*hi)
            };
            b.set(name, v);
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("n_samples must be at least 1")]
    NoSamples,
    #[error("symbol `{0}` is not covered by the sample domain")]
    Uncovered(String),
    #[error("evaluation failed at {point:?}: {source}")]
    Eval {
        point: Vec<(String, f64)>,
        source: EvalError,
    },
    #[error("only {accepted} of {wanted} sample points avoided singularities")]
    TooManyRejections { accepted: usize, wanted: usize },
}

/// Outcome of a sampled comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub equal: bool,
    /// Largest `|e1 - e2| / (1 + |e1|)` seen.
    pub max_residual: f64,
    pub worst_point: Vec<(String, f64)>,
    pub samples: usize,
}

fn point_of(b: &Binding<f64>) -> Vec<(String, f64)> {
    b.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Samples `|e1 - e2| / (1 + |e1|)` over the domain.
///
/// Points where either side hits a division by zero, `ln` of a non-positive
/// value or a non-finite result are redrawn; any other evaluation failure
/// is returned.
pub fn compare(
    e1: &Expr,
    e2: &Expr,
    domain: &Domain,
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<Comparison, SampleError> {
    if n_samples == 0 {
        return Err(SampleError::NoSamples);
    }
    for name in e1.symbols().iter().chain(e2.symbols().iter()) {
        if !domain.covers(name) {
            return Err(SampleError::Uncovered(name.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0;
    let mut out = Comparison {
        equal: true,
        max_residual: 0.0,
        worst_point: Vec::new(),
        samples: 0,
    };
    for _ in 0..n_samples * REJECTION_FACTOR {
        if accepted == n_samples {
            break;
        }
        let b = domain.draw(&mut rng);
        let pair = e1.evaluate(&b).and_then(|a| Ok((a, e2.evaluate(&b)?)));
        let (a, c) = match pair {
            Ok(v) => v,
            Err(e) if e.is_singular() => continue,
            Err(source) => {
                return Err(SampleError::Eval {
                    point: point_of(&b),
                    source,
                })
            }
        };
        if !a.is_finite() || !c.is_finite() {
            continue;
        }
        accepted += 1;
        let residual = (a - c).abs() / (1.0 + a.abs());
        if residual > out.max_residual || out.worst_point.is_empty() {
            out.max_residual = out.max_residual.max(residual);
            out.worst_point = point_of(&b);
        }
        if residual > tol {
            out.equal = false;
        }
    }
    if accepted < n_samples {
        return Err(SampleError::TooManyRejections {
            accepted,
            wanted: n_samples,
        });
    }
    out.samples = accepted;
    Ok(out)
}

/// True iff `|e1 - e2| <= tol * (1 + |e1|)` at every sampled point.
pub fn probabilistic_equal(
    e1: &Expr,
    e2: &Expr,
    domain: &Domain,
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<bool, SampleError> {
    compare(e1, e2, domain, n_samples, tol, seed).map(|c| c.equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    const VARS: &[&str] = &["t", "q1", "p1"];

    fn p(s: &str) -> Expr {
        parse(s, VARS, &[]).unwrap()
    }

    fn domain() -> Domain {
        Domain::new().range("q1", -2.0, 2.0).range("p1", -2.0, 2.0)
    }

    #[test]
    fn binomial_square() {
        assert!(probabilistic_equal(
            &p("(q1+p1)^2"),
            &p("q1^2 + 2*q1*p1 + p1^2"),
            &domain(),
            64,
            1e-9,
            DEFAULT_SEED
        )
        .unwrap());
    }

    #[test]
    fn different_variables_differ() {
        assert!(
            !probabilistic_equal(&p("q1"), &p("p1"), &domain(), 64, 1e-9, DEFAULT_SEED).unwrap()
        );
    }

    #[test]
    fn reflexive_and_symmetric() {
        let a = p("q1^3 - p1/(1 + q1^2)");
        let b = p("q1^3 - p1/(1 + q1^2) + 1e-6*q1");
        let d = domain();
        assert!(probabilistic_equal(&a, &a, &d, 64, 0.0, 7).unwrap());
        let ab = compare(&a, &b, &d, 64, 1e-9, 7).unwrap();
        let ba = compare(&b, &a, &d, 64, 1e-9, 7).unwrap();
        assert_eq!(ab.equal, ba.equal);
        assert!(!ab.equal);
    }

    #[test]
    fn same_seed_same_points() {
        let a = p("q1*p1");
        let b = p("q1*p1 + 1e-3*q1^5");
        let r1 = compare(&a, &b, &domain(), 16, 1e-9, 11).unwrap();
        let r2 = compare(&a, &b, &domain(), 16, 1e-9, 11).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn uncovered_symbol_is_reported() {
        let err = probabilistic_equal(&p("t"), &p("t"), &domain(), 4, 1e-9, 1).unwrap_err();
        assert_eq!(err, SampleError::Uncovered("t".into()));
    }

    #[test]
    fn singular_points_are_rejected_not_fatal() {
        // q1 in [0, 0] would always be singular.
        let d = Domain::new().range("q1", 0.0, 0.0);
        let err = probabilistic_equal(&p("1/q1"), &p("1/q1"), &d, 4, 1e-9, 1).unwrap_err();
        assert!(matches!(
            err,
            SampleError::TooManyRejections { accepted: 0, .. }
        ));
        let d = Domain::new().range("q1", -1.0, 1.0);
        assert!(probabilistic_equal(&p("q1/q1"), &p("1"), &d, 64, 1e-12, 1).unwrap());
    }

    #[test]
    fn box_is_clipped() {
        let d = Domain::new().range("q1", -100.0, 50.0);
        assert_eq!(d.ranges()[0], ("q1".to_string(), -10.0, 10.0));
    }

    #[test]
    fn zero_samples_rejected() {
        assert_eq!(
            probabilistic_equal(&p("q1"), &p("q1"), &domain(), 0, 1e-9, 1),
            Err(SampleError::NoSamples)
        );
    }
}
