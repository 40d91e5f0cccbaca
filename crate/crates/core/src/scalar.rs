//! Scalar types the expression evaluator and the numerical layers run on.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Div, Neg, Sub};

use num_rational::Rational64;
use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

/// Transcendental functions an expression may apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }
}

/// A field an [`Expr`](crate::Expr) can be evaluated in.
///
/// Floating point types support every node. Exact rationals support the
/// polynomial/rational fragment and refuse transcendental functions, which
/// lets purely algebraic identities be checked with zero rounding.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Sub<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: Rational64) -> Self;

    /// `None` if the value has no exact representation (e.g. a float
    /// literal evaluated over the rationals).
    fn from_f64(x: f64) -> Option<Self>;

    fn powi(&self, n: u32) -> Self;

    /// `None` when the function is unavailable in this field.
    fn apply(&self, f: Func) -> Option<Self>;

    /// True for a value `ln` may not be applied to.
    fn is_non_positive(&self) -> bool;

    fn is_finite(&self) -> bool;

    fn to_f64(&self) -> f64;
}

/// Real floating point scalars used by the integrators and grid operators.
pub trait Real: Scalar + Float + FloatConst + FromPrimitive + Display + Sum + Default {
    /// Lossy conversion used for literals and tolerances.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable")
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(r: Rational64) -> Self {
                (*r.numer() as $t) / (*r.denom() as $t)
            }
            fn from_f64(x: f64) -> Option<Self> {
                Some(x as $t)
            }
            fn powi(&self, n: u32) -> Self {
                match i32::try_from(n) {
                    Ok(n) => <$t>::powi(*self, n),
                    Err(_) => <$t>::powf(*self, n as $t),
                }
            }
            fn apply(&self, f: Func) -> Option<Self> {
                Some(match f {
                    Func::Exp => <$t>::exp(*self),
                    Func::Ln => <$t>::ln(*self),
                    Func::Sin => <$t>::sin(*self),
                    Func::Cos => <$t>::cos(*self),
                })
            }
            fn is_non_positive(&self) -> bool {
                *self <= 0.0
            }
            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl Real for $t {}
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational64 {
    fn from_rational(r: Rational64) -> Self {
        r
    }
    fn from_f64(x: f64) -> Option<Self> {
        // Only floats that are integers are exact here.
        if x.fract() == 0.0 && x.abs() < (1u64 << 53) as f64 {
            Some(Rational64::from_integer(x as i64))
        } else {
            None
        }
    }
    fn powi(&self, n: u32) -> Self {
        num_traits::pow(*self, n as usize)
    }
    fn apply(&self, _f: Func) -> Option<Self> {
        None
    }
    fn is_non_positive(&self) -> bool {
        *self <= Rational64::zero()
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
