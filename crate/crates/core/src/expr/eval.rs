use std::collections::BTreeMap;

use thiserror::Error;

use super::{Expr, Node};
use crate::scalar::{Func, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("ln of a non-positive value")]
    LnDomain,
    #[error("`{0}` is not available in this scalar field")]
    Unsupported(&'static str),
    #[error("float literal {0} has no exact representation")]
    InexactLiteral(f64),
}

impl EvalError {
    /// Errors caused by a singular point of `/` or `ln` rather than by a
    /// malformed binding.
    pub fn is_singular(&self) -> bool {
        matches!(self, EvalError::DivisionByZero | EvalError::LnDomain)
    }
}

/// Values for variables and parameters, keyed by name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Binding<T> {
    values: BTreeMap<String, T>,
}

impl<T: Clone> Binding<T> {
    pub fn new() -> Self {
        Binding {
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: T) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: T) {
        match self.values.get_mut(name) {
            Some(slot) => *slot = value,
            None => {
                self.values.insert(name.to_string(), value);
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.values.get(name)
    }

    pub fn extend(&mut self, other: &Binding<T>) {
        for (k, v) in &other.values {
            self.set(k, v.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T: Clone> FromIterator<(String, T)> for Binding<T> {
    fn from_iter<I: IntoIterator<Item = (String, T)>>(iter: I) -> Self {
        Binding {
            values: iter.into_iter().collect(),
        }
    }
}

impl<'a, T: Clone> FromIterator<(&'a str, T)> for Binding<T> {
    fn from_iter<I: IntoIterator<Item = (&'a str, T)>>(iter: I) -> Self {
        Binding {
            values: iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

impl Expr {
    /// Evaluates the tree in the scalar field `T`.
    ///
    /// Rational constants are lowered to `T` only here. Unbound symbols,
    /// exact division by zero and `ln` of a non-positive value are errors.
    pub fn evaluate<T: Scalar>(&self, binding: &Binding<T>) -> Result<T, EvalError> {
        match self.node() {
            Node::Rational(r) => Ok(T::from_rational(*r)),
            Node::Float(x) => T::from_f64(*x).ok_or(EvalError::InexactLiteral(*x)),
            Node::Var(n) | Node::Param(n) => binding
                .get(n)
                .cloned()
                .ok_or_else(|| EvalError::Unbound(n.to_string())),
            Node::Neg(a) => Ok(-a.evaluate(binding)?),
            Node::Add(a, b) => Ok(a.evaluate(binding)? + b.evaluate(binding)?),
            Node::Sub(a, b) => Ok(a.evaluate(binding)? - b.evaluate(binding)?),
            Node::Mul(a, b) => Ok(a.evaluate(binding)? * b.evaluate(binding)?),
            Node::Div(a, b) => {
                let num = a.evaluate(binding)?;
                let den = b.evaluate(binding)?;
                if den.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(num / den)
            }
            Node::Pow(a, n) => Ok(a.evaluate(binding)?.powi(*n)),
            Node::Call(f, a) => {
                let x = a.evaluate(binding)?;
                if *f == Func::Ln && x.is_non_positive() {
                    return Err(EvalError::LnDomain);
                }
                x.apply(*f).ok_or(EvalError::Unsupported(f.name()))
            }
        }
    }
}
