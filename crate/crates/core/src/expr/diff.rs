use std::collections::HashMap;

use super::{Expr, Node};
use crate::scalar::Func;

impl Expr {
    /// Exact symbolic partial derivative with respect to `name`.
    ///
    /// Variables and parameters are both treated as independent symbols; the
    /// derivative with respect to an absent symbol is zero.
    pub fn differentiate(&self, name: &str) -> Expr {
        if !self.depends_on(name) {
            return Expr::zero();
        }
        match self.node() {
            Node::Rational(_) | Node::Float(_) => Expr::zero(),
            Node::Var(n) | Node::Param(n) => {
                if &**n == name {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Neg(a) => -a.differentiate(name),
            Node::Add(a, b) => a.differentiate(name) + b.differentiate(name),
            Node::Sub(a, b) => a.differentiate(name) - b.differentiate(name),
            Node::Mul(a, b) => a.differentiate(name) * b + a * b.differentiate(name),
            Node::Div(a, b) => (a.differentiate(name) * b - a * b.differentiate(name)) / b.pow(2),
            Node::Pow(a, n) => Expr::int(*n as i64) * a.pow(n - 1) * a.differentiate(name),
            Node::Call(f, a) => {
                let inner = a.differentiate(name);
                match f {
                    Func::Exp => self * inner,
                    Func::Ln => inner / a,
                    Func::Sin => a.cos() * inner,
                    Func::Cos => -(a.sin() * inner),
                }
            }
        }
    }

    /// Simultaneous substitution of symbols by expressions. Replacement
    /// trees are not themselves rewritten.
    pub fn substitute(&self, map: &HashMap<String, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        match self.node() {
            Node::Rational(_) | Node::Float(_) => self.clone(),
            Node::Var(n) | Node::Param(n) => map.get(&**n).cloned().unwrap_or_else(|| self.clone()),
            Node::Neg(a) => -a.substitute(map),
            Node::Add(a, b) => a.substitute(map) + b.substitute(map),
            Node::Sub(a, b) => a.substitute(map) - b.substitute(map),
            Node::Mul(a, b) => a.substitute(map) * b.substitute(map),
            Node::Div(a, b) => a.substitute(map) / b.substitute(map),
            Node::Pow(a, n) => a.substitute(map).pow(*n),
            Node::Call(f, a) => Expr::call(*f, a.substitute(map)),
        }
    }

    /// Convenience for a single replacement.
    pub fn substitute_one(&self, name: &str, by: &Expr) -> Expr {
        let mut map = HashMap::new();
        map.insert(name.to_string(), by.clone());
        self.substitute(&map)
    }
}
