use std::fmt;

use num_traits::Signed;

use super::{Expr, Node};

// Fully parenthesized; the output parses back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Rational(r) => {
                let neg = r.is_negative();
                match (neg, r.is_integer()) {
                    (false, true) => write!(f, "{}", r.numer()),
                    (true, true) => write!(f, "({})", r.numer()),
                    (_, false) => write!(f, "({}/{})", r.numer(), r.denom()),
                }
            }
            Node::Float(x) => {
                if x.is_sign_negative() {
                    write!(f, "(-{:?})", -x)
                } else {
                    write!(f, "{x:?}")
                }
            }
            Node::Var(n) | Node::Param(n) => write!(f, "{n}"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, n) => write!(f, "({a}^{n})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_with_explicit_parentheses() {
        let e = (Expr::var("q1") + Expr::param("k")) * Expr::var("p1").pow(2);
        assert_eq!(e.to_string(), "((q1 + k) * (p1^2))");
        assert_eq!(Expr::rational(-3, 2).to_string(), "(-3/2)");
        assert_eq!(Expr::int(-4).to_string(), "(-4)");
        assert_eq!(Expr::float(-0.25).to_string(), "(-0.25)");
        assert_eq!((-Expr::var("t")).exp().to_string(), "exp((-t))");
    }
}
