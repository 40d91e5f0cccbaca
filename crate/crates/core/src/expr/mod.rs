//! Immutable symbolic expressions over time, coordinates, momenta and named
//! parameters.
//!
//! Trees are shared through `Arc`, so cloning is cheap and expressions can
//! be sent across threads. The smart constructors only perform light
//! simplification (constant folding, `x ± 0`, `x * 1`, `x * 0`); deciding
//! whether two expressions agree is left to [`probabilistic_equal`].

mod diff;
mod eval;
mod parse;
mod render;
mod sample;

use std::collections::BTreeSet;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};

pub use crate::scalar::Func;
pub use eval::{Binding, EvalError};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use sample::{
    compare, probabilistic_equal, Comparison, Domain, SampleError, DEFAULT_SEED, MAX_ABS_COORD,
};

/// One node of an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Rational(Rational64),
    Float(f64),
    Var(Arc<str>),
    Param(Arc<str>),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, u32),
    Call(Func, Expr),
}

#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_node(Node::Rational(Rational64::from_integer(n)))
    }

    /// Exact rational `numer / denom`. Panics on a zero denominator.
    pub fn rational(numer: i64, denom: i64) -> Expr {
        Expr::from_node(Node::Rational(Rational64::new(numer, denom)))
    }

    pub fn from_rational(r: Rational64) -> Expr {
        Expr::from_node(Node::Rational(r))
    }

    pub fn float(x: f64) -> Expr {
        Expr::from_node(Node::Float(x))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(name: &str) -> Expr {
        Expr::from_node(Node::Var(Arc::from(name)))
    }

    pub fn param(name: &str) -> Expr {
        Expr::from_node(Node::Param(Arc::from(name)))
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        match self.node() {
            Node::Rational(r) => Some(*r),
            _ => None,
        }
    }

    fn as_number(&self) -> Option<f64> {
        match self.node() {
            Node::Rational(r) => Some(*r.numer() as f64 / *r.denom() as f64),
            Node::Float(x) => Some(*x),
            _ => None,
        }
    }

    /// Structurally the constant zero.
    pub fn is_zero(&self) -> bool {
        match self.node() {
            Node::Rational(r) => r.is_zero(),
            Node::Float(x) => *x == 0.0,
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self.node() {
            Node::Rational(r) => r.is_one(),
            Node::Float(x) => *x == 1.0,
            _ => false,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.symbols().is_empty()
    }

    /// Names of every variable and parameter occurring in the tree.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, true);
        out
    }

    /// Names of the variables only (parameters excluded).
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, false);
        out
    }

    fn collect(&self, out: &mut BTreeSet<String>, params: bool) {
        match self.node() {
            Node::Rational(_) | Node::Float(_) => {}
            Node::Var(n) => {
                out.insert(n.to_string());
            }
            Node::Param(n) => {
                if params {
                    out.insert(n.to_string());
                }
            }
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.collect(out, params),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.collect(out, params);
                b.collect(out, params);
            }
        }
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self.node() {
            Node::Rational(_) | Node::Float(_) => false,
            Node::Var(n) | Node::Param(n) => &**n == name,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.depends_on(name),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.depends_on(name) || b.depends_on(name)
            }
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        match n {
            0 => return Expr::one(),
            1 => return self.clone(),
            _ => {}
        }
        if let Some(r) = self.as_rational() {
            if let Some(v) = checked_pow(r, n) {
                return Expr::from_rational(v);
            }
        }
        if let Node::Float(x) = self.node() {
            return Expr::float(x.powi(n as i32));
        }
        Expr::from_node(Node::Pow(self.clone(), n))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        if arg.is_zero() {
            match f {
                Func::Exp | Func::Cos => return Expr::one(),
                Func::Sin => return Expr::zero(),
                Func::Ln => {}
            }
        }
        if f == Func::Ln && arg.is_one() {
            return Expr::zero();
        }
        Expr::from_node(Node::Call(f, arg))
    }

    pub fn exp(&self) -> Expr {
        Expr::call(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Expr {
        Expr::call(Func::Ln, self.clone())
    }

    pub fn sin(&self) -> Expr {
        Expr::call(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::call(Func::Cos, self.clone())
    }

    /// Sum of an iterator of expressions; the empty sum is zero.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms.into_iter().fold(Expr::zero(), |acc, e| acc + e)
    }
}

fn checked_pow(r: Rational64, n: u32) -> Option<Rational64> {
    let mut acc = Rational64::one();
    for _ in 0..n {
        let numer = acc.numer().checked_mul(*r.numer())?;
        let denom = acc.denom().checked_mul(*r.denom())?;
        acc = Rational64::new(numer, denom);
    }
    Some(acc)
}

fn fold_rational(
    a: Rational64,
    b: Rational64,
    op: fn(&Rational64, &Rational64) -> Option<Rational64>,
) -> Option<Expr> {
    op(&a, &b).map(Expr::from_rational)
}

fn rat_add(a: &Rational64, b: &Rational64) -> Option<Rational64> {
    num_traits::CheckedAdd::checked_add(a, b)
}

fn rat_sub(a: &Rational64, b: &Rational64) -> Option<Rational64> {
    num_traits::CheckedSub::checked_sub(a, b)
}

fn rat_mul(a: &Rational64, b: &Rational64) -> Option<Rational64> {
    num_traits::CheckedMul::checked_mul(a, b)
}

fn rat_div(a: &Rational64, b: &Rational64) -> Option<Rational64> {
    if b.is_zero() {
        None
    } else {
        num_traits::CheckedDiv::checked_div(a, b)
    }
}

/// Folds two numeric leaves. Exact when both are rational.
fn fold_numbers(
    a: &Expr,
    b: &Expr,
    rat: fn(&Rational64, &Rational64) -> Option<Rational64>,
    float: fn(f64, f64) -> f64,
) -> Option<Expr> {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return fold_rational(x, y, rat);
    }
    match (a.as_number(), b.as_number()) {
        (Some(x), Some(y)) => Some(Expr::float(float(x, y))),
        _ => None,
    }
}

fn make_add(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if let Some(e) = fold_numbers(&a, &b, rat_add, |x, y| x + y) {
        return e;
    }
    Expr::from_node(Node::Add(a, b))
}

fn make_sub(a: Expr, b: Expr) -> Expr {
    if b.is_zero() {
        return a;
    }
    if a.is_zero() {
        return make_neg(b);
    }
    if let Some(e) = fold_numbers(&a, &b, rat_sub, |x, y| x - y) {
        return e;
    }
    Expr::from_node(Node::Sub(a, b))
}

fn make_mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if a.is_one() {
        return b;
    }
    if b.is_one() {
        return a;
    }
    if let Some(e) = fold_numbers(&a, &b, rat_mul, |x, y| x * y) {
        return e;
    }
    Expr::from_node(Node::Mul(a, b))
}

fn make_div(a: Expr, b: Expr) -> Expr {
    if b.is_one() {
        return a;
    }
    if a.is_zero() && !b.is_zero() {
        return Expr::zero();
    }
    if !b.is_zero() {
        if let Some(e) = fold_numbers(&a, &b, rat_div, |x, y| x / y) {
            return e;
        }
    }
    Expr::from_node(Node::Div(a, b))
}

fn make_neg(a: Expr) -> Expr {
    match a.node() {
        Node::Rational(r) => Expr::from_rational(-r),
        Node::Float(x) => Expr::float(-x),
        Node::Neg(inner) => inner.clone(),
        _ => Expr::from_node(Node::Neg(a)),
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        make_neg(self)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        make_neg(self.clone())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $make:ident) => {
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $make(self, rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $make(self, rhs.clone())
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $make(self.clone(), rhs)
            }
        }
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $make(self.clone(), rhs.clone())
            }
        }
    };
}

binop!(Add, add, make_add);
binop!(Sub, sub, make_sub);
binop!(Mul, mul, make_mul);
binop!(Div, div, make_div);

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Rational64> for Expr {
    fn from(r: Rational64) -> Expr {
        Expr::from_rational(r)
    }
}
