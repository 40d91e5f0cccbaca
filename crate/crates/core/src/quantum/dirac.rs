//! Symbolic check of the Dirac condition `[f^, g^] = -i (f, g)^` in the
//! continuum, for affine observables in one dimension.

use super::operator::AffineObservable;
use super::QuantumError;
use crate::classical::{poisson_homogeneous, ConfigurationSpace, SymmetryCheck, TIME};
use crate::expr::{compare, Expr, SampleError};

/// Complex-valued expression `re + i im`.
#[derive(Debug, Clone, PartialEq)]
pub struct CExpr {
    pub re: Expr,
    pub im: Expr,
}

impl CExpr {
    pub fn zero() -> Self {
        CExpr::real(Expr::zero())
    }

    pub fn real(re: Expr) -> Self {
        CExpr {
            re,
            im: Expr::zero(),
        }
    }

    pub fn imag(im: Expr) -> Self {
        CExpr {
            re: Expr::zero(),
            im,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &CExpr) -> CExpr {
        CExpr {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &CExpr) -> CExpr {
        CExpr {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &CExpr) -> CExpr {
        CExpr {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> CExpr {
        CExpr {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn differentiate(&self, name: &str) -> CExpr {
        CExpr {
            re: self.re.differentiate(name),
            im: self.im.differentiate(name),
        }
    }
}

/// Differential operator of order at most two in `(t, x)`:
/// `c_tt d_t^2 + c_tx d_t d_x + c_xx d_x^2 + c_t d_t + c_x d_x + c_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    pub dtt: CExpr,
    pub dtx: CExpr,
    pub dxx: CExpr,
    pub dt: CExpr,
    pub dx: CExpr,
    pub c0: CExpr,
}

/// How the `a p_1` term of an observable becomes an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// `-i a d_x - (i/2) a' + b`, the Hermitian ordering.
    Symmetric,
    /// `-i a d_x + b`, without the divergence term.
    Transport,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp {
            dtt: CExpr::zero(),
            dtx: CExpr::zero(),
            dxx: CExpr::zero(),
            dt: CExpr::zero(),
            dx: CExpr::zero(),
            c0: CExpr::zero(),
        }
    }

    /// `-i a^t d_t - i a d_x + b`, plus `-(i/2) a'` under [`Ordering::Symmetric`].
    pub fn quantize(space: &ConfigurationSpace, f: &AffineObservable, ordering: Ordering) -> Self {
        let x = space.coordinate(0);
        let mut c0 = CExpr::real(f.b.clone());
        if ordering == Ordering::Symmetric {
            c0.im = -(f.a.differentiate(x) / Expr::int(2));
        }
        DiffOp {
            dt: CExpr::imag(Expr::int(-f.at)),
            dx: CExpr::imag(-&f.a),
            c0,
            ..DiffOp::zero()
        }
    }

    fn is_first_order(&self) -> bool {
        self.dtt.is_zero() && self.dtx.is_zero() && self.dxx.is_zero()
    }

    /// `self o other` for first-order operators.
    pub fn compose(&self, other: &DiffOp, x: &str) -> DiffOp {
        assert!(
            self.is_first_order() && other.is_first_order(),
            "composition is implemented for first-order operators"
        );
        // L1 (c_t d_t + c_x d_x + c_0) applied to L2 psi, expanded by Leibniz
        let apply = |c: &CExpr| {
            self.dt
                .mul(&c.differentiate(TIME))
                .add(&self.dx.mul(&c.differentiate(x)))
                .add(&self.c0.mul(c))
        };
        DiffOp {
            dtt: self.dt.mul(&other.dt),
            dtx: self.dt.mul(&other.dx).add(&self.dx.mul(&other.dt)),
            dxx: self.dx.mul(&other.dx),
            dt: apply(&other.dt).add(&self.dt.mul(&other.c0)),
            dx: apply(&other.dx).add(&self.dx.mul(&other.c0)),
            c0: apply(&other.c0),
        }
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        DiffOp {
            dtt: self.dtt.sub(&o.dtt),
            dtx: self.dtx.sub(&o.dtx),
            dxx: self.dxx.sub(&o.dxx),
            dt: self.dt.sub(&o.dt),
            dx: self.dx.sub(&o.dx),
            c0: self.c0.sub(&o.c0),
        }
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        DiffOp {
            dtt: self.dtt.add(&o.dtt),
            dtx: self.dtx.add(&o.dtx),
            dxx: self.dxx.add(&o.dxx),
            dt: self.dt.add(&o.dt),
            dx: self.dx.add(&o.dx),
            c0: self.c0.add(&o.c0),
        }
    }

    pub fn times_i(&self) -> DiffOp {
        DiffOp {
            dtt: self.dtt.times_i(),
            dtx: self.dtx.times_i(),
            dxx: self.dxx.times_i(),
            dt: self.dt.times_i(),
            dx: self.dx.times_i(),
            c0: self.c0.times_i(),
        }
    }

    /// The twelve real coefficient expressions, labelled.
    pub fn coefficients(&self) -> Vec<(&'static str, &Expr)> {
        let pairs: [(&str, &str, &CExpr); 6] = [
            ("dtt.re", "dtt.im", &self.dtt),
            ("dtx.re", "dtx.im", &self.dtx),
            ("dxx.re", "dxx.im", &self.dxx),
            ("dt.re", "dt.im", &self.dt),
            ("dx.re", "dx.im", &self.dx),
            ("c0.re", "c0.im", &self.c0),
        ];
        pairs
            .into_iter()
            .flat_map(|(r, i, c)| [(r, &c.re), (i, &c.im)])
            .collect()
    }
}

/// `[f^, g^] + i (f, g)^` as a differential operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracResidual {
    pub operator: DiffOp,
}

impl DiracResidual {
    /// Largest sampled relative residual over all coefficients, and the
    /// label of the coefficient where it occurred.
    pub fn max_residual(
        &self,
        space: &ConfigurationSpace,
        check: &SymmetryCheck,
    ) -> Result<(f64, &'static str), SampleError> {
        let domain = space.sample_domain(check);
        let mut worst = (0.0, "c0.re");
        for (label, e) in self.operator.coefficients() {
            if e.is_zero() {
                continue;
            }
            let c = compare(
                e,
                &Expr::zero(),
                &domain,
                check.samples,
                check.tol,
                check.seed,
            )?;
            if c.max_residual > worst.0 {
                worst = (c.max_residual, label);
            }
        }
        Ok(worst)
    }

    pub fn is_zero(
        &self,
        space: &ConfigurationSpace,
        check: &SymmetryCheck,
    ) -> Result<bool, SampleError> {
        Ok(self.max_residual(space, check)?.0 <= check.tol)
    }
}

/// Residual of the Dirac condition for `f` and `g` quantized with
/// `ordering`. The bracket side always uses [`Ordering::Symmetric`].
pub fn dirac_residual(
    space: &ConfigurationSpace,
    f: &AffineObservable,
    g: &AffineObservable,
    ordering: Ordering,
) -> Result<DiracResidual, QuantumError> {
    let x = space.coordinate(0);
    let fh = DiffOp::quantize(space, f, ordering);
    let gh = DiffOp::quantize(space, g, ordering);
    let commutator = fh.compose(&gh, x).sub(&gh.compose(&fh, x));
    let bracket = poisson_homogeneous(space, &f.expr(space), &g.expr(space));
    let bracket = AffineObservable::decompose(space, &bracket)?;
    let rhs = DiffOp::quantize(space, &bracket, Ordering::Symmetric);
    Ok(DiracResidual {
        operator: commutator.add(&rhs.times_i()),
    })
}
