use std::fmt;

use num_bigint::BigInt;

use super::ball::PrecReal;
use super::policy::{Certified, PrecisionPolicy};
use crate::error::{Error, Result};

/// Arithmetic expressions over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Rational(BigInt, BigInt),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Sqrt(Box<Expr>),
    Log(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn int(v: i64) -> Self {
        Expr::Rational(BigInt::from(v), BigInt::from(1))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Expr::Rational(BigInt::from(num), BigInt::from(den))
    }

    pub fn add(self, o: Expr) -> Self {
        Expr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Expr) -> Self {
        Expr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Expr) -> Self {
        Expr::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: Expr) -> Self {
        Expr::Div(Box::new(self), Box::new(o))
    }

    pub fn pow(self, e: i64) -> Self {
        Expr::Pow(Box::new(self), e)
    }

    pub fn sqrt(self) -> Self {
        Expr::Sqrt(Box::new(self))
    }

    pub fn log(self) -> Self {
        Expr::Log(Box::new(self))
    }

    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }

    /// One evaluation at `prec` bits. Fails with `Unresolved` when a
    /// divisor or logarithm argument cannot be separated from zero.
    pub fn eval(&self, prec: u32) -> Result<PrecReal> {
        Ok(match self {
            Expr::Rational(n, d) => PrecReal::from_ratio(n.clone(), d.clone(), prec)?,
            Expr::Add(a, b) => a.eval(prec)?.add_ball(&b.eval(prec)?),
            Expr::Sub(a, b) => a.eval(prec)?.sub_ball(&b.eval(prec)?),
            Expr::Mul(a, b) => a.eval(prec)?.mul_ball(&b.eval(prec)?),
            Expr::Div(a, b) => {
                let den = b.eval(prec)?;
                if den.is_exact() && den.mid().is_zero() {
                    return Err(Error::domain("division by zero"));
                }
                a.eval(prec)?.div(&den)?
            }
            Expr::Neg(a) => a.eval(prec)?.neg(),
            Expr::Pow(a, e) => {
                let base = a.eval(prec)?;
                if *e < 0 && base.is_exact() && base.mid().is_zero() {
                    return Err(Error::domain("negative power of zero"));
                }
                base.powi(*e)?
            }
            Expr::Sqrt(a) => a.eval(prec)?.sqrt()?,
            Expr::Log(a) => a.eval(prec)?.ln()?,
            Expr::Exp(a) => a.eval(prec)?.exp()?,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(n, d) if d == &BigInt::from(1) => write!(f, "{n}"),
            Expr::Rational(n, d) => write!(f, "({n}/{d})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Pow(a, e) => write!(f, "{a}^{e}"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

/// Evaluates `expr` at exactly `prec` bits.
pub fn pr_eval(expr: &Expr, prec: u32) -> Result<PrecReal> {
    expr.eval(prec)
}

/// Evaluates `expr`, escalating precision while a divisor or logarithm
/// argument cannot be separated from zero.
pub fn pr_eval_certified(expr: &Expr, policy: &PrecisionPolicy) -> Result<Certified<PrecReal>> {
    policy.escalate(&format!("evaluating {expr}"), |bits| expr.eval(bits).map(Some))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precreal::Dyadic;

    #[test]
    fn one_over_one() {
        let v = pr_eval(&Expr::int(1).div(Expr::int(1)), 77).unwrap();
        assert!(v.is_exact());
        assert_eq!(v.mid(), &Dyadic::one());
    }

    #[test]
    fn cancelling_denominator_escalates() {
        // 1 / (1/3 * 3 - 1 + 2^-300): needs more than 192 bits to see the divisor is nonzero
        let tiny = Expr::int(2).pow(-300);
        let den = Expr::ratio(1, 3).mul(Expr::int(3)).sub(Expr::int(1)).add(tiny);
        let e = Expr::int(1).div(den);
        assert!(pr_eval(&e, 192).unwrap_err().is_recoverable());
        let c = pr_eval_certified(&e, &PrecisionPolicy::default()).unwrap();
        assert!(c.bits > 192);
        assert!(c.value.contains(&Dyadic::pow2(300)));
    }

    #[test]
    fn exact_zero_divisor_is_domain_error() {
        let e = Expr::int(1).div(Expr::int(2).sub(Expr::int(2)));
        assert!(matches!(pr_eval(&e, 64), Err(Error::Domain(_))));
    }
}
