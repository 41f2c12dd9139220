//! Logarithm and exponential on balls.
//!
//! Both are evaluated at the exact midpoint with a series whose truncation
//! tail is added to the radius, and the input radius is then propagated
//! through a derivative bound.

use std::sync::RwLock;

use num_bigint::BigInt;

use super::ball::{PrecReal, RAD_BITS};
use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

static LN2_CACHE: RwLock<Option<PrecReal>> = RwLock::new(None);

/// `log 2` to at least `prec` bits.
pub fn ln2(prec: u32) -> PrecReal {
    if let Some(c) = LN2_CACHE.read().unwrap().as_ref() {
        if c.precision() >= prec {
            return c.round_to(prec);
        }
    }
    let wp = prec + 32;
    // log 2 = 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749)
    let a = atanh_inv(26, wp).mul_int(&BigInt::from(18));
    let b = atanh_inv(4801, wp).mul_int(&BigInt::from(2));
    let c = atanh_inv(8749, wp).mul_int(&BigInt::from(8));
    let v = (a - b + c).round_to(prec);
    let mut w = LN2_CACHE.write().unwrap();
    if w.as_ref().is_none_or(|c| c.precision() < prec) {
        *w = Some(v.clone());
    }
    v
}

fn atanh_inv(n: u64, wp: u32) -> PrecReal {
    let z = PrecReal::from_ratio(BigInt::from(1), BigInt::from(n), wp)
        .expect("nonzero denominator");
    atanh_series(&z, wp)
}

/// `atanh(z)` for `|z| < 1/2`, with the truncation tail in the radius.
fn atanh_series(z: &PrecReal, wp: u32) -> PrecReal {
    if z.is_exact() && z.mid().is_zero() {
        return PrecReal::zero().with_prec(wp);
    }
    let zu = z.lower().abs().max(z.upper().abs());
    // |z| < 2^-b
    let b = (-zu.mag_exp()).max(1) as u64;
    let n_terms = wp as u64 / (2 * b) + 2;
    let z2 = z.sqr();
    let mut term = z.clone();
    let mut sum = z.clone();
    for j in 1..n_terms {
        term = term.mul_ball(&z2);
        let t = term
            .div_int(&BigInt::from(2 * j + 1))
            .expect("odd integer divisor");
        sum = sum.add_ball(&t);
    }
    // sum_{j >= N} |z|^{2j+1}/(2j+1) <= |z|^{2N+1} / (1 - z^2) < 2 |z|^{2N+1}
    let tail = Dyadic::pow2(1 - (b * (2 * n_terms + 1)) as i64);
    PrecReal::finish(sum.mid().clone(), sum.radius().add(&tail), wp)
}

fn ln_dyadic(m: &Dyadic, prec: u32) -> PrecReal {
    let wp = prec + 32;
    let t = m.bits() as i64;
    let mut k = m.exponent() + t;
    // y in [1/2, 1)
    let mut y = Dyadic::new(m.mantissa().clone(), -t);
    if y < Dyadic::new(BigInt::from(3), -2) {
        y = y.mul_2exp(1);
        k -= 1;
    }
    let reductions = ((wp as f64).sqrt() / 2.0).clamp(4.0, 48.0) as u32;
    let inner = wp + reductions;
    let mut yb = PrecReal::exact(y).with_prec(inner);
    for _ in 0..reductions {
        yb = yb.sqrt().expect("positive radicand");
    }
    let one = PrecReal::one().with_prec(inner);
    let z = (&yb - &one)
        .div(&(&yb + &one))
        .expect("denominator near 2");
    let ln_y = atanh_series(&z, inner).mul_2exp(reductions as i64 + 1);
    let ln_m = ln_y.add_ball(&ln2(inner).mul_int(&BigInt::from(k)));
    ln_m.round_to(prec)
}

fn exp_dyadic(m: &Dyadic, prec: u32) -> Result<PrecReal> {
    if m.is_zero() {
        return Ok(PrecReal::one().with_prec(prec));
    }
    if m.mag_exp() > 40 {
        return Err(Error::domain("exponential argument too large"));
    }
    let r = (m.mag_exp() + 10).max(0);
    let wp = prec + r as u32 + 32;
    // |x| < 2^-10
    let x = PrecReal::exact(m.mul_2exp(-r)).with_prec(wp);
    let n_terms = wp as u64 / 10 + 2;
    let mut term = PrecReal::one().with_prec(wp);
    let mut sum = term.clone();
    for j in 1..n_terms {
        term = term
            .mul_ball(&x)
            .div_int(&BigInt::from(j))
            .expect("positive divisor");
        sum = sum.add_ball(&term);
    }
    let tail = Dyadic::pow2(1 - 10 * n_terms as i64);
    let mut v = PrecReal::finish(sum.mid().clone(), sum.radius().add(&tail), wp);
    for _ in 0..r {
        v = v.sqr();
    }
    Ok(v.round_to(prec))
}

impl PrecReal {
    /// Natural logarithm. `Unresolved` if the ball reaches down to zero.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return if self.upper().is_positive() {
                Err(Error::Unresolved("a positive logarithm argument"))
            } else {
                Err(Error::domain("logarithm of a nonpositive number"))
            };
        }
        if self.is_exact() && *self.mid() == Dyadic::one() {
            return Ok(PrecReal::zero().with_prec(self.precision()));
        }
        let base = ln_dyadic(self.mid(), self.precision());
        if self.is_exact() {
            return Ok(base);
        }
        // |ln x - ln m| <= rad / (m - rad)
        let low = self.lower().round(RAD_BITS, Round::Floor);
        let extra = Dyadic::div_round(self.radius(), &low, RAD_BITS, Round::Ceil);
        Ok(PrecReal::finish(
            base.mid().clone(),
            base.radius().add(&extra),
            self.precision(),
        ))
    }

    pub fn exp(&self) -> Result<Self> {
        let prec = self.precision();
        if self.is_exact() {
            return exp_dyadic(self.mid(), prec);
        }
        if self.radius() <= &Dyadic::one() {
            // |e^x - e^m| <= e^m (e^r - 1) <= 3 r e^m for r <= 1
            let base = exp_dyadic(self.mid(), prec)?;
            let up = base.upper().round(RAD_BITS, Round::Ceil);
            let extra = up.mul(self.radius()).mul_int(&BigInt::from(3));
            Ok(PrecReal::finish(
                base.mid().clone(),
                base.radius().add(&extra),
                prec,
            ))
        } else {
            let lo = exp_dyadic(&self.lower(), prec)?;
            let hi = exp_dyadic(&self.upper(), prec)?;
            Ok(lo.hull(&hi))
        }
    }

    /// `self^e` for a positive base and real exponent, via `exp(e log x)`.
    pub fn powf(&self, e: &PrecReal) -> Result<Self> {
        self.ln()?.mul_ball(e).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_matches_f64() {
        let v = ln2(64);
        assert!((v.mid_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(v.radius_log2() < -60.0);
    }

    #[test]
    fn ln_of_e_is_one() {
        let e = PrecReal::one().with_prec(128).exp().unwrap();
        let one = e.ln().unwrap();
        assert!(one.contains(&Dyadic::one()));
        assert!(one.radius_log2() < -120.0);
    }

    #[test]
    fn exp_of_large_negative() {
        let x = PrecReal::from_i64(-50).with_prec(100).exp().unwrap();
        assert!((x.mid_f64() / (-50f64).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ln_of_nonpositive() {
        assert!(!PrecReal::zero().ln().unwrap_err().is_recoverable());
        assert!(PrecReal::from_i64(-2).ln().is_err());
    }

    #[test]
    fn ln_of_wide_ball_contains_endpoints_logs() {
        let x = PrecReal::with_radius(Dyadic::from_i64(10), Dyadic::one(), 80).unwrap();
        let l = x.ln().unwrap();
        assert!(l.contains(&Dyadic::from_f64(9f64.ln()).unwrap()));
        assert!(l.contains(&Dyadic::from_f64(11f64.ln()).unwrap()));
    }
}
