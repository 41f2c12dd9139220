use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::DEFAULT_PRECISION;
use crate::error::{Error, Result};

/// Significant bits kept in a radius. Radii are always rounded up.
pub(crate) const RAD_BITS: u64 = 32;

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// `prec` is the number of significant bits midpoints are rounded to when
/// an operation cannot be carried out exactly; rounding errors are folded
/// into the radius, so the enclosure stays valid.
#[derive(Clone, PartialEq, Eq)]
pub struct PrecReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

fn rad_up(d: Dyadic) -> Dyadic {
    d.round(RAD_BITS, Round::Ceil)
}

fn mag_up(d: &Dyadic) -> Dyadic {
    d.abs().round(RAD_BITS, Round::Ceil)
}

fn mag_down(d: &Dyadic) -> Dyadic {
    d.abs().round(RAD_BITS, Round::Floor)
}

impl PrecReal {
    /// Builds a ball, rounding the midpoint to `prec` bits and absorbing the
    /// rounding error into the radius.
    pub(crate) fn finish(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let rounded = mid.round(prec as u64, Round::Nearest);
        let rad = if rounded == mid {
            rad
        } else {
            rad.add(&mid.sub(&rounded).abs())
        };
        Self {
            mid: rounded,
            rad: if rad.is_zero() { rad } else { rad_up(rad) },
            prec,
        }
    }

    pub fn exact(d: Dyadic) -> Self {
        Self {
            mid: d,
            rad: Dyadic::zero(),
            prec: DEFAULT_PRECISION,
        }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::exact(Dyadic::one())
    }

    pub fn from_int(v: BigInt) -> Self {
        Self::exact(Dyadic::from_int(v))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::exact(Dyadic::from_i64(v))
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Result<Self> {
        Dyadic::from_f64(x)
            .map(Self::exact)
            .ok_or_else(|| Error::domain(format!("non-finite float {x}")))
    }

    /// `num / den` at `prec` bits; exact when the quotient is dyadic.
    pub fn from_ratio(num: BigInt, den: BigInt, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Self::from_int(num)
            .with_prec(prec)
            .div(&Self::from_int(den).with_prec(prec))
    }

    /// A ball with an explicit midpoint and radius.
    pub fn with_radius(mid: Dyadic, rad: Dyadic, prec: u32) -> Result<Self> {
        if rad.is_negative() {
            return Err(Error::domain("negative radius"));
        }
        Ok(Self::finish(mid, rad, prec))
    }

    /// Smallest ball containing `[lo, hi]`.
    pub fn from_bounds(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let half = hi.sub(lo).mul_2exp(-1);
        if half.is_zero() {
            return Self::finish(lo.clone(), half, prec);
        }
        // anchor at lo so the lower end stays exact
        let rad = rad_up(half);
        let mid = lo.add(&rad);
        if mid.bits() > prec as u64 + 2 * RAD_BITS {
            return Self::finish(lo.add(hi).mul_2exp(-1), hi.sub(lo).mul_2exp(-1), prec);
        }
        Self { mid, rad, prec }
    }

    /// Parses decimal literals such as `7.75e271`, `-0.16` or `42`.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let bad = || Error::domain(format!("not a decimal number: {s:?}"));
        let s = s.trim();
        let (body, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let e = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10);
        if e >= 0 {
            Ok(Self::from_int(num * num_traits::pow(ten, e as usize)).with_prec(prec))
        } else {
            Self::from_ratio(num, num_traits::pow(ten, (-e) as usize), prec)
        }
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    /// Re-rounds the midpoint to `prec` bits.
    pub fn round_to(&self, prec: u32) -> Self {
        Self::finish(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// An `f64` no smaller than every point of the ball (up to one ulp of
    /// conversion, widened outward).
    pub fn upper_f64(&self) -> f64 {
        let u = self.upper().to_f64();
        u + u.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE
    }

    pub fn lower_f64(&self) -> f64 {
        let l = self.lower().to_f64();
        l - l.abs() * 4.0 * f64::EPSILON - f64::MIN_POSITIVE
    }

    /// `log2` of the radius, `-inf` for exact values.
    pub fn radius_log2(&self) -> f64 {
        if self.rad.is_zero() {
            f64::NEG_INFINITY
        } else {
            let r = self.rad.round(52, Round::Ceil);
            let m = num_traits::ToPrimitive::to_f64(r.mantissa()).unwrap_or(f64::MAX);
            r.exponent() as f64 + m.log2()
        }
    }

    fn out_prec(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    /// Certified comparison: `None` when the balls overlap and the order
    /// cannot be decided.
    pub fn cmp_certain(&self, other: &Self) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if self.lower() > other.upper() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `Some(true)` if certainly `self < other`, `Some(false)` if certainly
    /// `self >= other`.
    pub fn lt_certain(&self, other: &Self) -> Option<bool> {
        if self.upper() < other.lower() {
            Some(true)
        } else if self.lower() >= other.upper() {
            Some(false)
        } else {
            None
        }
    }

    /// `Some(true)` if certainly `self <= other`, `Some(false)` if certainly
    /// `self > other`.
    pub fn le_certain(&self, other: &Self) -> Option<bool> {
        if self.upper() <= other.lower() {
            Some(true)
        } else if self.lower() > other.upper() {
            Some(false)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else if self.is_positive() {
            self.clone()
        } else {
            // ball straddles zero: [0, max(|lo|, |hi|)]
            let top = self.lower().abs().max(self.upper().abs());
            Self::from_bounds(&Dyadic::zero(), &top, self.prec)
        }
    }

    pub fn add_ball(&self, other: &Self) -> Self {
        let rad = self.rad.add(&other.rad);
        Self::finish(self.mid.add(&other.mid), rad, self.out_prec(other))
    }

    pub fn sub_ball(&self, other: &Self) -> Self {
        self.add_ball(&other.neg())
    }

    pub fn mul_ball(&self, other: &Self) -> Self {
        let mid = self.mid.mul(&other.mid);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            let a = mag_up(&self.mid).mul(&other.rad);
            let b = mag_up(&other.mid).mul(&self.rad);
            let c = self.rad.mul(&other.rad);
            a.add(&b).add(&c)
        };
        Self::finish(mid, rad, self.out_prec(other))
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let rad = self.rad.mul_int(&k.abs());
        Self::finish(self.mid.mul_int(k), rad, self.prec)
    }

    /// Multiply by `2^e`, exact.
    pub fn mul_2exp(&self, e: i64) -> Self {
        Self {
            mid: self.mid.mul_2exp(e),
            rad: self.rad.mul_2exp(e),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> Self {
        self.mul_ball(self)
    }

    /// Division; `Unresolved` when the divisor's ball contains zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Unresolved("a nonzero divisor"));
        }
        let prec = self.out_prec(other);
        let (a, b) = (&self.mid, &other.mid);
        let mut rad = Dyadic::zero();
        let q = if a.is_zero() {
            Dyadic::zero()
        } else {
            let shift =
                (prec as i64 + 8 + b.bits() as i64 - a.bits() as i64).max(0) as u64;
            let num = a.mantissa() << shift;
            let (q, r) = num_integer::Integer::div_rem(&num, b.mantissa());
            let qexp = a.exponent() - shift as i64 - b.exponent();
            if !r.is_zero() {
                rad = Dyadic::pow2(qexp);
            }
            Dyadic::new(q, qexp)
        };
        if !self.rad.is_zero() || !other.rad.is_zero() {
            // |x/y - a/b| <= (ra + |a/b| rb) / (|b| - rb)
            let qmag = mag_up(&q).add(&rad);
            let num = self.rad.add(&qmag.mul(&other.rad));
            let den = mag_down(&b.abs().sub(&other.rad));
            if !den.is_positive() {
                return Err(Error::Unresolved("a nonzero divisor"));
            }
            let extra = Dyadic::div_round(&rad_up(num), &den, RAD_BITS, Round::Ceil);
            rad = rad.add(&extra);
        }
        Ok(Self::finish(q, rad, prec))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().with_prec(self.prec).div(self)
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        self.div(&Self::from_int(k.clone()).with_prec(self.prec))
    }

    pub fn pow_u(&self, n: u64) -> Self {
        let mut result = Self::one().with_prec(self.prec);
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = result.mul_ball(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.sqr();
        }
        result
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            self.pow_u(n.unsigned_abs()).recip()
        }
    }

    /// Square root; `Unresolved` if the ball reaches below zero.
    pub fn sqrt(&self) -> Result<Self> {
        if self.lower().is_negative() {
            return if self.upper().is_negative() {
                Err(Error::domain("square root of a negative number"))
            } else {
                Err(Error::Unresolved("a nonnegative radicand"))
            };
        }
        let prec = self.prec as u64;
        let m = &self.mid;
        if m.is_zero() {
            let r = isqrt_up(&self.rad);
            return Ok(Self::finish(Dyadic::zero(), r, self.prec));
        }
        // N = man << t with (exp - t) even and about 2 * (prec + 4) bits
        let want = 2 * (prec as i64 + 4);
        let mut t = (want - m.bits() as i64).max(0);
        if (m.exponent() - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let n = m.mantissa() << t as u64;
        let r = n.sqrt();
        let rexp = (m.exponent() - t) / 2;
        let mut rad = if &r * &r == n {
            Dyadic::zero()
        } else {
            Dyadic::pow2(rexp)
        };
        let root = Dyadic::new(r, rexp);
        if !self.rad.is_zero() {
            // |sqrt(x) - sqrt(m)| <= rad / sqrt(m), and always <= sqrt(rad)
            let extra = if root.is_zero() {
                isqrt_up(&self.rad)
            } else {
                Dyadic::div_round(&self.rad, &mag_down(&root), RAD_BITS, Round::Ceil)
            };
            rad = rad.add(&extra);
        }
        Ok(Self::finish(root, rad, self.prec))
    }

    /// Certified floor, or `None` if the ball contains an integer other
    /// than its lower endpoint.
    pub fn floor(&self) -> Option<BigInt> {
        let lo = self.lower().floor();
        let hi = self.upper().floor();
        (lo == hi).then_some(lo)
    }

    /// Distance to the nearest integer, clamped to `[0, 1/2]`.
    pub fn nearest_int_distance(&self) -> Self {
        let n = self.mid.round_int();
        let d = self.mid.sub(&Dyadic::from_int(n)).abs();
        let half = Dyadic::pow2(-1);
        let lo = d.sub(&self.rad).max(Dyadic::zero());
        let hi = d.add(&self.rad).min(half);
        Self::from_bounds(&lo, &hi, self.prec)
    }

    /// Smallest ball containing both.
    pub fn hull(&self, other: &Self) -> Self {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Self::from_bounds(&lo, &hi, self.out_prec(other))
    }

    pub fn max(&self, other: &Self) -> Self {
        match self.cmp_certain(other) {
            Some(Ordering::Less) => other.clone(),
            Some(_) => self.clone(),
            None => {
                let lo = self.lower().max(other.lower());
                let hi = self.upper().max(other.upper());
                Self::from_bounds(&lo, &hi, self.out_prec(other))
            }
        }
    }

    pub fn to_sci_string(&self, digits: usize) -> String {
        self.mid.to_sci_string(digits)
    }
}

/// Upper bound on `sqrt(d)` for `d >= 0`.
fn isqrt_up(d: &Dyadic) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    let mut man = d.mantissa().clone();
    let mut exp = d.exponent();
    if exp.rem_euclid(2) != 0 {
        man <<= 1u32;
        exp -= 1;
    }
    // pad for a few more significant bits
    man <<= 2 * RAD_BITS;
    exp -= 2 * RAD_BITS as i64;
    let r = man.sqrt() + BigInt::one();
    Dyadic::new(r, exp / 2)
}

impl fmt::Debug for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} +/- {} [{} bits]",
            self.mid.to_sci_string(20),
            self.rad.to_sci_string(3),
            self.prec
        )
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        if self.rad.is_zero() {
            write!(f, "{}", self.mid.to_sci_string(digits))
        } else {
            write!(
                f,
                "{} +/- {}",
                self.mid.to_sci_string(digits),
                self.rad.to_sci_string(2)
            )
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&PrecReal> for &PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &PrecReal) -> PrecReal {
                self.$inner(rhs)
            }
        }
        impl $tr<PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: PrecReal) -> PrecReal {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &PrecReal) -> PrecReal {
                (&self).$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ball);
forward_binop!(Sub, sub, sub_ball);
forward_binop!(Mul, mul, mul_ball);

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal::neg(&self)
    }
}

impl Neg for &PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal::neg(self)
    }
}
