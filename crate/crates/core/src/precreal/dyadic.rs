//! Exact dyadic rationals `man * 2^exp`.
//!
//! These carry both the midpoints and the radii of [`PrecReal`](super::PrecReal)
//! balls. Every operation here is exact except the explicit `round*`/`div_*`
//! helpers, which take a rounding direction.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for the inexact helpers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

/// An exact value `man * 2^exp`, kept with an odd (or zero) mantissa.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { man, exp }
        } else {
            Self {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Self {
            man: BigInt::one(),
            exp: e,
        }
    }

    /// Exact conversion; `None` for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac as i64, -1074)
        } else {
            ((frac | (1u64 << 52)) as i64, raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(sign * man), exp))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.man.is_zero()
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Smallest `e` with `|self| < 2^e`; `i64::MIN` for zero.
    pub fn mag_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.man * k, self.exp)
    }

    /// Multiply by `2^e`, exact.
    pub fn mul_2exp(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + e,
        }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u64, mode: Round) -> Self {
        let bits = self.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let man = shift_round(&self.man, shift, mode);
        Self::new(man, self.exp + shift as i64)
    }

    /// Round to a multiple of `2^exp` (absolute rounding).
    pub fn round_to_exp(&self, exp: i64, mode: Round) -> Self {
        if self.exp >= exp {
            return self.clone();
        }
        let shift = (exp - self.exp) as u64;
        Self::new(shift_round(&self.man, shift, mode), exp)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            let den = BigInt::one() << (-self.exp) as u64;
            self.man.div_floor(&den)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Nearest integer, ties rounded up.
    pub fn round_int(&self) -> BigInt {
        self.add(&Self::pow2(-1)).floor()
    }

    /// `(numerator, denominator)` with a power-of-two denominator.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (&self.man << self.exp as u64, BigInt::one())
        } else {
            (self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Quotient `a / b` rounded to about `prec` significant bits in the
    /// requested direction. Panics if `b` is zero.
    pub fn div_round(a: &Self, b: &Self, prec: u64, mode: Round) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Self::zero();
        }
        let shift = (prec as i64 + 2 + b.bits() as i64 - a.bits() as i64).max(0) as u64;
        let num = &a.man << shift;
        let (q, r) = num.div_mod_floor(&b.man);
        let q = if r.is_zero() {
            q
        } else {
            match mode {
                Round::Floor => q,
                Round::Ceil => q + 1,
                Round::Nearest => {
                    let twice = (&r << 1u32).abs();
                    if twice >= b.man.abs() {
                        q + 1
                    } else {
                        q
                    }
                }
            }
        };
        Self::new(q, a.exp - shift as i64 - b.exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (man, exp) = if bits > 64 {
            let s = bits - 64;
            ((&self.man >> s).to_f64().unwrap_or(f64::NAN), self.exp + s as i64)
        } else {
            (self.man.to_f64().unwrap_or(f64::NAN), self.exp)
        };
        scale_f64(man, exp)
    }

    /// Decimal scientific rendering with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let neg = self.is_negative();
        let a = self.abs();
        // scale so that the integer part has at least `digits` digits
        let log10 = (a.mag_exp() as f64) * std::f64::consts::LOG10_2;
        let shift10 = (digits as f64 - log10).ceil() as i64 + 2;
        let scaled = if shift10 >= 0 {
            a.mul_int(&num_traits::pow(BigInt::from(10), shift10 as usize))
                .floor()
        } else {
            let den = num_traits::pow(BigInt::from(10), (-shift10) as usize);
            a.floor().div_floor(&den)
        };
        let s = scaled.to_string();
        let exp10 = s.len() as i64 - 1 - shift10;
        let head = &s[..digits.min(s.len())];
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&head[..1]);
        if head.len() > 1 {
            out.push('.');
            out.push_str(&head[1..]);
        }
        out.push_str(&format!("e{exp10}"));
        out
    }
}

fn shift_round(man: &BigInt, shift: u64, mode: Round) -> BigInt {
    let den = BigInt::one() << shift;
    let (q, r) = man.div_mod_floor(&den);
    if r.is_zero() {
        return q;
    }
    match mode {
        Round::Floor => q,
        Round::Ceil => q + 1,
        Round::Nearest => {
            if (r << 1u32) >= den {
                q + 1
            } else {
                q
            }
        }
    }
}

fn scale_f64(man: f64, exp: i64) -> f64 {
    let mut v = man;
    let mut e = exp;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(f.precision().unwrap_or(17)))
    }
}
