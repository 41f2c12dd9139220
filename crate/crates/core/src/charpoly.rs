//! The dominant root of `x^k - x^{k-1} - ... - x - 1`, the dominant
//! summand of the Binet-like formula for the k-Lucas numbers, and the
//! certified envelopes around it.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::bigseq::{terms_from_zero, SequenceSpec};
use crate::error::{Error, Result};
use crate::precreal::{Dyadic, PrecReal, PrecisionPolicy};

/// `alpha(k)`, the unique root of the order-`k` characteristic polynomial
/// with `alpha > 1`.
#[derive(Clone, Debug)]
pub struct DominantRoot {
    pub k: u32,
    pub alpha: PrecReal,
}

static ROOT_CACHE: RwLock<Option<HashMap<u32, PrecReal>>> = RwLock::new(None);

fn cached_root(k: u32, prec: u32) -> Option<PrecReal> {
    let guard = ROOT_CACHE.read().unwrap();
    let root = guard.as_ref()?.get(&k)?;
    (root.precision() >= prec).then(|| root.round_to(prec))
}

fn store_root(k: u32, root: &PrecReal) {
    let mut guard = ROOT_CACHE.write().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    match map.get(&k) {
        Some(old) if old.precision() >= root.precision() => {}
        _ => {
            map.insert(k, root.clone());
        }
    }
}

/// `x^{k+1} - 2x^k + 1`, which has the sign of the characteristic
/// polynomial for `x > 1`.
fn shifted_poly(k: u32, x: &PrecReal) -> PrecReal {
    let xk = x.pow_u(k as u64);
    let two = PrecReal::from_i64(2);
    xk.mul_ball(&(x - &two)) + PrecReal::one()
}

fn shifted_poly_derivative(k: u32, x: &PrecReal) -> PrecReal {
    // x^{k-1} ((k+1) x - 2k)
    let xk1 = x.pow_u(k as u64 - 1);
    let lin = x.mul_int(&BigInt::from(k + 1)) - PrecReal::from_i64(2 * k as i64);
    xk1.mul_ball(&lin)
}

/// Sign of the characteristic polynomial at an exact point in `(1, 2]`,
/// or `None` if undecided at `bits`.
fn sign_at(k: u32, x: &Dyadic, bits: u32) -> Option<std::cmp::Ordering> {
    let v = shifted_poly(k, &PrecReal::exact(x.clone()).with_prec(bits));
    if v.is_positive() {
        Some(std::cmp::Ordering::Greater)
    } else if v.is_negative() {
        Some(std::cmp::Ordering::Less)
    } else {
        None
    }
}

fn bracket_low(k: u32) -> Dyadic {
    // 2 (1 - 2^-k)
    Dyadic::from_i64(2).sub(&Dyadic::pow2(1 - k as i64))
}

/// Encloses `alpha(k)` in a ball of radius at most `2^-prec`.
///
/// A few bisection steps on `[2(1 - 2^-k), 2]` give a starting point for
/// Newton's method; the Newton estimate is then certified by a sign change
/// of the polynomial at two exact points around it. If that fails the
/// bisection is carried on to full precision.
pub fn dominant_root(k: u32, prec: u32) -> Result<DominantRoot> {
    if k < 2 {
        return Err(Error::domain(format!("order k must be >= 2, got {k}")));
    }
    if let Some(alpha) = cached_root(k, prec) {
        return Ok(DominantRoot { k, alpha });
    }
    let eval_bits = prec + 64 + 32 - (k.leading_zeros());
    let mut lo = bracket_low(k);
    let mut hi = Dyadic::from_i64(2);
    for _ in 0..10 {
        let mid = lo.add(&hi).mul_2exp(-1);
        match sign_at(k, &mid, eval_bits) {
            Some(std::cmp::Ordering::Less) => lo = mid,
            Some(_) => hi = mid,
            None => break,
        }
    }

    // Newton on midpoints, at full working precision
    let work = prec + 32;
    let mut x = PrecReal::exact(lo.add(&hi).mul_2exp(-1)).with_prec(eval_bits);
    let mut prev_step = None;
    for _ in 0..200 {
        let g = shifted_poly(k, &x);
        let dg = shifted_poly_derivative(k, &x);
        let step = match g.div(&dg) {
            Ok(s) => s,
            Err(_) => break,
        };
        let next = PrecReal::exact(x.sub_ball(&step).mid().round(work as u64 + 8, crate::precreal::Round::Nearest))
            .with_prec(eval_bits);
        let step_mag = step.mid().mag_exp();
        x = next;
        if step_mag < -(work as i64) - 4 {
            break;
        }
        if let Some(p) = prev_step {
            if step_mag >= p && step_mag < -(prec as i64) {
                break;
            }
        }
        prev_step = Some(step_mag);
    }

    let half_width = Dyadic::pow2(-(prec as i64) - 2);
    let (cand_lo, cand_hi) = (x.mid().sub(&half_width), x.mid().add(&half_width));
    let certified = cand_lo > bracket_low(k).sub(&Dyadic::pow2(-(prec as i64) - 8))
        && sign_at(k, &cand_lo, eval_bits) == Some(std::cmp::Ordering::Less)
        && sign_at(k, &cand_hi, eval_bits) == Some(std::cmp::Ordering::Greater);
    let (lo, hi) = if certified {
        (cand_lo, cand_hi)
    } else {
        bisect(k, lo, hi, prec, eval_bits)?
    };
    let alpha = PrecReal::from_bounds(&lo, &hi, prec);
    store_root(k, &alpha);
    Ok(DominantRoot { k, alpha })
}

fn bisect(k: u32, mut lo: Dyadic, mut hi: Dyadic, prec: u32, bits: u32) -> Result<(Dyadic, Dyadic)> {
    let target = Dyadic::pow2(-(prec as i64) - 1);
    while hi.sub(&lo) > target {
        let mid = lo.add(&hi).mul_2exp(-1);
        match sign_at(k, &mid, bits) {
            Some(std::cmp::Ordering::Less) => lo = mid,
            Some(std::cmp::Ordering::Greater) => hi = mid,
            Some(std::cmp::Ordering::Equal) | None => {
                return Err(Error::Unresolved("the sign of the characteristic polynomial"))
            }
        }
    }
    Ok((lo, hi))
}

/// `f_s(x) = (x - 1) / (2 + (s + 1)(x - 2))`.
pub fn f_at(s: u32, x: &PrecReal) -> Result<PrecReal> {
    let one = PrecReal::one();
    let two = PrecReal::from_i64(2);
    let den = &two + &(x - &two).mul_int(&BigInt::from(s + 1));
    (x - &one).div(&den)
}

/// `(2 alpha - 1) f_k(alpha)`, the coefficient of the dominant summand.
pub fn binet_coefficient(k: u32, prec: u32) -> Result<PrecReal> {
    let alpha = dominant_root(k, prec + 16)?.alpha;
    let two_a_minus_one = alpha.mul_int(&BigInt::from(2)) - PrecReal::one();
    Ok(two_a_minus_one.mul_ball(&f_at(k, &alpha)?).round_to(prec))
}

/// `(2 alpha - 1) f_k(alpha) alpha^{n-1}` evaluated at `prec` bits.
pub fn binet_dominant(k: u32, n: i64, prec: u32) -> Result<PrecReal> {
    if n < 2 - k as i64 {
        return Err(Error::domain(format!("index {n} is below 2 - k")));
    }
    let wp = prec + 32;
    let alpha = dominant_root(k, wp)?.alpha;
    let coef = binet_coefficient(k, wp)?;
    Ok(coef.mul_ball(&alpha.powi(n - 1)?).round_to(prec))
}

/// Bits needed to resolve an absolute difference of order one against a
/// dominant term near `2^n`.
fn bits_for_index(n: i64, policy: &PrecisionPolicy) -> u32 {
    (n.max(0) as u32 + 64).max(policy.start)
}

/// Dominant-term values for `n = n_lo..=n_hi`, by repeated multiplication.
fn binet_run(k: u32, n_lo: i64, n_hi: i64, bits: u32) -> Result<Vec<PrecReal>> {
    let wp = bits + 32 + 64 - (n_hi - n_lo + 1).max(1).leading_zeros();
    let alpha = dominant_root(k, wp)?.alpha;
    let mut v = binet_coefficient(k, wp)?.mul_ball(&alpha.powi(n_lo - 1)?);
    let mut out = Vec::with_capacity((n_hi - n_lo + 1).max(0) as usize);
    for _ in n_lo..=n_hi {
        out.push(v.clone());
        v = v.mul_ball(&alpha);
    }
    Ok(out)
}

/// Outcome of a certified check over an index range.
#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub k: u32,
    pub n_lo: i64,
    pub n_hi: i64,
    /// Indices where the property certainly fails.
    pub failures: Vec<i64>,
    pub bits: u32,
}

impl SweepOutcome {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn lucas_values(k: u32, n_lo: i64, n_hi: i64) -> Result<Vec<BigInt>> {
    let spec = SequenceSpec::lucas(k)?;
    Ok(spec
        .terms()
        .skip_while(|(n, _)| *n < n_lo)
        .take((n_hi - n_lo + 1).max(0) as usize)
        .map(|(_, v)| v)
        .collect())
}

/// Runs `decide` on every index, escalating the whole run while any index
/// is undecided.
fn certified_sweep(
    k: u32,
    n_lo: i64,
    n_hi: i64,
    policy: &PrecisionPolicy,
    context: &str,
    mut decide: impl FnMut(i64, &BigInt, &PrecReal, &PrecReal) -> Option<bool>,
) -> Result<SweepOutcome> {
    if n_lo > n_hi {
        return Ok(SweepOutcome { k, n_lo, n_hi, failures: Vec::new(), bits: 0 });
    }
    if n_lo < 2 - k as i64 {
        return Err(Error::domain(format!("index {n_lo} is below 2 - k")));
    }
    let values = lucas_values(k, n_lo, n_hi)?;
    let policy = policy.starting_at(bits_for_index(n_hi, policy));
    let c = policy.escalate(context, |bits| {
        let doms = binet_run(k, n_lo, n_hi, bits)?;
        let wp = doms.first().map_or(bits, |d| d.precision());
        let alpha = dominant_root(k, wp)?.alpha;
        let mut failures = Vec::new();
        for (i, (l, d)) in values.iter().zip(&doms).enumerate() {
            match decide(n_lo + i as i64, l, d, &alpha) {
                Some(true) => {}
                Some(false) => failures.push(n_lo + i as i64),
                None => return Ok(None),
            }
        }
        Ok(Some(failures))
    })?;
    Ok(SweepOutcome { k, n_lo, n_hi, failures: c.value, bits: c.bits })
}

/// `|L_n^{(k)} - (2a - 1) f_k(a) a^{n-1}| < 3/2` for every `n` in range.
pub fn binet_error_sweep(k: u32, n_lo: i64, n_hi: i64, policy: &PrecisionPolicy) -> Result<SweepOutcome> {
    let three_halves = PrecReal::exact(Dyadic::new(BigInt::from(3), -1));
    certified_sweep(k, n_lo, n_hi, policy, "checking the Binet error", |_, l, d, _| {
        let err = (PrecReal::from_int(l.clone()) - d).abs();
        err.lt_certain(&three_halves)
    })
}

/// Single-index form of [`binet_error_sweep`].
pub fn binet_error_check(k: u32, n: i64, policy: &PrecisionPolicy) -> Result<bool> {
    Ok(binet_error_sweep(k, n, n, policy)?.holds())
}

/// `alpha^{n-1} <= L_n^{(k)} <= 2 alpha^n` for every `n >= 1` in range.
pub fn growth_sandwich_sweep(k: u32, n_lo: i64, n_hi: i64, policy: &PrecisionPolicy) -> Result<SweepOutcome> {
    if n_lo < 1 {
        return Err(Error::domain("the growth sandwich needs n >= 1"));
    }
    let mut powers: Option<(i64, PrecReal)> = None;
    certified_sweep(k, n_lo, n_hi, policy, "checking the growth sandwich", |n, l, _, alpha| {
        // alpha^{n-1}, updated incrementally
        let p = match &powers {
            Some((m, p)) if *m == n - 1 && p.precision() == alpha.precision() => p.mul_ball(alpha),
            _ => alpha.pow_u((n - 1) as u64),
        };
        powers = Some((n, p.clone()));
        let lv = PrecReal::from_int(l.clone());
        let low = p.le_certain(&lv)?;
        let high = lv.le_certain(&p.mul_ball(alpha).mul_int(&BigInt::from(2)))?;
        Some(low && high)
    })
}

pub fn growth_sandwich_check(k: u32, n: i64, policy: &PrecisionPolicy) -> Result<bool> {
    Ok(growth_sandwich_sweep(k, n, n, policy)?.holds())
}

/// The bounds on the two error terms in the power-of-two form of the
/// dominant summand at index `r`.
#[derive(Clone, Debug)]
pub struct DominantSplit {
    pub k: u32,
    pub r: i64,
    /// `2^{r+2} / 2^{k/2}`
    pub delta_bound: PrecReal,
    /// `2k / 2^k`
    pub eta_bound: PrecReal,
    /// `|(2a - 1) f_k(a) a^{r-1} - 3 * 2^{r-2}|`
    pub deviation: PrecReal,
    /// `3 * 2^{r-1} eta + delta / 2 + eta * delta` at the bounds
    pub split_bound: PrecReal,
    /// Whether `deviation` is certified below `split_bound`.
    pub split_holds: bool,
}

/// `2^{k/2}` as a ball.
fn two_pow_half(k: u32, prec: u32) -> Result<PrecReal> {
    let base = PrecReal::exact(Dyadic::pow2((k / 2) as i64)).with_prec(prec);
    if k.is_multiple_of(2) {
        Ok(base)
    } else {
        Ok(base.mul_ball(&PrecReal::from_i64(2).with_prec(prec).sqrt()?))
    }
}

fn deviation_from_power(k: u32, r: i64, bits: u32) -> Result<PrecReal> {
    let dom = binet_dominant(k, r, bits)?;
    let power = PrecReal::exact(Dyadic::new(BigInt::from(3), r - 2));
    Ok((dom - power).abs())
}

fn envelope_bits(k: u32, r: i64, policy: &PrecisionPolicy) -> u32 {
    (k / 2 + r.max(0) as u32 + 64).max(policy.start)
}

/// Power-of-two splitting of the dominant summand for `r > 1` and
/// `r - 1 < 2^{k/2}`.
pub fn dominant_split_envelope(k: u32, r: i64, policy: &PrecisionPolicy) -> Result<DominantSplit> {
    if k < 2 || r <= 1 {
        return Err(Error::domain(format!("need k >= 2 and r > 1, got k={k}, r={r}")));
    }
    // (r - 1)^2 < 2^k
    let rm1 = BigInt::from(r - 1);
    if &rm1 * &rm1 >= BigInt::one() << k {
        return Err(Error::domain(format!("r - 1 = {} is not below 2^(k/2) for k = {k}", r - 1)));
    }
    let policy = policy.starting_at(envelope_bits(k, r, policy));
    let c = policy.escalate("checking the dominant split", |bits| {
        let half = two_pow_half(k, bits)?;
        let delta = PrecReal::exact(Dyadic::pow2(r + 2)).with_prec(bits).div(&half)?;
        let eta = PrecReal::exact(Dyadic::new(BigInt::from(2 * k), -(k as i64))).with_prec(bits);
        let split = PrecReal::exact(Dyadic::new(BigInt::from(3), r - 1))
            .mul_ball(&eta)
            .add_ball(&delta.mul_2exp(-1))
            .add_ball(&eta.mul_ball(&delta));
        let dev = deviation_from_power(k, r, bits)?;
        Ok(dev.lt_certain(&split).map(|holds| DominantSplit {
            k,
            r,
            delta_bound: delta,
            eta_bound: eta,
            deviation: dev,
            split_bound: split,
            split_holds: holds,
        }))
    })?;
    Ok(c.value)
}

/// `|(2a - 1) f_k(a) a^{r-1} - 3 * 2^{r-2}| < C * 2^{r-2} / 2^{k/2}`.
pub fn power_envelope_holds(k: u32, r: i64, constant: u32, policy: &PrecisionPolicy) -> Result<bool> {
    if k < 2 || r < 2 - k as i64 {
        return Err(Error::domain("index below 2 - k"));
    }
    let policy = policy.starting_at(envelope_bits(k, r, policy));
    let c = policy.escalate("checking a power envelope", |bits| {
        let dev = deviation_from_power(k, r, bits)?;
        // dev * 2^{k/2} < C * 2^{r-2}
        let lhs = dev.mul_ball(&two_pow_half(k, bits)?);
        let rhs = PrecReal::exact(Dyadic::new(BigInt::from(constant), r - 2));
        Ok(lhs.lt_certain(&rhs))
    })?;
    Ok(c.value)
}

/// The envelope with constant 15, valid for orders above 800.
pub fn envelope_a1_holds(k: u32, n: i64, policy: &PrecisionPolicy) -> Result<bool> {
    power_envelope_holds(k, n, 15, policy)
}

/// The envelope with constant 45.
pub fn envelope_b1_holds(l: u32, m: i64, policy: &PrecisionPolicy) -> Result<bool> {
    power_envelope_holds(l, m, 45, policy)
}

/// `L_n^{(k)}` for `0 <= n <= last`, substituting `3 * 2^{n-2}` for
/// `2 <= n <= k` without running the recurrence when `k` is large.
pub fn lucas_prefix(k: u32, last: usize) -> Result<Vec<BigInt>> {
    if k > 1000 && last <= k as usize {
        let mut out = vec![BigInt::from(2), BigInt::one()];
        out.extend((2..=last).map(|n| BigInt::from(3) << (n - 2)));
        out.truncate(last + 1);
        return Ok(out);
    }
    Ok(terms_from_zero(&SequenceSpec::lucas(k)?, last))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden(prec: u32) -> PrecReal {
        let s5 = PrecReal::from_i64(5).with_prec(prec).sqrt().unwrap();
        (s5 + PrecReal::one()).mul_2exp(-1)
    }

    #[test]
    fn golden_ratio_root() {
        let a = dominant_root(2, 200).unwrap().alpha;
        let g = golden(260);
        assert!(a.radius_log2() <= -200.0);
        assert!((a.clone() - g).contains_zero());
        assert!((a.mid_f64() - 1.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn root_brackets() {
        for k in [2u32, 3, 5, 17, 64, 300] {
            let a = dominant_root(k, 128 + k).unwrap().alpha;
            assert!(a.lower() > bracket_low(k), "k={k}");
            assert!(a.upper() < Dyadic::from_i64(2), "k={k}");
        }
    }

    #[test]
    fn root_of_order_800_is_close_to_two() {
        let a = dominant_root(800, 1024).unwrap().alpha;
        let gap = PrecReal::from_i64(2) - a;
        assert!(gap.is_positive());
        assert!(gap.upper() < Dyadic::pow2(-798));
    }

    #[test]
    fn f_examples() {
        for s in [2u32, 5, 40] {
            let v = f_at(s, &PrecReal::from_i64(2)).unwrap();
            assert!(v.is_exact());
            assert_eq!(v.mid(), &Dyadic::pow2(-1));
        }
        // f_2(phi) = (phi - 1)/(2 + 3(phi - 2)) = (5 + sqrt 5)/10
        let phi = golden(200);
        let v = f_at(2, &phi).unwrap();
        assert!((v.mid_f64() - 0.723_606_797_749_979).abs() < 1e-15);
    }

    #[test]
    fn inverse_f_below_four() {
        for l in 2..=100u32 {
            let b = dominant_root(l, 128 + l).unwrap().alpha;
            let inv = f_at(l, &b).unwrap().recip().unwrap();
            assert_eq!(inv.lt_certain(&PrecReal::from_i64(4)), Some(true), "l={l}");
        }
    }

    #[test]
    fn binet_examples() {
        let p = PrecisionPolicy::default();
        assert!(binet_error_check(2, 10, &p).unwrap());
        let d = binet_dominant(2, 10, 128).unwrap();
        assert!((d.mid_f64() - 123.0).abs() < 0.01);
        let d = binet_dominant(3, 14, 128).unwrap();
        assert!((d.mid_f64() - 4567.0).abs() < 1.5);
        let d = binet_dominant(10, 9, 128).unwrap();
        assert!((d.mid_f64() - 384.0).abs() < 1.5);
    }

    #[test]
    fn binet_on_negative_indices() {
        let out = binet_error_sweep(6, -4, 3, &PrecisionPolicy::default()).unwrap();
        assert!(out.holds());
    }

    #[test]
    fn sandwich_examples() {
        let p = PrecisionPolicy::default();
        assert!(growth_sandwich_check(2, 1, &p).unwrap());
        assert!(growth_sandwich_check(3, 9, &p).unwrap());
        assert!(growth_sandwich_check(3, 10, &p).unwrap());
        assert!(growth_sandwich_check(5, 1, &p).is_ok());
        assert!(growth_sandwich_sweep(3, 0, 4, &p).is_err());
    }

    #[test]
    fn split_envelope() {
        let p = PrecisionPolicy::default();
        let s = dominant_split_envelope(20, 5, &p).unwrap();
        assert!(s.split_holds);
        assert!(dominant_split_envelope(2, 10, &p).is_err());
        assert!(dominant_split_envelope(2, 2, &p).unwrap().split_holds);
        assert!(envelope_b1_holds(2, 10, &p).unwrap());
        assert!(envelope_b1_holds(20, 5, &p).unwrap());
    }

    #[test]
    fn large_order_envelope() {
        let p = PrecisionPolicy::default();
        assert!(envelope_a1_holds(801, 100, &p).unwrap());
        let s = dominant_split_envelope(801, 100, &p).unwrap();
        assert!(s.split_holds);
    }

    #[test]
    fn roots_increase_with_order() {
        let mut prev = dominant_root(2, 128).unwrap().alpha;
        for k in 3..=50 {
            let a = dominant_root(k, 128).unwrap().alpha;
            assert_eq!(prev.lt_certain(&a), Some(true), "k={k}");
            prev = a;
        }
    }

    #[test]
    fn prefix_substitution_matches_recurrence() {
        let fast = lucas_prefix(1200, 40).unwrap();
        let slow = terms_from_zero(&SequenceSpec::lucas(1200).unwrap(), 40);
        assert_eq!(fast, slow);
    }
}
