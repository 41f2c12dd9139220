//! Logarithmic heights, Matveev's lower bound for linear forms in
//! logarithms, and the explicit bound chains built from them.
//!
//! All bounds are balls; a bound is used through its upper end, so every
//! value handed on is a valid over-estimate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::charpoly::dominant_root;
use crate::error::{Error, Result};
use crate::precreal::{Dyadic, PrecReal, PrecisionPolicy, RealSource, DEFAULT_PRECISION};

/// Where a height bound comes from; `Quoted` bounds are used as stated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    Combined,
    Quoted,
}

/// An upper bound on a logarithmic height.
#[derive(Clone, Debug)]
pub struct HeightBound {
    pub value: PrecReal,
    pub provenance: Provenance,
}

impl HeightBound {
    fn new(value: PrecReal, provenance: Provenance) -> Self {
        // heights are nonnegative
        let value = if value.lower().is_negative() {
            PrecReal::from_bounds(&Dyadic::zero(), &value.upper().max(Dyadic::zero()), value.precision())
        } else {
            value
        };
        Self { value, provenance }
    }

    pub fn upper_f64(&self) -> f64 {
        self.value.upper_f64()
    }
}

fn c(s: &str, prec: u32) -> PrecReal {
    PrecReal::parse_decimal(s, prec).expect("constant literal")
}

fn ln_int(v: u64, prec: u32) -> Result<PrecReal> {
    PrecReal::from_int(BigInt::from(v)).with_prec(prec).ln()
}

/// `h(p/q) = log max(|p|, q)` for the reduced fraction.
pub fn height_rational(p: &BigInt, q: &BigInt, prec: u32) -> Result<HeightBound> {
    if q.is_zero() {
        return Err(Error::domain("zero denominator"));
    }
    let g = p.gcd(q);
    let (p, q) = if g.is_zero() { (p.clone(), q.clone()) } else { (p / &g, q / &g) };
    let top = p.abs().max(q.abs());
    if top.is_zero() {
        return Err(Error::domain("the height of 0 is not defined here"));
    }
    let v = PrecReal::from_int(top).with_prec(prec).ln()?;
    Ok(HeightBound::new(v, Provenance::Exact))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightOp {
    /// `h(x +- y) <= h(x) + h(y) + log 2`
    Sum,
    /// `h(x y^{+-1}) <= h(x) + h(y)`
    Product,
    /// `h(x^s) = |s| h(x)`; the second operand is ignored.
    Power(i64),
}

pub fn height_combine(op: HeightOp, hx: &HeightBound, hy: &HeightBound) -> HeightBound {
    let prec = hx.value.precision().max(hy.value.precision());
    let v = match op {
        HeightOp::Sum => hx.value.add_ball(&hy.value).add_ball(&crate::precreal::ln2(prec)),
        HeightOp::Product => hx.value.add_ball(&hy.value),
        HeightOp::Power(s) => hx.value.mul_int(&BigInt::from(s.unsigned_abs())),
    };
    HeightBound::new(v, Provenance::Combined)
}

/// `h(alpha(k)) = log(alpha)/k`, with the cap `log(2)/k`.
#[derive(Clone, Debug)]
pub struct AlphaHeight {
    pub exact: HeightBound,
    pub cap: HeightBound,
}

pub fn height_alpha(k: u32, prec: u32) -> Result<AlphaHeight> {
    let alpha = dominant_root(k, prec + 16)?.alpha;
    let kk = BigInt::from(k);
    let exact = alpha.ln()?.div_int(&kk)?;
    let cap = crate::precreal::ln2(prec).div_int(&kk)?;
    Ok(AlphaHeight {
        exact: HeightBound::new(exact, Provenance::Exact),
        cap: HeightBound::new(cap, Provenance::Quoted),
    })
}

/// `h((2 alpha - 1) f_k(alpha)) < log 3 + 3 log k`.
pub fn height_lucas_coeff_bound(k: u32, prec: u32) -> Result<HeightBound> {
    if k < 2 {
        return Err(Error::domain("order must be >= 2"));
    }
    let v = ln_int(3, prec)?.add_ball(&ln_int(k as u64, prec)?.mul_int(&BigInt::from(3)));
    Ok(HeightBound::new(v, Provenance::Quoted))
}

/// Height of the quotient of the two dominant coefficients:
/// `log 9 + 3 log k + 3 log l`.
pub fn height_coeff_quotient_bound(k: u32, l: u32, prec: u32) -> Result<HeightBound> {
    Ok(height_combine(
        HeightOp::Product,
        &height_lucas_coeff_bound(k, prec)?,
        &height_lucas_coeff_bound(l, prec)?,
    ))
}

/// Data for Matveev's theorem on `gamma_1^{b_1} ... gamma_t^{b_t} - 1`.
#[derive(Clone, Debug)]
pub struct MatveevInstance {
    pub t: u32,
    pub d: PrecReal,
    pub b: PrecReal,
    pub a: Vec<PrecReal>,
}

impl MatveevInstance {
    pub fn new(t: u32, d: PrecReal, b: PrecReal, a: Vec<PrecReal>) -> Result<Self> {
        if t == 0 || a.len() != t as usize {
            return Err(Error::domain(format!("need t >= 1 and t = {} coefficients", a.len())));
        }
        if d.lt_certain(&PrecReal::one()) != Some(false) {
            return Err(Error::domain("the degree bound D must be >= 1"));
        }
        if b.lt_certain(&PrecReal::one()) != Some(false) {
            return Err(Error::domain("B must be >= 1"));
        }
        let floor = c("0.16", DEFAULT_PRECISION);
        for (i, ai) in a.iter().enumerate() {
            if ai.lt_certain(&floor) == Some(true) {
                return Err(Error::domain(format!("A_{} must be >= 0.16", i + 1)));
            }
        }
        Ok(Self { t, d, b, a })
    }

    /// Takes `A_i = max(D h(gamma_i), |log gamma_i|, 0.16)`.
    pub fn from_heights(d: PrecReal, b: PrecReal, heights: &[HeightBound], logs: &[PrecReal]) -> Result<Self> {
        if heights.len() != logs.len() {
            return Err(Error::domain("one logarithm per height is needed"));
        }
        let floor = c("0.16", d.precision());
        let a = heights
            .iter()
            .zip(logs)
            .map(|(h, lg)| d.mul_ball(&h.value).max(&lg.abs()).max(&floor))
            .collect();
        Self::new(heights.len() as u32, d, b, a)
    }
}

/// `E` with `|Lambda| > exp(-E)`:
/// `1.4 * 30^{t+3} * t^{4.5} * D^2 (1 + log D)(1 + log B) A_1 ... A_t`.
pub fn matveev_exponent(inst: &MatveevInstance, prec: u32) -> Result<PrecReal> {
    let one = PrecReal::one().with_prec(prec);
    let t = PrecReal::from_i64(inst.t as i64).with_prec(prec);
    let t45 = t.pow_u(4).mul_ball(&t.sqrt()?);
    let mut e = c("1.4", prec)
        .mul_ball(&PrecReal::from_i64(30).pow_u(inst.t as u64 + 3))
        .mul_ball(&t45)
        .mul_ball(&inst.d.sqr())
        .mul_ball(&one.add_ball(&inst.d.clone().with_prec(prec).ln()?))
        .mul_ball(&one.add_ball(&inst.b.clone().with_prec(prec).ln()?));
    for a in &inst.a {
        e = e.mul_ball(a);
    }
    Ok(e)
}

/// `C_1 = 1.4 * 30^6 * 3^{4.5} * D^2 (1 + log D)` with `D = k l`.
pub fn c1_constant(k: u32, l: u32, prec: u32) -> Result<PrecReal> {
    let d = PrecReal::from_int(BigInt::from(k) * l).with_prec(prec);
    let three = PrecReal::from_i64(3).with_prec(prec);
    Ok(c("1.4", prec)
        .mul_ball(&PrecReal::from_i64(30).pow_u(6))
        .mul_ball(&three.pow_u(4).mul_ball(&three.sqrt()?))
        .mul_ball(&d.sqr())
        .mul_ball(&PrecReal::one().add_ball(&d.ln()?)))
}

/// `C_1 < 1.5e11 k^4 (1 + 2 log k)`; `None` if undecided at `prec`.
pub fn c1_bound_holds(k: u32, l: u32, prec: u32) -> Result<Option<bool>> {
    let kk = PrecReal::from_i64(k as i64).with_prec(prec);
    let rhs = c("1.5e11", prec)
        .mul_ball(&kk.pow_u(4))
        .mul_ball(&PrecReal::one().add_ball(&kk.ln()?.mul_int(&BigInt::from(2))));
    Ok(c1_constant(k, l, prec)?.lt_certain(&rhs))
}

/// `x log x < A` (and `x / log x < A`) imply `x < 2 A log A` for `A >= 3`.
pub fn solve_xlogx(a: &PrecReal) -> Result<PrecReal> {
    match a.lt_certain(&PrecReal::from_i64(3)) {
        Some(true) => Err(Error::domain("the x log x bound needs A >= 3")),
        None => Err(Error::Unresolved("A >= 3")),
        Some(false) => Ok(a.mul_int(&BigInt::from(2)).mul_ball(&a.ln()?)),
    }
}

/// `5.4e14 k^8 log^3 k` for real `k`.
pub fn m_bound_real(k: &PrecReal, prec: u32) -> Result<PrecReal> {
    let k = k.clone().with_prec(prec);
    Ok(c("5.4e14", prec).mul_ball(&k.pow_u(8)).mul_ball(&k.ln()?.pow_u(3)))
}

/// `M_k = floor(5.4e14 k^8 log^3 k)`.
pub fn bound_m_of_k(k: u32) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::domain("order must be >= 2"));
    }
    let src = RealSource::new(format!("M_{k}"), move |bits| {
        m_bound_real(&PrecReal::from_i64(k as i64), bits)
    });
    crate::precreal::pr_floor_certified(&src, &PrecisionPolicy::default())
}

/// `m < (3n + 5)/2`.
pub fn bound_m_of_n(n: u64) -> Result<PrecReal> {
    if n < 1 {
        return Err(Error::domain("n must be >= 1"));
    }
    Ok(PrecReal::exact(Dyadic::new(BigInt::from(3 * n + 5), -1)))
}

/// The inverse form: `n > (2m - 5)/3`.
pub fn bound_n_of_m(m: u64, prec: u32) -> Result<PrecReal> {
    PrecReal::from_ratio(BigInt::from(2 * m as i64 - 5), BigInt::from(3), prec)
}

/// `Gamma < 4.46e12 l^4 log^2 l log m` for real `l, m`.
pub fn bound_gamma(l: &PrecReal, m: &PrecReal, prec: u32) -> Result<PrecReal> {
    let l = l.clone().with_prec(prec);
    Ok(c("4.46e12", prec)
        .mul_ball(&l.pow_u(4))
        .mul_ball(&l.ln()?.sqr())
        .mul_ball(&m.clone().with_prec(prec).ln()?))
}

/// Builds the constant in `(m-1)/log(m-1) < C k^8 log^2 k` from its
/// factors: `1/log beta < 2.1`, `C_1 < 1.5e11 k^4 (1 + 2 log k)`,
/// `1 + 2 log k < 3 log k`, `1 + log(m-1) < 2 log(m-1)` and
/// `A_1 A_2 A_3 = 0.7k * 0.7k * 8 k^2 log k`.
pub fn small_k_log_constant(prec: u32) -> PrecReal {
    c("2.1", prec)
        .mul_ball(&c("1.5e11", prec))
        .mul_int(&BigInt::from(6))
        .mul_ball(&c("3.92", prec))
}

/// `1/log beta(l) < 2.1`.
pub fn inverse_log_root_below(l: u32, cap: &PrecReal, prec: u32) -> Result<Option<bool>> {
    let b = dominant_root(l, prec + 16)?.alpha;
    Ok(b.ln()?.recip()?.lt_certain(cap))
}

/// `1 + 2 * 7.41e12 k^8 log^2 k * log(7.41e12 k^8 log^2 k)`: the bound on
/// `m` before it is folded into `5.4e14 k^8 log^3 k`.
pub fn small_k_m_bound(k: u32, prec: u32) -> Result<PrecReal> {
    let kk = PrecReal::from_i64(k as i64).with_prec(prec);
    let a = c("7.41e12", prec).mul_ball(&kk.pow_u(8)).mul_ball(&kk.ln()?.sqr());
    Ok(solve_xlogx(&a)?.add_ball(&PrecReal::one()))
}

/// A bound produced by solving a self-referential inequality.
#[derive(Clone, Debug, Serialize)]
pub struct ChainBound {
    pub name: String,
    /// Every `x` satisfying the inequality is below this.
    pub bound: f64,
    pub published: f64,
    pub ratio: f64,
    /// The inequality holds just below the bound.
    pub holds_below: bool,
    /// The inequality fails at the bound and at the next checked points above.
    pub fails_above: bool,
    #[serde(skip)]
    pub bound_exact: Dyadic,
}

impl ChainBound {
    /// Within 1% above the published value, and confirmed by substitution.
    pub fn reproduces_published(&self) -> bool {
        self.ratio <= 1.01 && self.holds_below && self.fails_above
    }
}

type Predicate = dyn Fn(&PrecReal, u32) -> Result<Option<bool>>;

fn decide(pred: &Predicate, x: &Dyadic) -> Result<Option<bool>> {
    let mut bits = DEFAULT_PRECISION;
    loop {
        match pred(&PrecReal::exact(x.clone()).with_prec(bits), bits) {
            Ok(Some(v)) => return Ok(Some(v)),
            Ok(None) => {}
            Err(e) if e.is_recoverable() => {}
            Err(e) => return Err(e),
        }
        if bits >= 4096 {
            return Ok(None);
        }
        bits *= 2;
    }
}

/// Upward bisection on a monotone predicate (true for small `x`, false
/// for large) over `[lo, hi]`, in log scale. Undecided points count as
/// true so the result errs upward.
pub fn solve_chain(name: &str, pred: &Predicate, lo: f64, hi: f64, published: f64) -> Result<ChainBound> {
    let mut lo = Dyadic::from_f64(lo).ok_or_else(|| Error::domain("bad bracket"))?;
    let mut hi = Dyadic::from_f64(hi).ok_or_else(|| Error::domain("bad bracket"))?;
    if decide(pred, &lo)? == Some(false) {
        return Err(Error::domain(format!("{name}: the inequality already fails at the bracket start")));
    }
    if decide(pred, &hi)? != Some(false) {
        return Err(Error::domain(format!("{name}: the inequality still holds at the bracket end")));
    }
    for _ in 0..200 {
        let (l, h) = (lo.to_f64(), hi.to_f64());
        if h / l < 1.0 + 1e-9 {
            break;
        }
        let mid = Dyadic::from_f64((l * h).sqrt()).unwrap().round(60, crate::precreal::Round::Nearest);
        if mid <= lo || mid >= hi {
            break;
        }
        match decide(pred, &mid)? {
            Some(false) => hi = mid,
            _ => lo = mid,
        }
    }
    let holds_below = decide(pred, &lo)? == Some(true);
    let mut fails_above = true;
    for factor in [1.0, 1.000_001, 1.001, 1.1, 2.0, 1e3] {
        let x = Dyadic::from_f64(hi.to_f64() * factor).unwrap();
        fails_above &= decide(pred, &x)? == Some(false);
    }
    let bound = hi.to_f64();
    Ok(ChainBound {
        name: name.to_string(),
        bound,
        published,
        ratio: bound / published,
        holds_below,
        fails_above,
        bound_exact: hi,
    })
}

/// `k < 2 * 4.46e12 (41 log k)^4 log^2(41 log k) log(5.4e14 k^8 log^3 k)`.
pub fn case1_inequality(k: &PrecReal, prec: u32) -> Result<Option<bool>> {
    let l = c("41", prec).mul_ball(&k.ln()?);
    let m = m_bound_real(k, prec)?;
    let rhs = bound_gamma(&l, &m, prec)?.mul_int(&BigInt::from(2));
    Ok(k.lt_certain(&rhs))
}

/// `(2m - 11)/3 < 4.46e12 (3 log m)^4 log^2(3 log m) log m`.
pub fn case2_inequality(m: &PrecReal, prec: u32) -> Result<Option<bool>> {
    let l = m.ln()?.mul_int(&BigInt::from(3));
    let rhs = bound_gamma(&l, m, prec)?;
    let lhs = m.mul_int(&BigInt::from(2)).sub_ball(&PrecReal::from_i64(11)).div_int(&BigInt::from(3))?;
    Ok(lhs.lt_certain(&rhs))
}

/// Bounds for the large-order case where `Gamma = k/2`.
#[derive(Clone, Debug, Serialize)]
pub struct Case1Bounds {
    pub k: ChainBound,
    /// `5.4e14 k^8 log^3 k` at the k bound.
    pub m_bound: f64,
    pub m_ratio: f64,
    /// `floor(41 log k)` at the k bound.
    pub l_max: u64,
}

pub fn case1_bounds(prec: u32) -> Result<Case1Bounds> {
    let k = solve_chain("k (Gamma = k/2)", &case1_inequality, 800.0, 1e40, 2.8e31)?;
    let kb = PrecReal::exact(k.bound_exact.clone()).with_prec(prec);
    let m = m_bound_real(&kb, prec)?;
    let (m_bound, l_max) = (m.upper_f64(), l_max_from_k(&kb, prec)?);
    Ok(Case1Bounds { k, m_bound, m_ratio: m_bound / 7.75e271, l_max })
}

/// `floor(41 log k)`: the largest `l` with `l < 41 log k`, rounded up when
/// undecided.
pub fn l_max_from_k(k: &PrecReal, prec: u32) -> Result<u64> {
    let v = c("41", prec).mul_ball(&k.clone().with_prec(prec).ln()?);
    Ok(v.upper().floor().try_into().unwrap_or(u64::MAX))
}

/// Parameters of the second reduction pass for orders `k < k_max`:
/// `(floor(41 log k_max), 5.4e14 k_max^8 log^3 k_max)`.
pub fn case1_followup(k_max: u64, prec: u32) -> Result<(u64, PrecReal)> {
    let k = PrecReal::from_int(BigInt::from(k_max)).with_prec(prec);
    Ok((l_max_from_k(&k, prec)?, m_bound_real(&k, prec)?))
}

/// Bounds for the large-order case where `Gamma = n - 2`.
#[derive(Clone, Debug, Serialize)]
pub struct Case2Bounds {
    pub m: ChainBound,
    /// `floor(3 log m)` at the m bound.
    pub l_max: u64,
}

pub fn case2_bounds(prec: u32) -> Result<Case2Bounds> {
    let m = solve_chain("m (Gamma = n - 2)", &case2_inequality, 800.0, 1e40, 9.1e24)?;
    let mb = PrecReal::exact(m.bound_exact.clone()).with_prec(prec);
    let l = mb.ln()?.mul_int(&BigInt::from(3));
    let l_max = l.upper().floor().try_into().unwrap_or(u64::MAX);
    Ok(Case2Bounds { m, l_max })
}
