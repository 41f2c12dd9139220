//! Continued fractions of certified reals and the Baker-Davenport
//! reduction, with constructors for the four linear forms that appear in
//! the intersection problem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::charpoly::{binet_coefficient, dominant_root};
use crate::error::{Error, Result};
use crate::linforms::bound_m_of_k;
use crate::precreal::{ln2, PrecReal, PrecisionPolicy, RealSource};

/// Certified partial quotients and convergents of a real number.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    /// Enclosure of the expanded number at the precision that certified
    /// every quotient.
    pub source: PrecReal,
    pub partial_quotients: Vec<BigInt>,
    /// `(p_i, q_i)`
    pub convergents: Vec<(BigInt, BigInt)>,
    pub bits: u32,
}

impl ContinuedFraction {
    fn push(&mut self, a: BigInt) {
        let n = self.convergents.len();
        let (p, q) = match n {
            0 => (a.clone(), BigInt::one()),
            1 => {
                let (p0, _) = &self.convergents[0];
                (&a * p0 + 1, a.clone())
            }
            _ => {
                let (p1, q1) = &self.convergents[n - 1];
                let (p2, q2) = &self.convergents[n - 2];
                (&a * p1 + p2, &a * q1 + q2)
            }
        };
        self.partial_quotients.push(a);
        self.convergents.push((p, q));
    }

    /// Index of the first convergent whose denominator exceeds `bound`.
    pub fn first_denominator_above(&self, bound: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > bound)
    }
}

enum Expansion {
    Done,
    NeedBits,
    Terminated,
}

fn floor_ratio(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

/// Expands the interval `[lo, hi]` while both ends share each partial
/// quotient, until `enough` is satisfied.
fn expand_interval(
    x: &PrecReal,
    cf: &mut ContinuedFraction,
    enough: &mut dyn FnMut(&ContinuedFraction) -> bool,
) -> Expansion {
    let (mut ln, mut ld) = x.lower().to_ratio();
    let (mut hn, mut hd) = x.upper().to_ratio();
    let exact = x.is_exact();
    loop {
        if enough(cf) {
            return Expansion::Done;
        }
        let a = floor_ratio(&ln, &ld);
        if a != floor_ratio(&hn, &hd) {
            return Expansion::NeedBits;
        }
        let lrem = &ln - &a * &ld;
        let hrem = &hn - &a * &hd;
        cf.push(a);
        if lrem.is_zero() {
            return if exact { Expansion::Terminated } else { Expansion::NeedBits };
        }
        // x -> 1/(x - a) reverses the order of the endpoints
        (ln, ld, hn, hd) = (hd, hrem, ld, lrem);
    }
}

/// Expands `source` until `enough` holds, escalating precision whenever a
/// partial quotient cannot be certified.
pub fn cf_expand_until(
    source: &RealSource,
    policy: &PrecisionPolicy,
    mut enough: impl FnMut(&ContinuedFraction) -> bool,
) -> Result<ContinuedFraction> {
    let mut bits = policy.start;
    let mut best = 0usize;
    loop {
        let x = source.eval(bits)?;
        let mut cf = ContinuedFraction {
            source: x.clone(),
            partial_quotients: Vec::new(),
            convergents: Vec::new(),
            bits,
        };
        match expand_interval(&x, &mut cf, &mut enough) {
            Expansion::Done => return Ok(cf),
            Expansion::Terminated => {
                return Err(Error::domain(format!(
                    "{} is rational; its continued fraction ends after {} quotients",
                    source.label,
                    cf.partial_quotients.len()
                )))
            }
            Expansion::NeedBits => best = best.max(cf.partial_quotients.len()),
        }
        if bits >= policy.ceiling {
            return Err(Error::Ambiguous {
                bits,
                context: format!("partial quotient {best} of {}", source.label),
            });
        }
        bits = bits.saturating_mul(2).min(policy.ceiling);
    }
}

/// The first `count` partial quotients of `source`.
pub fn cf_expand(source: &RealSource, count: usize, policy: &PrecisionPolicy) -> Result<ContinuedFraction> {
    cf_expand_until(source, policy, |cf| cf.partial_quotients.len() >= count)
}

/// `0 < u gamma - v + mu < A B^{-w}` with `1 <= u <= M`.
#[derive(Clone)]
pub struct ReductionProblem {
    pub label: String,
    pub gamma_hat: RealSource,
    pub mu_hat: RealSource,
    pub a: PrecReal,
    pub b: RealSource,
    pub m: BigInt,
}

impl std::fmt::Debug for ReductionProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReductionProblem")
            .field("label", &self.label)
            .field("gamma_hat", &self.gamma_hat.label)
            .field("mu_hat", &self.mu_hat.label)
            .field("a", &self.a)
            .field("b", &self.b.label)
            .field("m", &self.m)
            .finish()
    }
}

impl ReductionProblem {
    pub fn new(
        label: impl Into<String>,
        gamma_hat: RealSource,
        mu_hat: RealSource,
        a: PrecReal,
        b: RealSource,
        m: BigInt,
    ) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::domain("A must be positive"));
        }
        if b.eval(crate::precreal::DEFAULT_PRECISION)?.le_certain(&PrecReal::one()) != Some(false) {
            return Err(Error::domain("B must be > 1"));
        }
        if m < BigInt::one() {
            return Err(Error::domain("M must be >= 1"));
        }
        Ok(Self { label: label.into(), gamma_hat, mu_hat, a, b, m })
    }
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub q: BigInt,
    pub epsilon: PrecReal,
    /// `log(A q / epsilon) / log B`
    pub w_bound: PrecReal,
    pub convergent_index: usize,
    /// Precision at which the sign of epsilon was certified.
    pub bits: u32,
    /// Convergents skipped because epsilon was not positive.
    pub retries: usize,
    /// Whether any step needed more than its seeded precision.
    pub escalated: bool,
}

impl ReductionResult {
    /// Upper end of the bound, as a float.
    pub fn w_bound_f64(&self) -> f64 {
        self.w_bound.upper_f64()
    }
}

/// Convergents tried after the first one with `q > 6M`.
pub const RETRY_BUDGET: usize = 20;

fn bit_len(v: &BigInt) -> u32 {
    v.bits() as u32
}

fn epsilon_at(prob: &ReductionProblem, q: &BigInt, bits: u32) -> Result<PrecReal> {
    let qr = PrecReal::from_int(q.clone()).with_prec(bits);
    let mu_q = prob.mu_hat.eval(bits)?.mul_ball(&qr).nearest_int_distance();
    let gamma_q = prob.gamma_hat.eval(bits)?.mul_ball(&qr).nearest_int_distance();
    Ok(mu_q.sub_ball(&gamma_q.mul_ball(&PrecReal::from_int(prob.m.clone()))))
}

/// The reduction lemma: with `q > 6M` a convergent denominator of
/// `gamma_hat` and `epsilon = ||mu_hat q|| - M ||gamma_hat q|| > 0`, no
/// solution has `w >= log(A q / epsilon) / log B`.
///
/// When epsilon is not positive, up to [`RETRY_BUDGET`] further convergents
/// are tried.
pub fn baker_davenport_reduce(prob: &ReductionProblem, policy: &PrecisionPolicy) -> Result<ReductionResult> {
    let six_m = &prob.m * 6;
    let seed = 2 * bit_len(&six_m) + 64;
    let cf_policy = policy.starting_at(seed);
    let mut first = None;
    let cf = cf_expand_until(&prob.gamma_hat, &cf_policy, |cf| {
        if first.is_none() {
            first = cf.first_denominator_above(&six_m);
        }
        matches!(first, Some(i) if cf.convergents.len() > i + RETRY_BUDGET)
    })?;
    let first = first.expect("expansion stops only after a large denominator");

    for retries in 0..=RETRY_BUDGET {
        let index = first + retries;
        let q = &cf.convergents[index].1;
        let start = bit_len(q) + bit_len(&prob.m) + 64;
        let eps_policy = policy.starting_at(start.max(cf.bits));
        let sign = eps_policy.escalate(&format!("the sign of epsilon for {}", prob.label), |bits| {
            let eps = epsilon_at(prob, q, bits)?;
            Ok(if eps.is_positive() {
                Some(Some(eps))
            } else if eps.upper().is_positive() {
                None
            } else {
                Some(None)
            })
        })?;
        let Some(eps) = sign.value else { continue };
        // stable under a doubling of precision
        let bits2 = sign.bits.saturating_mul(2).min(policy.ceiling);
        if !epsilon_at(prob, q, bits2)?.is_positive() {
            return Err(Error::Ambiguous { bits: bits2, context: format!("epsilon for {}", prob.label) });
        }
        let bits = sign.bits;
        let aq = prob.a.clone().with_prec(bits).mul_int(q);
        let w = aq.div(&eps)?.ln()?.div(&prob.b.eval(bits)?.ln()?)?;
        return Ok(ReductionResult {
            q: q.clone(),
            epsilon: eps,
            w_bound: w,
            convergent_index: index,
            bits,
            retries,
            escalated: cf.bits > cf_policy.start || bits > eps_policy.start,
        });
    }
    Err(Error::ReductionFailure { problem: prob.label.clone(), tried: RETRY_BUDGET + 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSign {
    Positive,
    Negative,
}

impl FormSign {
    pub const BOTH: [FormSign; 2] = [FormSign::Positive, FormSign::Negative];

    pub fn as_str(self) -> &'static str {
        match self {
            FormSign::Positive => "pos",
            FormSign::Negative => "neg",
        }
    }
}

impl std::str::FromStr for FormSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" | "+" | "positive" | "z1_pos" | "z2_pos" => Ok(FormSign::Positive),
            "neg" | "-" | "negative" | "z1_neg" | "z2_neg" => Ok(FormSign::Negative),
            _ => Err(Error::domain(format!("unknown sign {s:?}"))),
        }
    }
}

const GUARD: u32 = 32;

fn log_root(k: u32, bits: u32) -> Result<PrecReal> {
    dominant_root(k, bits + GUARD)?.alpha.ln()
}

fn log_coefficient(k: u32, bits: u32) -> Result<PrecReal> {
    binet_coefficient(k, bits + GUARD)?.ln()
}

fn source(label: String, f: impl Fn(u32) -> Result<PrecReal> + Send + Sync + 'static) -> RealSource {
    RealSource::new(label, f)
}

/// The linear form in `z_1 = (n-1) log alpha - (m-1) log beta + log mu(k, l)`
/// with `alpha = alpha(k)`, `beta = alpha(l)` and
/// `mu(k, l) = (2 alpha - 1) f_k(alpha) / ((2 beta - 1) f_l(beta))`.
pub fn build_small_k_problem(k: u32, l: u32, sign: FormSign) -> Result<ReductionProblem> {
    if l < 2 || k <= l {
        return Err(Error::domain(format!("need k > l >= 2, got k={k}, l={l}")));
    }
    build_small_k_problem_with_m(k, l, sign, bound_m_of_k(k)?)
}

/// As [`build_small_k_problem`] with an explicit bound on the multiplier.
pub fn build_small_k_problem_with_m(k: u32, l: u32, sign: FormSign, m: BigInt) -> Result<ReductionProblem> {
    if l < 2 || k <= l {
        return Err(Error::domain(format!("need k > l >= 2, got k={k}, l={l}")));
    }
    let log_mu = move |bits: u32| -> Result<PrecReal> {
        Ok(log_coefficient(k, bits)? - log_coefficient(l, bits)?)
    };
    let b = source(format!("beta({l})"), move |bits| Ok(dominant_root(l, bits + GUARD)?.alpha));
    let tag = format!("k={k} l={l} z1_{}", sign.as_str());
    let (gamma, mu, a) = match sign {
        FormSign::Positive => (
            source(format!("log alpha({k})/log beta({l})"), move |bits| {
                log_root(k, bits)?.div(&log_root(l, bits)?)
            }),
            source(format!("1 + log mu({k},{l})/log beta({l})"), move |bits| {
                Ok(PrecReal::one() + log_mu(bits)?.div(&log_root(l, bits)?)?)
            }),
            13,
        ),
        FormSign::Negative => (
            source(format!("log beta({l})/log alpha({k})"), move |bits| {
                log_root(l, bits)?.div(&log_root(k, bits)?)
            }),
            source(format!("1 - log mu({k},{l})/log alpha({k})"), move |bits| {
                Ok(PrecReal::one() - log_mu(bits)?.div(&log_root(k, bits)?)?)
            }),
            24,
        ),
    };
    ReductionProblem::new(tag, gamma, mu, PrecReal::from_i64(a), b, m)
}

/// `log mu(l)` with `mu(l) = (2 beta - 1) f_l(beta) / 3`.
fn log_mu_large(l: u32, bits: u32) -> Result<PrecReal> {
    Ok(log_coefficient(l, bits)? - PrecReal::from_i64(3).with_prec(bits + GUARD).ln()?)
}

/// The linear form in `z_2 = (m-1) log beta - (n-2) log 2 + log mu(l)`.
pub fn build_large_k_problem(l: u32, sign: FormSign, m: BigInt) -> Result<ReductionProblem> {
    if l < 2 {
        return Err(Error::domain(format!("need l >= 2, got {l}")));
    }
    let b = RealSource::constant("2", PrecReal::from_i64(2));
    let tag = format!("l={l} z2_{}", sign.as_str());
    let (gamma, mu, a) = match sign {
        FormSign::Positive => (
            source(format!("log beta({l})/log 2"), move |bits| log_root(l, bits)?.div(&ln2(bits + GUARD))),
            source(format!("2 + log mu({l})/log 2"), move |bits| {
                Ok(PrecReal::from_i64(2) + log_mu_large(l, bits)?.div(&ln2(bits + GUARD))?)
            }),
            9,
        ),
        FormSign::Negative => (
            source(format!("log 2/log beta({l})"), move |bits| ln2(bits + GUARD).div(&log_root(l, bits)?)),
            source(format!("1 - log mu({l})/log beta({l})"), move |bits| {
                Ok(PrecReal::one() - log_mu_large(l, bits)?.div(&log_root(l, bits)?)?)
            }),
            26,
        ),
    };
    ReductionProblem::new(tag, gamma, mu, PrecReal::from_i64(a), b, m)
}

/// `mu(l) = (2 beta - 1) f_l(beta) / 3`.
pub fn mu_large(l: u32, bits: u32) -> Result<PrecReal> {
    binet_coefficient(l, bits)?.div_int(&BigInt::from(3))
}

/// A problem from plain closures, for synthetic instances.
pub fn synthetic_problem(
    label: &str,
    gamma: impl Fn(u32) -> Result<PrecReal> + Send + Sync + 'static,
    mu: impl Fn(u32) -> Result<PrecReal> + Send + Sync + 'static,
    a: PrecReal,
    b: PrecReal,
    m: BigInt,
) -> Result<ReductionProblem> {
    ReductionProblem::new(
        label,
        RealSource::new(format!("{label}: gamma"), gamma),
        RealSource::new(format!("{label}: mu"), mu),
        a,
        RealSource::constant(format!("{label}: B"), b),
        m,
    )
}

/// Largest `w` over `1 <= u <= M` with `0 < u gamma - v + mu < A B^{-w}`,
/// found by enumeration in double precision. Only meaningful for small `M`.
pub fn brute_force_max_w(gamma: f64, mu: f64, a: f64, b: f64, m: u64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for u in 1..=m {
        let t = u as f64 * gamma + mu;
        // the smallest positive value of u gamma - v + mu
        let x = t - t.floor();
        if x > 0.0 {
            let w = (a / x).ln() / b.ln();
            best = Some(best.map_or(w, |bw: f64| bw.max(w)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precreal::Dyadic;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn sqrt_source(v: i64) -> RealSource {
        RealSource::new(format!("sqrt {v}"), move |bits| PrecReal::from_i64(v).with_prec(bits).sqrt())
    }

    #[test]
    fn golden_ratio_quotients() {
        let src = RealSource::new("phi", |bits| {
            Ok((PrecReal::from_i64(5).with_prec(bits).sqrt()? + PrecReal::one()).mul_2exp(-1))
        });
        let cf = cf_expand(&src, 200, &policy()).unwrap();
        assert!(cf.partial_quotients.iter().all(|a| a == &BigInt::one()));
        assert!(cf.bits > 192);
    }

    #[test]
    fn sqrt_two_quotients() {
        let cf = cf_expand(&sqrt_source(2), 30, &policy()).unwrap();
        assert_eq!(cf.partial_quotients[0], BigInt::from(1));
        assert!(cf.partial_quotients[1..].iter().all(|a| a == &BigInt::from(2)));
    }

    #[test]
    fn quotients_stable_under_escalation() {
        let src = RealSource::new("log alpha(3)/log alpha(2)", |bits| log_root(3, bits)?.div(&log_root(2, bits)?));
        let low = cf_expand(&src, 40, &policy()).unwrap();
        let high = cf_expand(&src, 40, &policy().starting_at(384)).unwrap();
        assert_eq!(low.partial_quotients, high.partial_quotients);
    }

    #[test]
    fn convergent_laws() {
        let cf = cf_expand(&sqrt_source(7), 60, &policy()).unwrap();
        let x = PrecReal::from_i64(7).with_prec(1024).sqrt().unwrap();
        for i in 0..cf.convergents.len() - 1 {
            let (p, q) = &cf.convergents[i];
            let q1 = &cf.convergents[i + 1].1;
            if i > 1 {
                assert!(q > &cf.convergents[i - 1].1);
            }
            // |x q - p| q_{i+1} < 1
            let err = (x.mul_int(q) - PrecReal::from_int(p.clone())).abs().mul_int(q1);
            assert_eq!(err.lt_certain(&PrecReal::one()), Some(true), "i={i} p={p} q={q} err={err:?} a={:?}", &cf.partial_quotients[..i + 2]);
        }
    }

    #[test]
    fn rational_input_ends() {
        let src = RealSource::constant("3/2", PrecReal::exact(Dyadic::new(BigInt::from(3), -1)));
        assert!(matches!(cf_expand(&src, 5, &policy()), Err(Error::Domain(_))));
    }

    #[test]
    fn small_k_example() {
        let prob = build_small_k_problem(3, 2, FormSign::Positive).unwrap();
        assert_eq!(prob.a.mid_f64(), 13.0);
        let r = baker_davenport_reduce(&prob, &policy()).unwrap();
        assert!(r.q > &prob.m * 6);
        assert!(r.epsilon.is_positive());
        assert!(r.w_bound_f64() < 1600.0);
        let neg = build_small_k_problem(3, 2, FormSign::Negative).unwrap();
        assert_eq!(neg.a.mid_f64(), 24.0);
        assert!(baker_davenport_reduce(&neg, &policy()).unwrap().w_bound_f64() < 1600.0);
        assert!(build_small_k_problem(3, 3, FormSign::Positive).is_err());
    }

    #[test]
    fn large_k_constructors() {
        let m: BigInt = "9100000000000000000000000".parse().unwrap();
        let p = build_large_k_problem(2, FormSign::Positive, m.clone()).unwrap();
        assert_eq!(p.a.mid_f64(), 9.0);
        assert_eq!(p.b.eval(64).unwrap().mid_f64(), 2.0);
        let n = build_large_k_problem(2, FormSign::Negative, m).unwrap();
        assert_eq!(n.a.mid_f64(), 26.0);
        let mu = mu_large(2, 128).unwrap();
        // (2 phi - 1) f_2(phi) / 3 = (5 + 5 sqrt 5)/30
        assert!((mu.mid_f64() - (5.0 + 5.0 * 5f64.sqrt()) / 30.0).abs() < 1e-15);
    }

    #[test]
    fn large_k_first_pass_example() {
        let m = crate::precreal::PrecReal::parse_decimal("7.75e271", 1024).unwrap().upper().ceil();
        let p = build_large_k_problem(2, FormSign::Positive, m).unwrap();
        let r = baker_davenport_reduce(&p, &policy()).unwrap();
        assert!(r.w_bound_f64() <= 2980.0, "{}", r.w_bound_f64());
    }

    #[test]
    fn degenerate_shift_fails() {
        // mu = 3 gamma makes ||mu q|| <= 3 ||gamma q||, so epsilon < 0 throughout
        let p = synthetic_problem(
            "mu = 3 gamma",
            |bits| PrecReal::from_i64(2).with_prec(bits).sqrt(),
            |bits| Ok(PrecReal::from_i64(2).with_prec(bits).sqrt()?.mul_int(&BigInt::from(3))),
            PrecReal::from_i64(5),
            PrecReal::from_i64(2),
            BigInt::from(100),
        )
        .unwrap();
        let e = baker_davenport_reduce(&p, &policy()).unwrap_err();
        assert!(matches!(e, Error::ReductionFailure { tried: 21, .. }));
    }

    #[test]
    fn bad_parameters_rejected() {
        let g = |bits: u32| PrecReal::from_i64(2).with_prec(bits).sqrt();
        assert!(synthetic_problem("b", g, g, PrecReal::one(), PrecReal::one(), BigInt::from(3)).is_err());
        assert!(synthetic_problem("m", g, g, PrecReal::one(), PrecReal::from_i64(2), BigInt::zero()).is_err());
    }

    #[test]
    fn reduced_bound_covers_enumeration() {
        let p = synthetic_problem(
            "sqrt 3, sqrt 5 / 7",
            |bits| PrecReal::from_i64(3).with_prec(bits).sqrt(),
            |bits| PrecReal::from_i64(5).with_prec(bits).sqrt()?.div_int(&BigInt::from(7)),
            PrecReal::from_i64(10),
            PrecReal::from_i64(3),
            BigInt::from(2000),
        )
        .unwrap();
        let r = baker_davenport_reduce(&p, &policy()).unwrap();
        let w = brute_force_max_w(3f64.sqrt(), 5f64.sqrt() / 7.0, 10.0, 3.0, 2000).unwrap();
        assert!(w < r.w_bound_f64(), "{w} vs {}", r.w_bound_f64());
    }
}
