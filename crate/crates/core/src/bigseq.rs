//! Exact k-generalized Fibonacci/Lucas sequences and brute-force searches
//! over their terms.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The sequence `G^{(k)}` with `G_{2-k} = ... = G_{-1} = 0`, `G_0 = a`,
/// `G_1 = b`, and every later term the sum of the `k` before it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequenceSpec {
    k: u32,
    #[serde(with = "crate::decimal")]
    a: BigInt,
    #[serde(with = "crate::decimal")]
    b: BigInt,
}

impl SequenceSpec {
    pub fn new(k: u32, a: BigInt, b: BigInt) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain(format!("order k must be >= 2, got {k}")));
        }
        Ok(Self { k, a, b })
    }

    /// The k-Lucas sequence, seeded `0, ..., 0, 2, 1`.
    pub fn lucas(k: u32) -> Result<Self> {
        Self::new(k, BigInt::from(2), BigInt::one())
    }

    /// The k-Fibonacci sequence, seeded `0, ..., 0, 0, 1`.
    pub fn fibonacci(k: u32) -> Result<Self> {
        Self::new(k, BigInt::zero(), BigInt::one())
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    /// First valid index, `2 - k`.
    pub fn first_index(&self) -> i64 {
        2 - self.k as i64
    }

    /// Iterator over `(n, G_n)` starting at `n = 2 - k`.
    pub fn terms(&self) -> Terms {
        Terms::new(self)
    }
}

/// Sliding-window generator: each step adds the newest term to a running
/// window sum and subtracts the evicted one.
#[derive(Clone, Debug)]
pub struct Terms {
    window: VecDeque<BigInt>,
    sum: BigInt,
    next_index: i64,
    k: usize,
    seeds: VecDeque<BigInt>,
}

impl Terms {
    fn new(spec: &SequenceSpec) -> Self {
        let k = spec.k as usize;
        let mut seeds: VecDeque<BigInt> = (0..k - 2).map(|_| BigInt::zero()).collect();
        seeds.push_back(spec.a.clone());
        seeds.push_back(spec.b.clone());
        Self {
            window: VecDeque::with_capacity(k + 1),
            sum: BigInt::zero(),
            next_index: spec.first_index(),
            k,
            seeds,
        }
    }
}

impl Iterator for Terms {
    type Item = (i64, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let value = match self.seeds.pop_front() {
            Some(seed) => seed,
            None => self.sum.clone(),
        };
        self.sum += &value;
        self.window.push_back(value.clone());
        if self.window.len() > self.k {
            let old = self.window.pop_front().expect("window is nonempty");
            self.sum -= old;
        }
        let n = self.next_index;
        self.next_index += 1;
        Some((n, value))
    }
}

/// `G_n` for `n >= 2 - k`.
pub fn term(spec: &SequenceSpec, n: i64) -> Result<BigInt> {
    if n < spec.first_index() {
        return Err(Error::domain(format!(
            "index {n} is below 2 - k = {}",
            spec.first_index()
        )));
    }
    let skip = (n - spec.first_index()) as usize;
    Ok(spec.terms().nth(skip).expect("infinite iterator").1)
}

/// Terms `G_0..=G_last` as a vector indexed by `n`.
pub fn terms_from_zero(spec: &SequenceSpec, last: usize) -> Vec<BigInt> {
    spec.terms()
        .skip_while(|(n, _)| *n < 0)
        .take(last + 1)
        .map(|(_, v)| v)
        .collect()
}

/// All nonzero terms with `n >= 0` and value `<= limit`, in index order.
///
/// The search stops at the first term past the limit with `n >= 2`, which
/// is sound for nonnegative seeds since the sequence then increases from
/// `n = 2` on.
pub fn terms_up_to(spec: &SequenceSpec, limit: &BigInt) -> Result<Vec<(u64, BigInt)>> {
    if limit < &BigInt::one() {
        return Err(Error::domain("limit must be >= 1"));
    }
    if spec.a.is_negative() || spec.b.is_negative() {
        return Err(Error::domain("terms_up_to needs nonnegative initial values"));
    }
    if spec.a.is_zero() && spec.b.is_zero() {
        return Err(Error::domain("the zero sequence has no nonzero terms"));
    }
    let mut out = Vec::new();
    for (n, v) in spec.terms().skip_while(|(n, _)| *n < 0) {
        if n >= 2 && &v > limit {
            break;
        }
        if !v.is_zero() && &v <= limit {
            out.push((n as u64, v));
        }
    }
    Ok(out)
}

/// Whether `(n, k, m, l)` is one of the shared-prefix solutions
/// `n = m = t` with `0 <= t <= l`.
pub fn is_trivial_solution(n: u64, k: u64, m: u64, l: u64) -> Result<bool> {
    if k <= l || l < 2 {
        return Err(Error::domain(format!("need k > l >= 2, got k={k}, l={l}")));
    }
    Ok(n == m && n <= l)
}

/// `L_n^{(k)} = L_m^{(l)} = value`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coincidence {
    pub n: u64,
    pub m: u64,
    #[serde(with = "crate::decimal")]
    pub value: BigInt,
}

/// Merges two index-ordered term lists on equal values.
///
/// Both lists must be sorted by value except for a leading prefix; the lists
/// are sorted here, so any order is accepted.
pub fn merge_equal_values(
    left: &[(u64, BigInt)],
    right: &[(u64, BigInt)],
) -> Vec<Coincidence> {
    let mut a: Vec<&(u64, BigInt)> = left.iter().collect();
    let mut b: Vec<&(u64, BigInt)> = right.iter().collect();
    a.sort_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)));
    b.sort_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)));
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].1.cmp(&b[j].1) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let v = &a[i].1;
                let i_end = i + a[i..].iter().take_while(|x| &x.1 == v).count();
                let j_end = j + b[j..].iter().take_while(|x| &x.1 == v).count();
                for x in &a[i..i_end] {
                    for y in &b[j..j_end] {
                        out.push(Coincidence {
                            n: x.0,
                            m: y.0,
                            value: v.clone(),
                        });
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
    }
    out.sort();
    out
}

/// All `L_n^{(k)} = L_m^{(l)} <= value_limit` among nonzero terms.
pub fn intersection_bruteforce(k: u32, l: u32, value_limit: &BigInt) -> Result<Vec<Coincidence>> {
    if k <= l || l < 2 {
        return Err(Error::domain(format!("need k > l >= 2, got k={k}, l={l}")));
    }
    let big = terms_up_to(&SequenceSpec::lucas(k)?, value_limit)?;
    let small = terms_up_to(&SequenceSpec::lucas(l)?, value_limit)?;
    Ok(merge_equal_values(&big, &small))
}

/// If `v = 3 * 2^a` with `a >= 0`, returns `a`.
pub fn three_times_power_exponent(v: &BigInt) -> Option<u64> {
    if !v.is_positive() {
        return None;
    }
    let a = v.trailing_zeros()?;
    (v >> a == BigInt::from(3)).then_some(a)
}

/// A solution of `L_n^{(k)} = 3 * 2^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PowerSolution {
    pub n: u64,
    pub k: u32,
    pub a: u64,
}

/// Every `(n, k, a)` with `L_n^{(k)} = 3 * 2^a`, `2 <= k <= k_max`,
/// `0 <= n <= n_max`, `a <= a_max`.
pub fn solve_three_times_power(k_max: u32, n_max: u64, a_max: u64) -> Result<Vec<PowerSolution>> {
    if k_max < 2 || n_max < 2 || a_max < 2 {
        return Err(Error::domain("bounds must be >= 2"));
    }
    let mut out = Vec::new();
    for k in 2..=k_max {
        let spec = SequenceSpec::lucas(k)?;
        for (n, v) in spec.terms().skip_while(|(n, _)| *n < 0) {
            if n as u64 > n_max {
                break;
            }
            if let Some(a) = three_times_power_exponent(&v) {
                if a <= a_max {
                    out.push(PowerSolution { n: n as u64, k, a });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lucas_values(k: u32, from: i64, count: usize) -> Vec<BigInt> {
        SequenceSpec::lucas(k)
            .unwrap()
            .terms()
            .skip_while(|(n, _)| *n < from)
            .take(count)
            .map(|(_, v)| v)
            .collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classical_lucas_prefix() {
        assert_eq!(lucas_values(2, 0, 8), ints(&[2, 1, 3, 4, 7, 11, 18, 29]));
    }

    #[test]
    fn single_terms() {
        let l3 = SequenceSpec::lucas(3).unwrap();
        // L^(3) is listed from n = -1 and L^(4) from n = -2
        assert_eq!(term(&l3, 6).unwrap(), BigInt::from(35));
        assert_eq!(term(&l3, 7).unwrap(), BigInt::from(64));
        let l4 = SequenceSpec::lucas(4).unwrap();
        assert_eq!(term(&l4, 10).unwrap(), BigInt::from(594));
        let f2 = SequenceSpec::fibonacci(2).unwrap();
        assert_eq!(term(&f2, 10).unwrap(), BigInt::from(55));
        for k in 9..15 {
            assert_eq!(term(&SequenceSpec::lucas(k).unwrap(), 8).unwrap(), BigInt::from(192));
        }
    }

    #[test]
    fn negative_prefix_is_zero_and_domain_checked() {
        let l5 = SequenceSpec::lucas(5).unwrap();
        for n in -3..0 {
            assert!(term(&l5, n).unwrap().is_zero());
        }
        assert!(term(&l5, -4).is_err());
        assert!(SequenceSpec::lucas(1).is_err());
    }

    #[test]
    fn terms_up_to_examples() {
        let l3 = SequenceSpec::lucas(3).unwrap();
        let got = terms_up_to(&l3, &BigInt::from(10)).unwrap();
        let want: Vec<(u64, BigInt)> =
            vec![(0, 2), (1, 1), (2, 3), (3, 6), (4, 10)].into_iter().map(|(n, v)| (n, BigInt::from(v))).collect();
        assert_eq!(got, want);
        let l2 = SequenceSpec::lucas(2).unwrap();
        assert_eq!(terms_up_to(&l2, &BigInt::one()).unwrap(), vec![(1, BigInt::one())]);
        let f2 = SequenceSpec::fibonacci(2).unwrap();
        let last = terms_up_to(&f2, &BigInt::from(55)).unwrap().pop().unwrap();
        assert_eq!(last, (10, BigInt::from(55)));
        assert!(terms_up_to(&l2, &BigInt::zero()).is_err());
    }

    #[test]
    fn trivial_solution_examples() {
        assert!(is_trivial_solution(5, 9, 5, 7).unwrap());
        assert!(!is_trivial_solution(8, 9, 8, 7).unwrap());
        assert!(!is_trivial_solution(6, 9, 7, 7).unwrap());
        assert!(is_trivial_solution(1, 7, 1, 7).is_err());
    }

    #[test]
    fn small_intersections() {
        let c = intersection_bruteforce(3, 2, &BigInt::from(1_000_000)).unwrap();
        let mut values: Vec<i64> = c.iter().map(|c| i64::try_from(&c.value).unwrap()).collect();
        values.sort();
        assert_eq!(values, vec![1, 2, 3]);
        assert!(c.iter().all(|c| c.n == c.m));
        assert_eq!(intersection_bruteforce(4, 3, &BigInt::from(1_000_000)).unwrap().len(), 4);
        let c = intersection_bruteforce(5, 2, &BigInt::from(1_000_000_000)).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|c| is_trivial_solution(c.n, 5, c.m, 2).unwrap()));
    }

    #[test]
    fn merge_handles_repeated_values() {
        // Fibonacci has F_1 = F_2 = 1
        let f = terms_up_to(&SequenceSpec::fibonacci(2).unwrap(), &BigInt::from(10)).unwrap();
        let l = terms_up_to(&SequenceSpec::lucas(2).unwrap(), &BigInt::from(10)).unwrap();
        let c = merge_equal_values(&f, &l);
        let ones = c.iter().filter(|c| c.value == BigInt::one()).count();
        assert_eq!(ones, 2);
    }

    #[test]
    fn power_solutions() {
        let sols = solve_three_times_power(10, 40, 40).unwrap();
        let mut want = Vec::new();
        for k in 2..=10u32 {
            for n in 2..=k as u64 {
                want.push(PowerSolution { n, k, a: n - 2 });
            }
        }
        want.sort();
        assert_eq!(sols, want);
        assert!(sols.iter().all(|s| s.n != s.k as u64 + 1));
    }

    #[test]
    fn three_times_power_detection() {
        assert_eq!(three_times_power_exponent(&BigInt::from(3)), Some(0));
        assert_eq!(three_times_power_exponent(&BigInt::from(192)), Some(6));
        assert_eq!(three_times_power_exponent(&BigInt::from(190)), None);
        assert_eq!(three_times_power_exponent(&BigInt::zero()), None);
    }
}
