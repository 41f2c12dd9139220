//! Replays the case analysis of the intersection theorem: reductions over
//! parameter grids, exact brute-force searches, and structured reports.

mod cache;
mod config;
mod report;

pub use cache::{CacheKey, ReductionCache};
pub use config::{
    CorollaryConfig, FinalConfig, LargeKConfig, PipelineConfig, SmallKConfig, Span, ENV_CACHE_DIR, ENV_JOBS,
};
pub use report::{write_csv, write_json, CaseId, CaseReport, PrecisionEvent, ReductionRecord, SolutionRecord};

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bigseq::{
    intersection_bruteforce, is_trivial_solution, solve_three_times_power, term, terms_from_zero,
    three_times_power_exponent, PowerSolution, SequenceSpec,
};
use crate::charpoly::lucas_prefix;
use crate::error::{Error, Result};
use crate::linforms::{bound_m_of_k, case1_bounds, case1_followup, case2_bounds};
use crate::precreal::{PrecReal, PrecisionPolicy};
use crate::reduction::{
    baker_davenport_reduce, build_large_k_problem, build_small_k_problem_with_m, FormSign,
};

/// Stand-in order for the large-order cases, where only `k > 800` is known.
const LARGE_K: u64 = 801;
const LARGE_K_LABEL: &str = ">800";

/// Parses a decimal bound such as `7.75e271` and rounds it up to an integer.
pub fn parse_bound(s: &str) -> Result<BigInt> {
    let v = PrecReal::parse_decimal(s, 4096)?;
    Ok(v.upper().ceil())
}

/// Shared state for one run.
pub struct Runner {
    pub config: PipelineConfig,
    policy: PrecisionPolicy,
    cache: Option<ReductionCache>,
    pool: rayon::ThreadPool,
}

#[derive(Clone, Debug)]
struct Job {
    stage: &'static str,
    k: Option<u32>,
    l: u32,
    sign: FormSign,
    m: BigInt,
}

impl Job {
    fn key(&self) -> CacheKey {
        CacheKey {
            family: if self.k.is_some() { "small".into() } else { "large".into() },
            k: self.k,
            l: self.l,
            sign: self.sign,
            m: self.m.clone(),
        }
    }
}

impl Runner {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let policy = config.policy()?;
        let cache = config.cache_dir.as_deref().map(ReductionCache::open).transpose()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(Self { config, policy, cache, pool })
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    fn reduce_one(&self, job: &Job) -> Result<ReductionRecord> {
        let key = job.key();
        if let Some(rec) = self.cache.as_ref().and_then(|c| c.get(&key, self.policy.start)) {
            return Ok(rec);
        }
        let prob = match job.k {
            Some(k) => build_small_k_problem_with_m(k, job.l, job.sign, job.m.clone())?,
            None => build_large_k_problem(job.l, job.sign, job.m.clone())?,
        };
        let r = baker_davenport_reduce(&prob, &self.policy)?;
        let rec = ReductionRecord::new(job.stage, job.k, job.l, job.sign, &job.m, &r);
        if let Some(c) = &self.cache {
            c.put(&key, self.policy.start, &rec)?;
        }
        Ok(rec)
    }

    fn reduce_all(&self, jobs: &[Job], report: &mut CaseReport) -> Result<Vec<ReductionRecord>> {
        let recs: Vec<ReductionRecord> =
            self.pool.install(|| jobs.par_iter().map(|j| self.reduce_one(j)).collect::<Result<_>>())?;
        for r in &recs {
            if r.retries > 0 || r.escalated {
                report.precision_events.push(PrecisionEvent {
                    problem: match r.k {
                        Some(k) => format!("{} k={k} l={} {}", r.stage, r.l, r.sign.as_str()),
                        None => format!("{} l={} {}", r.stage, r.l, r.sign.as_str()),
                    },
                    bits: r.bits,
                    retries: r.retries,
                });
            }
        }
        report.reductions.extend(recs.iter().cloned());
        Ok(recs)
    }

    /// Orders `3 <= k <= 800` against every `l < k`: reduce both linear
    /// forms, then compare the two sequences exactly up to the reduced
    /// bound on `m` (at least the configured cap).
    pub fn run_small_k(&self) -> Result<CaseReport> {
        let cfg = &self.config.small_k;
        let mut rep = CaseReport::new(CaseId::SmallK);
        rep.param("k", cfg.k);
        rep.param("l", cfg.l);
        rep.param("m_cap", cfg.m_cap);
        let pairs: Vec<(u32, u32)> = cfg
            .k
            .iter()
            .flat_map(|k| cfg.l.iter().filter(move |&l| l < k).map(move |l| (k, l)))
            .collect();
        let t = Instant::now();
        let mut m_of_k = HashMap::new();
        for &(k, _) in &pairs {
            if let std::collections::hash_map::Entry::Vacant(e) = m_of_k.entry(k) {
                e.insert(bound_m_of_k(k)?);
            }
        }
        let jobs: Vec<Job> = pairs
            .iter()
            .flat_map(|&(k, l)| {
                let m = m_of_k[&k].clone();
                FormSign::BOTH.map(move |sign| Job { stage: "small_k", k: Some(k), l, sign, m: m.clone() })
            })
            .collect();
        let recs = self.reduce_all(&jobs, &mut rep)?;
        rep.timings.insert("reduction".into(), t.elapsed().as_secs_f64());
        let max_w = recs.iter().map(|r| r.w_bound).fold(0.0, f64::max);
        rep.maximum("w_bound", max_w);
        rep.check("w_bound_below_1600", max_w < 1600.0);

        // w bounds m - 1
        let cap = ((max_w.floor() as u64) + 1).max(cfg.m_cap);
        rep.param("m_searched", cap);
        let t = Instant::now();
        let orders: BTreeSet<u32> = pairs.iter().flat_map(|&(k, l)| [k, l]).collect();
        let table: HashMap<u32, Vec<BigInt>> = self.pool.install(|| {
            orders
                .par_iter()
                .map(|&o| Ok((o, terms_from_zero(&SequenceSpec::lucas(o)?, cap as usize))))
                .collect::<Result<_>>()
        })?;
        let found: Vec<(u32, u32, Vec<(u64, u64)>)> = self.pool.install(|| {
            pairs
                .par_iter()
                .map(|&(k, l)| (k, l, equal_terms(&table[&k], &table[&l])))
                .collect()
        });
        let mut trivial = 0usize;
        let mut prefix_ok = true;
        for (k, l, hits) in found {
            let mut trivial_here = 0;
            for (n, m) in hits {
                let v = &table[&k][n as usize];
                if *v != table[&l][m as usize] {
                    return Err(Error::domain("merge reported unequal terms"));
                }
                if is_trivial_solution(n, k as u64, m, l as u64)? {
                    trivial_here += 1;
                } else {
                    push_verified(&mut rep, n, k, m, l)?;
                }
            }
            prefix_ok &= trivial_here == l as usize + 1;
            trivial += trivial_here;
        }
        rep.timings.insert("bruteforce".into(), t.elapsed().as_secs_f64());
        rep.maximum("trivial_coincidences", trivial);
        rep.check("trivial_prefix_complete", prefix_ok);
        let clean = rep.nontrivial_solutions().next().is_none();
        rep.check("no_nontrivial_solutions", clean);
        rep.normalize();
        Ok(rep)
    }

    /// The case `m <= 2^{l/2}`: `2^{l/2} < 38` bounds `l` and `m`, and the
    /// large-order sequence is `2, 1, 3 * 2^{n-2}, ...` on that range.
    pub fn run_case_m_small(&self) -> Result<CaseReport> {
        let mut rep = CaseReport::new(CaseId::MSmallCase);
        let t = Instant::now();
        // 1/2 <= 1 - 2^{-(m-n)} < 19 / 2^{l/2}
        let gate = 38u64;
        let l_max = (2..64u32).take_while(|&l| (1u64 << l) < gate * gate).last().unwrap_or(2);
        let m_max = gate - 1;
        rep.param("l", Span::new(2, l_max));
        rep.param("m_max", m_max);
        rep.maximum("l_from_gate", l_max);
        rep.check("gate_gives_l_le_10", l_max <= 10);
        let big = lucas_prefix(LARGE_K as u32, m_max as usize)?;
        for l in 2..=l_max {
            let small = terms_from_zero(&SequenceSpec::lucas(l)?, m_max as usize);
            for (m, v) in small.iter().enumerate() {
                for (n, u) in big.iter().enumerate() {
                    if u == v {
                        let (n, m) = (n as u64, m as u64);
                        let trivial = is_trivial_solution(n, LARGE_K, m, l as u64)?;
                        rep.solutions.push(SolutionRecord {
                            n,
                            k: LARGE_K_LABEL.into(),
                            m,
                            l: l as u64,
                            value: large_order_term(n)?,
                            trivial,
                        });
                    }
                }
            }
        }
        rep.timings.insert("scan".into(), t.elapsed().as_secs_f64());
        let clean = rep.nontrivial_solutions().next().is_none();
        rep.check("no_nontrivial_solutions", clean);
        rep.normalize();
        Ok(rep)
    }

    /// `Gamma = k/2`: the bound chain, then two reduction passes that push
    /// `k` below 800.
    pub fn run_large_k_case1(&self) -> Result<CaseReport> {
        let cfg = &self.config.large_k;
        let prec = self.policy.start;
        let mut rep = CaseReport::new(CaseId::LargeKCase1);
        let t = Instant::now();
        let chain = case1_bounds(prec)?;
        rep.maximum("chain_k", chain.k.bound);
        rep.maximum("chain_m", chain.m_bound);
        rep.maximum("chain_l", chain.l_max);
        rep.check("chain_k_reproduced", chain.k.reproduces_published());
        rep.check("chain_m_within_published", chain.m_ratio <= 1.01);
        rep.check("chain_l_within_published", chain.l_max <= 2970);
        rep.timings.insert("chain".into(), t.elapsed().as_secs_f64());

        let m1 = parse_bound(&cfg.pass1_m)?;
        rep.check("pass1_m_covers_chain", PrecReal::from_int(m1.clone()).upper_f64() >= chain.m_bound);
        let l1 = cfg.pass1_l_max.min(chain.l_max as u32);
        rep.param("pass1_l", Span::new(2, l1));
        rep.param("pass1_m", &cfg.pass1_m);
        let t = Instant::now();
        let w1 = self.large_pass("case1_pass1", l1, &m1, &mut rep)?;
        rep.timings.insert("pass1".into(), t.elapsed().as_secs_f64());
        rep.maximum("pass1_k_half", w1);
        rep.check("pass1_k_half_le_2980", w1 <= 2980.0);

        // k/2 < w1
        let k_lim = (2.0 * w1).ceil() as u64;
        let (l2_derived, m2_derived) = case1_followup(k_lim.max(2), prec)?;
        let m2_given = parse_bound(&cfg.pass2_m)?;
        let m2 = m2_given.clone().max(m2_derived.upper().ceil());
        let l2 = cfg.pass2_l_max.min(l2_derived as u32);
        rep.maximum("pass1_k_limit", k_lim);
        rep.maximum("pass2_l_derived", l2_derived);
        rep.maximum("pass2_m_derived", m2_derived.upper_f64());
        rep.param("pass2_l", Span::new(2, l2));
        rep.param("pass2_m_digits", m2.to_string().len());
        let t = Instant::now();
        let w2 = self.large_pass("case1_pass2", l2, &m2, &mut rep)?;
        rep.timings.insert("pass2".into(), t.elapsed().as_secs_f64());
        let k2 = 2.0 * w2;
        rep.maximum("pass2_k", k2);
        rep.check("pass2_k_below_740", k2 < 740.0);
        rep.check("contradiction", k2 < 800.0);
        rep.normalize();
        Ok(rep)
    }

    fn large_pass(&self, stage: &'static str, l_max: u32, m: &BigInt, rep: &mut CaseReport) -> Result<f64> {
        let jobs: Vec<Job> = (2..=l_max)
            .flat_map(|l| FormSign::BOTH.map(|sign| Job { stage, k: None, l, sign, m: m.clone() }))
            .collect();
        let recs = self.reduce_all(&jobs, rep)?;
        Ok(recs.iter().map(|r| r.w_bound).fold(0.0, f64::max))
    }

    /// `Gamma = n - 2`: the bound chain, one reduction pass bounding
    /// `n - 2`, and the exact search on the resulting box.
    pub fn run_large_k_case2(&self) -> Result<CaseReport> {
        let cfg = &self.config.large_k;
        let prec = self.policy.start;
        let mut rep = CaseReport::new(CaseId::LargeKCase2);
        let t = Instant::now();
        let chain = case2_bounds(prec)?;
        rep.maximum("chain_m", chain.m.bound);
        rep.maximum("chain_l", chain.l_max);
        rep.check("chain_m_reproduced", chain.m.reproduces_published());
        rep.check("chain_l_le_180", chain.l_max <= 180);
        rep.timings.insert("chain".into(), t.elapsed().as_secs_f64());

        let m = parse_bound(&cfg.case2_m)?.max(ceil_f64(chain.m.bound));
        rep.param("l", Span::new(2, cfg.case2_l_max));
        rep.param("m", &cfg.case2_m);
        let t = Instant::now();
        let w = self.large_pass("case2", cfg.case2_l_max, &m, &mut rep)?;
        rep.timings.insert("reduction".into(), t.elapsed().as_secs_f64());
        rep.maximum("n_minus_2", w);
        rep.check("n_minus_2_le_185", w <= 185.0);

        let n_max = w.floor() as u64 + 2;
        // m < (3n + 5)/2
        let m_max = (3 * n_max + 4) / 2;
        let l_max = (3.0 * (m_max as f64).ln()).floor() as u32;
        rep.maximum("n_derived", n_max);
        rep.maximum("m_derived", m_max);
        rep.maximum("l_derived", l_max);
        let fin = FinalConfig {
            l: Span::new(2, l_max.max(17)),
            m_max: m_max.max(290),
            n: Span::new(6, (n_max as u32).max(190)),
        };
        rep.param("final_search", &fin);
        let t = Instant::now();
        let sub = run_final_bruteforce(&fin)?;
        rep.timings.insert("final_bruteforce".into(), t.elapsed().as_secs_f64());
        rep.solutions.extend(sub.solutions);
        rep.check("final_bruteforce_empty", sub.checks.values().all(|&c| c));
        rep.normalize();
        Ok(rep)
    }

    pub fn run_final_bruteforce(&self) -> Result<CaseReport> {
        run_final_bruteforce(&self.config.final_search)
    }

    pub fn run_corollaries(&self) -> Result<CaseReport> {
        run_corollaries(&self.config.corollaries)
    }

    pub fn run_case(&self, id: CaseId) -> Result<CaseReport> {
        let t = Instant::now();
        let mut rep = match id {
            CaseId::SmallK => self.run_small_k(),
            CaseId::MSmallCase => self.run_case_m_small(),
            CaseId::LargeKCase1 => self.run_large_k_case1(),
            CaseId::LargeKCase2 => self.run_large_k_case2(),
            CaseId::FinalBruteforce => self.run_final_bruteforce(),
            CaseId::Corollaries => self.run_corollaries(),
        }?;
        rep.param("full_scale", self.config.full_scale);
        rep.timings.insert("total".into(), t.elapsed().as_secs_f64());
        Ok(rep)
    }

    pub fn run_all(&self) -> Result<Vec<CaseReport>> {
        CaseId::ALL.into_iter().map(|id| self.run_case(id)).collect()
    }
}

fn ceil_f64(x: f64) -> BigInt {
    crate::precreal::Dyadic::from_f64(x).map_or_else(BigInt::default, |d| d.ceil())
}

/// `L_n^{(k)}` for `k > 800` and `n <= 800`.
fn large_order_term(n: u64) -> Result<BigInt> {
    Ok(match n {
        0 => BigInt::from(2),
        1 => BigInt::from(1),
        n if n <= 800 => BigInt::from(3) << (n - 2),
        _ => return Err(Error::domain("the power form holds only for n <= k")),
    })
}

fn push_verified(rep: &mut CaseReport, n: u64, k: u32, m: u64, l: u32) -> Result<()> {
    let v = term(&SequenceSpec::lucas(k)?, n as i64)?;
    if v != term(&SequenceSpec::lucas(l)?, m as i64)? {
        return Err(Error::domain(format!("({n},{k},{m},{l}) is not a solution")));
    }
    rep.solutions.push(SolutionRecord {
        n,
        k: k.to_string(),
        m,
        l: l as u64,
        value: v,
        trivial: is_trivial_solution(n, k as u64, m, l as u64)?,
    });
    Ok(())
}

/// Index pairs `(n, m)` with `a[n] = b[m]`, for two Lucas-type prefixes
/// `2, 1, ...` that increase from index 2 on.
pub fn equal_terms(a: &[BigInt], b: &[BigInt]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (i, x) in a.iter().take(2).enumerate() {
        for (j, y) in b.iter().take(2).enumerate() {
            if x == y {
                out.push((i as u64, j as u64));
            }
        }
    }
    let (mut i, mut j) = (2, 2);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((i as u64, j as u64));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `L_m^{(l)} = 3 * 2^{n-2}` over the configured box with `m > l + 1`.
pub fn run_final_bruteforce(cfg: &FinalConfig) -> Result<CaseReport> {
    let t = Instant::now();
    let mut rep = CaseReport::new(CaseId::FinalBruteforce);
    rep.param("l", cfg.l);
    rep.param("m_max", cfg.m_max);
    rep.param("n", cfg.n);
    let mut checked = 0u64;
    for l in cfg.l.iter() {
        let terms = terms_from_zero(&SequenceSpec::lucas(l)?, cfg.m_max as usize);
        for m in (l as u64 + 2)..=cfg.m_max {
            checked += 1;
            let v = &terms[m as usize];
            let Some(a) = three_times_power_exponent(v) else { continue };
            let n = a + 2;
            if n < cfg.n.lo as u64 || n > cfg.n.hi as u64 {
                continue;
            }
            if large_order_term(n)? != *v {
                return Err(Error::domain("power form mismatch"));
            }
            rep.solutions.push(SolutionRecord {
                n,
                k: LARGE_K_LABEL.into(),
                m,
                l: l as u64,
                value: v.clone(),
                trivial: is_trivial_solution(n, LARGE_K, m, l as u64)?,
            });
        }
    }
    rep.maximum("terms_checked", checked);
    rep.timings.insert("scan".into(), t.elapsed().as_secs_f64());
    rep.check("no_solutions", rep.solutions.is_empty());
    rep.normalize();
    Ok(rep)
}

/// Intersections of pairs of sequences up to a value limit, and the
/// solutions of `L_n^{(k)} = 3 * 2^a`.
pub fn run_corollaries(cfg: &CorollaryConfig) -> Result<CaseReport> {
    let t = Instant::now();
    let mut rep = CaseReport::new(CaseId::Corollaries);
    rep.param("orders", cfg.orders);
    rep.param("value_limit", &cfg.value_limit);
    let limit = parse_bound(&cfg.value_limit)?;
    let mut pairs = 0usize;
    let mut sizes_ok = true;
    for k in cfg.orders.iter() {
        for l in cfg.orders.lo.max(2)..k {
            pairs += 1;
            let hits = intersection_bruteforce(k, l, &limit)?;
            let values: BTreeSet<&BigInt> = hits.iter().map(|c| &c.value).collect();
            sizes_ok &= values.len() == l as usize + 1;
            for c in &hits {
                if !is_trivial_solution(c.n, k as u64, c.m, l as u64)? {
                    push_verified(&mut rep, c.n, k, c.m, l)?;
                }
            }
        }
    }
    rep.maximum("pairs", pairs);
    if pairs > 0 {
        rep.check("intersection_size_is_l_plus_1", sizes_ok);
    }
    if cfg.power_k_max >= 2 {
        rep.param("power_k_max", cfg.power_k_max);
        rep.param("power_n_max", cfg.power_n_max);
        let got = solve_three_times_power(cfg.power_k_max, cfg.power_n_max, cfg.power_a_max)?;
        let mut want: Vec<PowerSolution> = (2..=cfg.power_k_max)
            .flat_map(|k| (2..=k as u64).map(move |n| PowerSolution { n, k, a: n - 2 }))
            .filter(|s| s.n <= cfg.power_n_max && s.a <= cfg.power_a_max)
            .collect();
        want.sort();
        rep.maximum("power_solutions", got.len());
        rep.check("power_solutions_are_prefix", got == want);
    }
    rep.timings.insert("scan".into(), t.elapsed().as_secs_f64());
    rep.normalize();
    Ok(rep)
}

/// Exit status of a run: no nontrivial solution anywhere.
pub fn reports_clean(reports: &[CaseReport]) -> bool {
    reports.iter().all(|r| r.nontrivial_solutions().next().is_none())
}
