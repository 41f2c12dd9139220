//! End-to-end acceptance checks. Each test writes one PASS/FAIL line to
//! stderr (bypassing the test harness capture) and then asserts.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use klucas::bigseq::{intersection_bruteforce, term, terms_from_zero, SequenceSpec};
use klucas::charpoly::{binet_error_sweep, envelope_b1_holds, growth_sandwich_sweep};
use klucas::linforms::{case1_bounds, case2_bounds, small_k_log_constant, small_k_m_bound};
use klucas::pipeline::{parse_bound, run_final_bruteforce, FinalConfig, PipelineConfig, Runner};
use klucas::precreal::{pr_eval, Dyadic, Expr, PrecReal, PrecisionPolicy};
use klucas::reduction::{baker_davenport_reduce, build_small_k_problem, synthetic_problem, FormSign};

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "[{}] criterion {id:2}: {name} ({:.2}s) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(ok, "{line}");
}

/// Plain recurrence, independent of the library: `L_0 = 2, L_1 = 1`,
/// `L_n` the sum of the `k` previous terms with zeros before index 0.
fn naive_lucas(k: usize, count: usize) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = Vec::with_capacity(count);
    for n in 0..count {
        let x = match n {
            0 => BigInt::from(2),
            1 => BigInt::from(1),
            _ => v[n.saturating_sub(k)..n].iter().sum(),
        };
        v.push(x);
    }
    v
}

/// Dominant root in double precision by bisection.
fn alpha_f64(k: i32) -> f64 {
    let g = |x: f64| x.powi(k + 1) - 2.0 * x.powi(k) + 1.0;
    let (mut lo, mut hi) = (2.0 * (1.0 - 0.5f64.powi(k)), 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn dominant_f64(k: i32, n: i32) -> f64 {
    let a = alpha_f64(k);
    let f = (a - 1.0) / (2.0 + (k as f64 + 1.0) * (a - 2.0));
    (2.0 * a - 1.0) * f * a.powi(n - 1)
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn criterion_01_golden_sequences() {
    let t = Instant::now();
    let golden: [(u32, i64, &[u64]); 3] = [
        (2, 0, &[2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123, 199, 322, 521, 843, 1364]),
        (3, -1, &[0, 2, 1, 3, 6, 10, 19, 35, 64, 118, 217, 399, 734, 1350, 2483, 4567]),
        (4, -2, &[0, 0, 2, 1, 3, 6, 12, 22, 43, 83, 160, 308, 594, 1145, 2207, 4254, 8200]),
    ];
    let mut ok = true;
    let mut count = 0;
    for (k, first, values) in golden {
        let spec = SequenceSpec::lucas(k).unwrap();
        for (i, &v) in values.iter().enumerate() {
            ok &= term(&spec, first + i as i64).unwrap() == big(v);
            count += 1;
        }
    }
    let el = t.elapsed();
    report(1, "golden sequences", ok && count == 49 && el < Duration::from_secs(1), el, &format!("{count} terms"));
}

#[test]
fn criterion_02_prefix_power_law() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for k in 2..=200u32 {
        let terms = terms_from_zero(&SequenceSpec::lucas(k).unwrap(), k as usize);
        for n in 2..=k as usize {
            if terms[n] != BigInt::from(3) << (n - 2) {
                bad.push((k, n));
            }
        }
    }
    let el = t.elapsed();
    report(2, "prefix power law, k <= 200", bad.is_empty() && el < Duration::from_secs(5), el, &format!("violations {bad:?}"));
}

#[test]
fn criterion_03_binet_error() {
    let t = Instant::now();
    let policy = PrecisionPolicy::default();
    let mut failures = Vec::new();
    for k in 2..=30 {
        let s = binet_error_sweep(k, 2, 300, &policy).unwrap();
        failures.extend(s.failures.iter().map(|&n| (k, n)));
    }
    // double-precision cross-check where it is meaningful
    let mut oracle_ok = true;
    for k in 2..=30usize {
        let l = naive_lucas(k, 41);
        for n in 2..=40 {
            let v: f64 = l[n].to_string().parse().unwrap();
            oracle_ok &= (v - dominant_f64(k as i32, n as i32)).abs() < 1.5;
        }
    }
    let el = t.elapsed();
    let ok = failures.is_empty() && oracle_ok && el < Duration::from_secs(120);
    report(3, "Binet error < 3/2, k 2..30, n 2..300", ok, el, &format!("failures {failures:?}, f64 oracle {oracle_ok}"));
}

#[test]
fn criterion_04_growth_sandwich() {
    let t = Instant::now();
    let policy = PrecisionPolicy::default();
    let mut failures = Vec::new();
    for k in 2..=30 {
        let s = growth_sandwich_sweep(k, 2, 300, &policy).unwrap();
        failures.extend(s.failures.iter().map(|&n| (k, n)));
    }
    let mut oracle_ok = true;
    for k in 2..=30usize {
        let l = naive_lucas(k, 41);
        let a = alpha_f64(k as i32);
        for n in 2..=40 {
            let v: f64 = l[n].to_string().parse().unwrap();
            oracle_ok &= a.powi(n as i32 - 1) <= v * (1.0 + 1e-12) && v <= 2.0 * a.powi(n as i32) * (1.0 + 1e-12);
        }
    }
    let el = t.elapsed();
    report(4, "growth sandwich, k 2..30, n 2..300", failures.is_empty() && oracle_ok, el, &format!("failures {failures:?}"));
}

#[test]
fn criterion_05_envelope_b1() {
    let t = Instant::now();
    let policy = PrecisionPolicy::default();
    let mut failures = Vec::new();
    for l in 2..=20u32 {
        for m in 3..=200i64 {
            if !envelope_b1_holds(l, m, &policy).unwrap() {
                failures.push((l, m));
            }
        }
    }
    let el = t.elapsed();
    report(5, "envelope with constant 45, l 2..20, m 3..200", failures.is_empty(), el, &format!("failures {failures:?}"));
}

#[test]
fn criterion_06_small_k_reduction() {
    let t = Instant::now();
    let policy = PrecisionPolicy::default();
    let pairs: Vec<(u32, u32, FormSign)> = (3..=30u32)
        .flat_map(|k| (2..k).flat_map(move |l| FormSign::BOTH.into_iter().map(move |s| (k, l, s))))
        .collect();
    let mut max_w = 0f64;
    let mut bad = Vec::new();
    for &(k, l, sign) in &pairs {
        let prob = build_small_k_problem(k, l, sign).unwrap();
        match baker_davenport_reduce(&prob, &policy) {
            Ok(r) if r.epsilon.is_positive() && r.w_bound_f64() < 1600.0 => max_w = max_w.max(r.w_bound_f64()),
            Ok(r) => bad.push(format!("{} w={:.2}", prob.label, r.w_bound_f64())),
            Err(e) => bad.push(e.to_string()),
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && pairs.len() == 812 && el < Duration::from_secs(600);
    report(6, "small-k reduction, 2 <= l < k <= 30", ok, el, &format!("{} problems, max w {max_w:.2}, bad {bad:?}", pairs.len()));
}

#[test]
fn criterion_07_final_bruteforce() {
    let t = Instant::now();
    let powers: BTreeSet<BigInt> = (6..=190u64).map(|n| BigInt::from(3) << (n - 2) as usize).collect();
    let mut hits = Vec::new();
    for l in 2..=17usize {
        let seq = naive_lucas(l, 291);
        for m in l + 2..=290 {
            if powers.contains(&seq[m]) {
                hits.push((l, m));
            }
        }
    }
    let rep = run_final_bruteforce(&FinalConfig::default()).unwrap();
    let el = t.elapsed();
    let ok = hits.is_empty() && rep.solutions.is_empty() && el < Duration::from_secs(10);
    report(7, "final search l <= 17, m <= 290, n <= 190", ok, el, &format!("oracle {hits:?}, library {}", rep.solutions.len()));
}

#[test]
fn criterion_08_m_small_case() {
    let t = Instant::now();
    // L_n^{(k)} for k > 800 and n <= 36
    let large = |n: usize| match n {
        0 => big(2),
        1 => big(1),
        _ => BigInt::from(3) << (n - 2),
    };
    let mut hits = Vec::new();
    for l in 2..=10usize {
        let seq = naive_lucas(l, 38);
        for m in 1..=37 {
            for n in 0..m {
                if seq[m] == large(n) {
                    hits.push((n, m, l));
                }
            }
        }
    }
    let rep = Runner::new(PipelineConfig::default()).unwrap().run_case_m_small().unwrap();
    let lib = rep.nontrivial_solutions().count();
    let el = t.elapsed();
    let ok = hits.is_empty() && lib == 0 && el < Duration::from_secs(1);
    report(8, "m <= 2^(l/2) case, l <= 10, n < m <= 37", ok, el, &format!("oracle {hits:?}, library {lib}"));
}

#[test]
fn criterion_09_corollary_intersection_size() {
    let t = Instant::now();
    let limit = parse_bound("1e30").unwrap();
    let seqs: Vec<BTreeSet<BigInt>> = (0..=15usize)
        .map(|k| if k < 2 { BTreeSet::new() } else { naive_lucas(k, 120).into_iter().filter(|v| *v <= limit).collect() })
        .collect();
    let mut wrong = Vec::new();
    for k in 3..=15u32 {
        for l in 2..k {
            let oracle = seqs[k as usize].intersection(&seqs[l as usize]).count();
            let lib: BTreeSet<BigInt> =
                intersection_bruteforce(k, l, &limit).unwrap().into_iter().map(|c| c.value).collect();
            if oracle != l as usize + 1 || lib.len() != l as usize + 1 {
                let extra: Vec<String> =
                    seqs[k as usize].intersection(&seqs[l as usize]).map(|v| v.to_string()).collect();
                wrong.push(format!("(k={k}, l={l}): {} common values {{{}}}", oracle, extra.join(", ")));
            }
        }
    }
    let el = t.elapsed();
    report(9, "intersection size l + 1 for 2 <= l < k <= 15", wrong.is_empty(), el, &wrong.join("; "));
}

#[test]
fn criterion_10_bound_chains() {
    let t = Instant::now();
    let p = 256;
    let c1 = case1_bounds(p).unwrap();
    let c2 = case2_bounds(p).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for b in [&c1.k, &c2.m] {
        let good = b.ratio <= 1.01 && b.holds_below && b.fails_above;
        ok &= good;
        notes.push(format!("{} < {:.4e} (ratio {:.4}, substitution {})", b.name, b.bound, b.ratio, b.holds_below && b.fails_above));
    }
    ok &= c1.m_ratio <= 1.01 && c1.l_max <= 2970 && c2.l_max <= 180;
    notes.push(format!("m < {:.3e} at the k bound, l <= {}, l <= {}", c1.m_bound, c1.l_max, c2.l_max));

    // 7.41e12 k^8 log^2 k, solved, stays below 5.4e14 k^8 log^3 k
    let cst = small_k_log_constant(p);
    ok &= cst.le_certain(&PrecReal::parse_decimal("7.41e12", p).unwrap()) == Some(true);
    let mut form_ok = true;
    for k in (3..=800u32).step_by(7).chain([800]) {
        let kk = PrecReal::from_i64(k as i64).with_prec(p);
        let rhs = PrecReal::parse_decimal("5.4e14", p).unwrap().mul_ball(&kk.pow_u(8)).mul_ball(&kk.ln().unwrap().pow_u(3));
        form_ok &= small_k_m_bound(k, p).unwrap().lt_certain(&rhs) == Some(true);
    }
    ok &= form_ok;
    notes.push(format!("small-k form {form_ok}"));
    report(10, "bound chains", ok, t.elapsed(), &notes.join("; "));
}

/// Largest `w` with `0 < u g - v + mu < A B^{-w}` over `1 <= u <= M`.
fn enumerate_max_w(g: f64, mu: f64, a: f64, b: f64, m: u64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for u in 1..=m {
        let x = u as f64 * g + mu;
        let z = x - x.floor();
        for z in [z, z - 1.0] {
            if z > 0.0 && z < a {
                let w = (a / z).ln() / b.ln();
                best = Some(best.map_or(w, |bw: f64| bw.max(w)));
            }
        }
    }
    best
}

#[test]
fn criterion_11_reduction_oracle() {
    let t = Instant::now();
    let policy = PrecisionPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6c75636173);
    let (mut done, mut failures, mut violations) = (0, 0, Vec::new());
    while done < 120 {
        let s = rng.gen_range(2..200i64);
        if (s as f64).sqrt().fract() == 0.0 {
            continue;
        }
        let (mn, md) = (rng.gen_range(1..50i64), rng.gen_range(51..100i64));
        let a = rng.gen_range(1..40i64);
        let b = [2i64, 3, 5][rng.gen_range(0..3)];
        let m = rng.gen_range(10..=10_000u64);
        let prob = synthetic_problem(
            "random",
            move |bits| PrecReal::from_i64(s).with_prec(bits).sqrt(),
            move |bits| PrecReal::from_ratio(BigInt::from(mn), BigInt::from(md), bits),
            PrecReal::from_i64(a),
            PrecReal::from_i64(b),
            BigInt::from(m),
        )
        .unwrap();
        let r = match baker_davenport_reduce(&prob, &policy) {
            Ok(r) => r,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        done += 1;
        let g = (s as f64).sqrt();
        if let Some(w) = enumerate_max_w(g, mn as f64 / md as f64, a as f64, b as f64, m) {
            if w > r.w_bound_f64() + 1e-9 {
                violations.push(format!("sqrt {s}, mu {mn}/{md}, A {a}, B {b}, M {m}: w {w:.3} > {:.3}", r.w_bound_f64()));
            }
        }
    }
    let detail = format!("{done} instances, {failures} without positive epsilon, violations {violations:?}");
    report(11, "reduction against exhaustive search, M <= 1e4", violations.is_empty() && done >= 100, t.elapsed(), &detail);
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> (Expr, BigRational) {
    if depth == 0 || rng.gen_bool(0.25) {
        let n = rng.gen_range(-1_000_000i64..=1_000_000);
        let d = rng.gen_range(1i64..=1_000_000);
        return (Expr::ratio(n, d), BigRational::new(n.into(), d.into()));
    }
    let (x, xv) = random_expr(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => {
            let (y, yv) = random_expr(rng, depth - 1);
            (x.add(y), xv + yv)
        }
        1 => {
            let (y, yv) = random_expr(rng, depth - 1);
            (x.sub(y), xv - yv)
        }
        2 => {
            let (y, yv) = random_expr(rng, depth - 1);
            (x.mul(y), xv * yv)
        }
        3 => {
            let (y, yv) = random_expr(rng, depth - 1);
            if yv.is_zero() {
                (x, xv)
            } else {
                (x.div(y), xv / yv)
            }
        }
        _ => {
            let e = rng.gen_range(-3i64..=4);
            if e < 0 && xv.is_zero() {
                (x, xv)
            } else {
                (x.pow(e), num_traits::pow::Pow::pow(&xv, e as i32))
            }
        }
    }
}

fn ratio(d: &Dyadic) -> BigRational {
    let (n, q) = d.to_ratio();
    BigRational::new(n, q)
}

#[test]
fn criterion_12_precision_soundness() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut checked, mut undecided, mut outside) = (0, 0, Vec::new());
    while checked < 10_000 {
        let (e, exact) = random_expr(&mut rng, 4);
        let bits = rng.gen_range(16..=320);
        match pr_eval(&e, bits) {
            Ok(v) => {
                checked += 1;
                if !(ratio(&v.lower()) <= exact && exact <= ratio(&v.upper())) {
                    outside.push(format!("{e} at {bits} bits"));
                }
            }
            // a divisor whose ball straddles zero
            Err(_) => undecided += 1,
        }
    }
    let detail = format!("{checked} expressions, {undecided} undecidable divisions, outside {outside:?}");
    report(12, "ball enclosure of random rational expressions", outside.is_empty(), t.elapsed(), &detail);
}
