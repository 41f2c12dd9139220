use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use klucas::bigseq::{term, SequenceSpec};
use klucas::charpoly::{binet_coefficient, dominant_root};
use klucas::linforms::{
    c1_bound_holds, c1_constant, case1_bounds, case2_bounds, height_alpha, height_coeff_quotient_bound,
    height_lucas_coeff_bound, small_k_m_bound,
};
use klucas::pipeline::{parse_bound, reports_clean, write_csv, write_json, CaseId, CaseReport, PipelineConfig, Runner};
use klucas::precreal::DEFAULT_PRECISION;
use klucas::reduction::{
    baker_davenport_reduce, build_large_k_problem, build_small_k_problem_with_m, FormSign, ReductionResult,
};
use klucas::Result;

/// Intersections of k-generalized Lucas sequences.
#[derive(Parser)]
#[command(name = "klucas", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Sweep the full parameter ranges (hours).
    #[arg(long, global = true)]
    full_scale: bool,
    /// Write the case reports as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write one row per reduction as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Largest working precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    precision_ceiling: Option<u32>,
    /// Worker threads (0 = all CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print terms of a k-generalized Lucas (or Fibonacci) sequence.
    Seq {
        #[arg(short, long)]
        k: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 20)]
        to: i64,
        #[arg(long)]
        fibonacci: bool,
    },
    /// Dominant root and the Binet coefficient.
    Root {
        #[arg(short, long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        bits: u32,
        #[arg(long, default_value_t = 40)]
        digits: usize,
    },
    /// Height bounds for the dominant root and the Binet coefficients.
    Height {
        #[arg(short, long)]
        k: u32,
        #[arg(short, long)]
        l: Option<u32>,
    },
    /// Matveev constants for a pair, or the large-order bound chains.
    Matveev {
        #[arg(short, long, required_unless_present = "chains")]
        k: Option<u32>,
        #[arg(short, long, default_value_t = 2)]
        l: u32,
        #[arg(long)]
        chains: bool,
    },
    /// One Baker-Davenport reduction.
    Reduce {
        #[command(subcommand)]
        family: Family,
    },
    /// Run one case of the proof.
    Case { id: CaseId },
    /// Run every case.
    All,
}

#[derive(Subcommand)]
enum Family {
    /// Small orders: `k <= 800`.
    Small {
        #[arg(short, long)]
        k: u32,
        #[arg(short, long)]
        l: u32,
        #[arg(long, default_value = "pos")]
        sign: FormSign,
        /// Bound on the coefficient; defaults to the one derived from k.
        #[arg(long)]
        m: Option<String>,
    },
    /// Large orders: `k > 800`.
    Large {
        #[arg(short, long)]
        l: u32,
        #[arg(long, default_value = "pos")]
        sign: FormSign,
        #[arg(long, default_value = "7.75e271")]
        m: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_config(g: &Global) -> Result<PipelineConfig> {
    let mut cfg = match &g.config {
        Some(p) => PipelineConfig::from_toml_file(p)?,
        None => PipelineConfig::default(),
    }
    .with_env_overrides()?;
    if g.full_scale || cfg.full_scale {
        cfg = cfg.full_scale();
    }
    if let Some(c) = g.precision_ceiling {
        cfg.precision_ceiling = c;
    }
    if let Some(j) = g.jobs {
        cfg.jobs = j;
    }
    if g.json.is_some() {
        cfg.json = g.json.clone();
    }
    if g.csv.is_some() {
        cfg.csv = g.csv.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// `Ok(false)` when a nontrivial solution turned up.
fn run(cli: Cli) -> Result<bool> {
    let cfg = load_config(&cli.global)?;
    match cli.cmd {
        Cmd::Seq { k, from, to, fibonacci } => {
            let spec = if fibonacci { SequenceSpec::fibonacci(k)? } else { SequenceSpec::lucas(k)? };
            for n in from.max(spec.first_index())..=to {
                println!("{n}\t{}", term(&spec, n)?);
            }
        }
        Cmd::Root { k, bits, digits } => {
            let root = dominant_root(k, bits)?;
            println!("alpha({k}) = {}", root.alpha.to_sci_string(digits));
            println!("(2 alpha - 1) f_k(alpha) = {}", binet_coefficient(k, bits)?.to_sci_string(digits));
        }
        Cmd::Height { k, l } => {
            let h = height_alpha(k, DEFAULT_PRECISION)?;
            println!("h(alpha({k})) = {:.6e} (cap log 2 / k = {:.6e})", h.exact.upper_f64(), h.cap.upper_f64());
            println!("h(coefficient, k={k}) < {:.6}", height_lucas_coeff_bound(k, DEFAULT_PRECISION)?.upper_f64());
            if let Some(l) = l {
                let q = height_coeff_quotient_bound(k, l, DEFAULT_PRECISION)?;
                println!("h(coefficient quotient, k={k}, l={l}) < {:.6}", q.upper_f64());
            }
        }
        Cmd::Matveev { k, l, chains } => {
            if let Some(k) = k {
                let p = DEFAULT_PRECISION;
                println!("C1(k={k}, l={l}) = {}", c1_constant(k, l, p)?.to_sci_string(12));
                println!("C1 < 1.5e11 k^4 (1 + 2 log k): {:?}", c1_bound_holds(k, l, p)?);
                println!("m - 1 < {}", small_k_m_bound(k, p)?.to_sci_string(12));
            }
            if chains {
                let c1 = case1_bounds(DEFAULT_PRECISION)?;
                let c2 = case2_bounds(DEFAULT_PRECISION)?;
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "case1": c1, "case2": c2 }))?);
            }
        }
        Cmd::Reduce { family } => {
            let policy = cfg.policy()?;
            let (label, r) = match family {
                Family::Small { k, l, sign, m } => {
                    let m = match m {
                        Some(s) => parse_bound(&s)?,
                        None => klucas::linforms::bound_m_of_k(k)?,
                    };
                    let prob = build_small_k_problem_with_m(k, l, sign, m)?;
                    (prob.label.clone(), baker_davenport_reduce(&prob, &policy)?)
                }
                Family::Large { l, sign, m } => {
                    let prob = build_large_k_problem(l, sign, parse_bound(&m)?)?;
                    (prob.label.clone(), baker_davenport_reduce(&prob, &policy)?)
                }
            };
            print_reduction(&label, &r);
        }
        Cmd::Case { id } => return finish(&cfg, vec![Runner::new(cfg.clone())?.run_case(id)?]),
        Cmd::All => return finish(&cfg, Runner::new(cfg.clone())?.run_all()?),
    }
    Ok(true)
}

fn print_reduction(label: &str, r: &ReductionResult) {
    let q_digits = r.q.to_string().len();
    println!("{label}");
    println!("  convergent {} with q of {q_digits} digits", r.convergent_index);
    println!("  epsilon = {}", r.epsilon.to_sci_string(8));
    println!("  w <= {:.4}", r.w_bound_f64());
    println!("  {} bits, {} skipped convergents", r.bits, r.retries);
}

fn finish(cfg: &PipelineConfig, reports: Vec<CaseReport>) -> Result<bool> {
    for rep in &reports {
        println!("{}", summary(rep));
    }
    if let Some(p) = &cfg.json {
        write_json(&reports, p)?;
    }
    if let Some(p) = &cfg.csv {
        write_csv(&reports, p)?;
    }
    Ok(reports_clean(&reports))
}

fn summary(rep: &CaseReport) -> String {
    let mut out = format!("[{}] {}", if rep.passed() { "ok" } else { "FAIL" }, rep.case_id.as_str());
    if let Some(w) = rep.max_w_bound() {
        out += &format!("\n  reductions: {}, max w bound {w:.2}", rep.reductions.len());
    }
    for (name, v) in &rep.maxima {
        out += &format!("\n  {name} = {v}");
    }
    for (name, ok) in &rep.checks {
        out += &format!("\n  {name}: {}", if *ok { "yes" } else { "NO" });
    }
    for s in rep.nontrivial_solutions() {
        let value: &BigInt = &s.value;
        out += &format!("\n  nontrivial solution (n,k,m,l) = ({},{},{},{}), value {value}", s.n, s.k, s.m, s.l);
    }
    if let Some(t) = rep.timings.get("total") {
        out += &format!("\n  {t:.2}s");
    }
    out
}
