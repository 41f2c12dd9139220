//! Small-order case: every pair reduced, then both sequences compared
//! exactly up to the reduced bound.
//!
//! `cargo run --release --example small_k_sweep -- 12`

use klucas::pipeline::{PipelineConfig, Runner, Span};

fn main() -> klucas::Result<()> {
    let k_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let mut cfg = PipelineConfig::default();
    cfg.small_k.k = Span::new(3, k_max);
    cfg.small_k.l = Span::new(2, k_max - 1);
    let rep = Runner::new(cfg)?.run_small_k()?;

    println!("{} reductions, max w bound {:.2}", rep.reductions.len(), rep.max_w_bound().unwrap_or(0.0));
    let worst = rep.reductions.iter().max_by(|a, b| a.w_bound.total_cmp(&b.w_bound)).unwrap();
    println!("attained at k = {:?}, l = {}, {}", worst.k, worst.l, worst.sign.as_str());
    for (name, ok) in &rep.checks {
        println!("{name}: {ok}");
    }
    for s in rep.nontrivial_solutions() {
        println!("nontrivial: L_{}^({}) = L_{}^({}) = {}", s.n, s.k, s.m, s.l, s.value);
    }
    Ok(())
}
