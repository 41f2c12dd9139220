//! Exact searches for L_m^(l) = 3 * 2^a, first in the small-m case and
//! then over the final range left after the reductions.

use klucas::bigseq::{term, three_times_power_exponent, SequenceSpec};
use klucas::pipeline::{run_final_bruteforce, FinalConfig, PipelineConfig, Runner};

fn main() -> klucas::Result<()> {
    let rep = Runner::new(PipelineConfig::default())?.run_case_m_small()?;
    println!("m <= 37: {} coincidences, all trivial: {}", rep.solutions.len(), rep.solutions.iter().all(|s| s.trivial));

    let rep = run_final_bruteforce(&FinalConfig::default())?;
    println!("2 <= l <= 17, l+1 < m <= 290: {} solutions", rep.solutions.len());

    for l in 2..=6 {
        let spec = SequenceSpec::lucas(l)?;
        let hits: Vec<(i64, u64)> = (0..=40)
            .filter_map(|m| three_times_power_exponent(&term(&spec, m).unwrap()).map(|a| (m, a)))
            .collect();
        println!("l = {l}: (m, a) with L_m = 3*2^a: {hits:?}");
    }
    Ok(())
}
