//! Orders above 800: the bound chains, the two-pass reduction, and the
//! final power-of-two search.

use klucas::pipeline::{PipelineConfig, Runner};

fn main() -> klucas::Result<()> {
    let runner = Runner::new(PipelineConfig::default())?;
    for rep in [runner.run_large_k_case1()?, runner.run_large_k_case2()?] {
        println!("{}", rep.case_id.as_str());
        for (k, v) in &rep.maxima {
            println!("  {k} = {v}");
        }
        for (k, ok) in &rep.checks {
            println!("  {k}: {ok}");
        }
    }
    Ok(())
}
