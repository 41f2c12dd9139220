//! Absolute bounds from the self-referential inequalities, each confirmed
//! by substitution.

use klucas::linforms::{bound_m_of_k, case1_bounds, case1_followup, case2_bounds, small_k_log_constant, small_k_m_bound};

fn main() -> klucas::Result<()> {
    let p = 256;
    println!("small-k log constant: {}", small_k_log_constant(p).to_sci_string(6));
    for k in [3, 30, 800] {
        println!("k = {k:3}  m - 1 < {}  (integer cap {})", small_k_m_bound(k, p)?.to_sci_string(6), bound_m_of_k(k)?);
    }

    let c1 = case1_bounds(p)?;
    println!(
        "k < {:.6e} (published {:.2e}, ratio {:.4}, holds below {}, fails above {})",
        c1.k.bound, c1.k.published, c1.k.ratio, c1.k.holds_below, c1.k.fails_above
    );
    println!("  m < {:.4e} (ratio {:.4}), l <= {}", c1.m_bound, c1.m_ratio, c1.l_max);
    let (l2, m2) = case1_followup(5960, p)?;
    println!("  for k < 5960: l <= {l2}, m < {}", m2.to_sci_string(4));

    let c2 = case2_bounds(p)?;
    println!("m < {:.6e} (published {:.2e}, ratio {:.4}), l <= {}", c2.m.bound, c2.m.published, c2.m.ratio, c2.l_max);
    Ok(())
}
