//! Common values of two sequences, and the equation L_n^(k) = 3 * 2^a.

use klucas::bigseq::{intersection_bruteforce, solve_three_times_power};
use klucas::pipeline::parse_bound;

fn main() -> klucas::Result<()> {
    let limit = parse_bound("1e30")?;
    for k in 3..=8 {
        for l in 2..k {
            let hits = intersection_bruteforce(k, l, &limit)?;
            let values: Vec<String> = hits.iter().map(|c| c.value.to_string()).collect();
            let mark = if hits.len() == l as usize + 1 { "" } else { "  <- extra" };
            println!("k = {k}, l = {l}: {{{}}}{mark}", values.join(", "));
        }
    }

    let sols = solve_three_times_power(8, 40, 40)?;
    let outside: Vec<_> = sols.iter().filter(|s| s.n > s.k as u64 || s.a + 2 != s.n).collect();
    println!("{} solutions of L_n^(k) = 3*2^a for k <= 8, off the prefix: {outside:?}", sols.len());
    Ok(())
}
