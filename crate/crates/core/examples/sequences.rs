//! Terms of the k-generalized Lucas sequences and their shared prefix.

use klucas::bigseq::{term, terms_from_zero, terms_up_to, SequenceSpec};
use num_bigint::BigInt;

fn main() -> klucas::Result<()> {
    for k in 2..=5 {
        let spec = SequenceSpec::lucas(k)?;
        let row: Vec<String> = (spec.first_index()..=14).map(|n| term(&spec, n).unwrap().to_string()).collect();
        println!("L^({k}) from n = {}: {}", spec.first_index(), row.join(", "));
    }

    // 3 * 2^{n-2} up to n = k
    let k = 12;
    let prefix = terms_from_zero(&SequenceSpec::lucas(k)?, k as usize + 1);
    for (n, v) in prefix.iter().enumerate().skip(2) {
        let power = BigInt::from(3) << (n - 2);
        println!("n = {n:2}  L = {v:6}  3*2^(n-2) = {power:6}  {}", if *v == power { "=" } else { "!=" });
    }

    let big = term(&SequenceSpec::lucas(3)?, 1000)?;
    println!("L_1000^(3) has {} digits", big.to_string().len());
    let below = terms_up_to(&SequenceSpec::fibonacci(3)?, &BigInt::from(1000))?;
    println!("tribonacci terms below 1000: {}", below.len());
    Ok(())
}
