//! Certified checks of the Binet error, the growth sandwich and the
//! power-of-two envelope.

use klucas::charpoly::{
    binet_error_sweep, dominant_split_envelope, envelope_a1_holds, envelope_b1_holds, growth_sandwich_sweep,
};
use klucas::precreal::PrecisionPolicy;

fn main() -> klucas::Result<()> {
    let policy = PrecisionPolicy::default();
    for k in [2, 3, 7, 30] {
        let err = binet_error_sweep(k, 2, 300, &policy)?;
        let sand = growth_sandwich_sweep(k, 2, 300, &policy)?;
        println!("k = {k:2}  |L - dominant| < 3/2: {}  a^(n-1) <= L <= 2a^n: {}", err.holds(), sand.holds());
    }

    let split = dominant_split_envelope(20, 6, &policy)?;
    println!(
        "k = 20, r = 6: deviation {} vs split bound {} ({})",
        split.deviation.to_sci_string(6),
        split.split_bound.to_sci_string(6),
        split.split_holds
    );
    if let Err(e) = dominant_split_envelope(2, 10, &policy) {
        println!("k = 2, r = 10: {e}");
    }

    let a1 = (2..=60).all(|k| (2..=k as i64).all(|n| envelope_a1_holds(k, n, &policy).unwrap()));
    let b1 = (2..=20).all(|l| (3..=200).all(|m| envelope_b1_holds(l, m, &policy).unwrap()));
    println!("constant-15 envelope over k <= 60: {a1}");
    println!("constant-45 envelope over l <= 20, m <= 200: {b1}");
    Ok(())
}
