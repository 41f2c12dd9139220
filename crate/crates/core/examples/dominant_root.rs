//! The dominant root of x^k - x^{k-1} - ... - 1 at increasing precision.

use klucas::charpoly::{binet_coefficient, binet_dominant, dominant_root};
use std::time::Instant;

fn main() -> klucas::Result<()> {
    for k in [2, 3, 4, 10, 50, 800] {
        let r = dominant_root(k, 256)?;
        println!("k = {k:4}  alpha = {}  2 - alpha = {:.3e}", r.alpha.to_sci_string(30), 2.0 - r.alpha.mid_f64());
    }

    for bits in [192, 2048, 20_000] {
        let t = Instant::now();
        let r = dominant_root(3, bits)?;
        println!("k = 3 at {bits:6} bits: radius 2^{:.0}, {:?}", r.alpha.radius_log2(), t.elapsed());
    }

    let k = 4;
    println!("(2a-1) f_4(a) = {}", binet_coefficient(k, 192)?.to_sci_string(25));
    println!("dominant term at n = 12: {}  (L_12^(4) = 2207)", binet_dominant(k, 12, 192)?.to_sci_string(12));
    Ok(())
}
