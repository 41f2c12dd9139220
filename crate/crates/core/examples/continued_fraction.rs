//! Certified continued fractions of irrational reals.

use klucas::charpoly::dominant_root;
use klucas::precreal::{PrecReal, PrecisionPolicy, RealSource};
use klucas::reduction::cf_expand;

fn main() -> klucas::Result<()> {
    let policy = PrecisionPolicy::default();

    let sqrt2 = RealSource::new("sqrt 2", |bits| PrecReal::from_i64(2).with_prec(bits).sqrt());
    let cf = cf_expand(&sqrt2, 12, &policy)?;
    println!("sqrt 2 = {:?}", cf.partial_quotients);

    let e = RealSource::new("e", |bits| PrecReal::one().with_prec(bits).exp());
    let cf = cf_expand(&e, 20, &policy)?;
    println!("e = {:?}", cf.partial_quotients);

    // needs more than the starting precision
    let alpha = RealSource::new("log alpha(3) / log alpha(2)", |bits| {
        dominant_root(3, bits)?.alpha.ln()?.div(&dominant_root(2, bits)?.alpha.ln()?)
    });
    let cf = cf_expand(&alpha, 150, &policy)?;
    let (p, q) = cf.convergents.last().unwrap();
    println!("150 quotients certified at {} bits; last convergent {} digits / {} digits", cf.bits, p.to_string().len(), q.to_string().len());
    Ok(())
}
