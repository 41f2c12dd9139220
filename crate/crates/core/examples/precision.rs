//! Ball arithmetic and automatic precision escalation.

use klucas::precreal::{pr_eval, pr_eval_certified, Expr, PrecReal, PrecisionPolicy, RealSource};

fn main() -> klucas::Result<()> {
    // (1 + 1/10^30) - 1, cancels most of the bits
    let x = Expr::int(1).add(Expr::int(1).div(Expr::int(10).pow(30))).sub(Expr::int(1));
    for bits in [64, 128, 192] {
        let v = pr_eval(&x, bits)?;
        println!("{bits:3} bits: {}  radius {:.3e}", v.to_sci_string(10), v.radius_f64());
    }

    let e = Expr::int(2).sqrt().log().mul(Expr::ratio(7, 3)).exp();
    let c = pr_eval_certified(&e, &PrecisionPolicy::default())?;
    println!("exp(7/3 log sqrt 2) = {} at {} bits", c.value.to_sci_string(20), c.bits);

    // (1 + sqrt 2)^60 is within 1e-23 of an integer
    let near = RealSource::new("(1 + sqrt 2)^60", |b| {
        let s = PrecReal::from_i64(2).with_prec(b).sqrt()?;
        Ok(PrecReal::one().add_ball(&s).pow_u(60))
    });
    let f = PrecisionPolicy::new(32, 4096)?.floor(&near)?;
    println!("floor((1 + sqrt 2)^60) = {} at {} bits", f.value, f.bits);

    let tight = PrecisionPolicy::new(64, 128)?;
    match tight.floor(&near) {
        Ok(f) => println!("ceiling 128: {}", f.value),
        Err(e) => println!("ceiling 128: {e}"),
    }
    Ok(())
}
