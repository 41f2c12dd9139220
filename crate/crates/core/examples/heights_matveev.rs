//! Logarithmic heights and the Matveev lower bound for a two-term form.

use klucas::linforms::{
    c1_bound_holds, c1_constant, height_alpha, height_coeff_quotient_bound, height_rational, matveev_exponent,
    MatveevInstance,
};
use klucas::precreal::PrecReal;
use num_bigint::BigInt;

fn main() -> klucas::Result<()> {
    let p = 192;
    let h = height_rational(&BigInt::from(-12), &BigInt::from(18), p)?;
    println!("h(-12/18) = {:.6} (log 3 = {:.6})", h.upper_f64(), 3f64.ln());

    for k in [3, 10, 100] {
        let a = height_alpha(k, p)?;
        println!("k = {k:3}  h(alpha) = {:.6e}  cap {:.6e}", a.exact.upper_f64(), a.cap.upper_f64());
    }

    let (k, l) = (7, 4);
    let hq = height_coeff_quotient_bound(k, l, p)?;
    println!("h(coefficient quotient) < {:.4}", hq.upper_f64());

    // gamma_1 = alpha_k, gamma_2 = alpha_l, gamma_3 = the coefficient quotient
    let d = PrecReal::from_i64((k * l) as i64);
    let a: Vec<PrecReal> = [
        height_alpha(k, p)?.cap.value,
        height_alpha(l, p)?.cap.value,
        hq.value.clone(),
    ]
    .iter()
    .map(|h| d.mul_ball(h).max(&PrecReal::parse_decimal("0.16", p).unwrap()))
    .collect();
    let inst = MatveevInstance::new(3, d, PrecReal::from_i64(1000), a)?;
    println!("|Lambda| > exp(-{})", matveev_exponent(&inst, p)?.to_sci_string(6));
    println!("C1({k},{l}) = {}", c1_constant(k, l, p)?.to_sci_string(6));
    println!("C1 < 1.5e11 k^4 (1 + 2 log k): {:?}", c1_bound_holds(k, l, p)?);
    Ok(())
}
