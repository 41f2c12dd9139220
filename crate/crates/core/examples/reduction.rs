//! Baker-Davenport reduction on a synthetic instance and on the two
//! families that occur in the proof.

use klucas::linforms::bound_m_of_k;
use klucas::pipeline::parse_bound;
use klucas::precreal::{PrecReal, PrecisionPolicy};
use klucas::reduction::{
    baker_davenport_reduce, brute_force_max_w, build_large_k_problem, build_small_k_problem_with_m, synthetic_problem,
    FormSign,
};
use num_bigint::BigInt;

fn main() -> klucas::Result<()> {
    let policy = PrecisionPolicy::default();

    // 0 < u sqrt(2) - v + 1/3 < 5 * 2^{-w}, u <= 5000
    let prob = synthetic_problem(
        "sqrt2",
        |b| PrecReal::from_i64(2).with_prec(b).sqrt(),
        |b| PrecReal::from_ratio(1.into(), 3.into(), b),
        PrecReal::from_i64(5),
        PrecReal::from_i64(2),
        BigInt::from(5000),
    )?;
    let r = baker_davenport_reduce(&prob, &policy)?;
    let seen = brute_force_max_w(2f64.sqrt(), 1.0 / 3.0, 5.0, 2.0, 5000);
    println!("synthetic: w <= {:.3}, largest w found by enumeration {seen:?}", r.w_bound_f64());

    for sign in FormSign::BOTH {
        let prob = build_small_k_problem_with_m(30, 29, sign, bound_m_of_k(30)?)?;
        let r = baker_davenport_reduce(&prob, &policy)?;
        println!("{}: w <= {:.2} (q has {} digits)", prob.label, r.w_bound_f64(), r.q.to_string().len());
    }

    let prob = build_large_k_problem(40, FormSign::Negative, parse_bound("9.1e24")?)?;
    let r = baker_davenport_reduce(&prob, &policy)?;
    println!("{}: w <= {:.2} at {} bits", prob.label, r.w_bound_f64(), r.bits);
    Ok(())
}
