//! Adaptive-precision real arithmetic with certified error bounds.
//!
//! A [`PrecReal`] is a midpoint-radius ball over exact dyadic rationals.
//! Every operation returns a ball that contains the exact result for every
//! choice of inputs inside the argument balls. Decisions that depend on an
//! exact value (a sign, a floor) are taken only when the ball is narrow
//! enough; otherwise callers re-evaluate at a higher precision through a
//! [`RealSource`] and a [`PrecisionPolicy`].

mod ball;
mod dyadic;
mod expr;
mod funcs;
mod policy;

pub use ball::PrecReal;
pub use dyadic::{Dyadic, Round};
pub use expr::{pr_eval, pr_eval_certified, Expr};
pub use funcs::ln2;
pub use policy::{Certified, PrecisionPolicy, RealSource};

use num_bigint::BigInt;

use crate::error::Result;

/// Working precision used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 192;

/// Escalation never goes beyond this many bits by default.
pub const PRECISION_CEILING: u32 = 1_000_000;

/// Certified `floor(x)`, re-evaluating `x` at higher precision as needed.
pub fn pr_floor_certified(x: &RealSource, policy: &PrecisionPolicy) -> Result<BigInt> {
    policy.floor(x).map(|c| c.value)
}

/// `||x||`, the distance from `x` to the nearest integer.
pub fn pr_nearest_int_distance(x: &PrecReal) -> PrecReal {
    x.nearest_int_distance()
}
