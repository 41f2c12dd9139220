use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use klucas::precreal::{Dyadic, PrecReal};

fn ratio(d: &Dyadic) -> BigRational {
    let (n, q) = d.to_ratio();
    BigRational::new(n, q)
}

fn encloses(x: &PrecReal, exact: &BigRational) -> bool {
    ratio(&x.lower()) <= *exact && *exact <= ratio(&x.upper())
}

fn ball(n: i64, d: i64, prec: u32) -> (PrecReal, BigRational) {
    (PrecReal::from_ratio(n.into(), d.into(), prec).unwrap(), BigRational::new(n.into(), d.into()))
}

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (-1_000_000_000i64..1_000_000_000, 1i64..1_000_000_000)
}

proptest! {
    #[test]
    fn field_ops_enclose((an, ad) in frac(), (bn, bd) in frac(), prec in 8u32..400) {
        let (a, av) = ball(an, ad, prec);
        let (b, bv) = ball(bn, bd, prec);
        prop_assert!(encloses(&a.add_ball(&b), &(&av + &bv)));
        prop_assert!(encloses(&a.sub_ball(&b), &(&av - &bv)));
        prop_assert!(encloses(&a.mul_ball(&b), &(&av * &bv)));
        if bn != 0 {
            if let Ok(q) = a.div(&b) {
                prop_assert!(encloses(&q, &(&av / &bv)));
            }
        }
    }

    #[test]
    fn powers_enclose((an, ad) in frac(), e in -6i64..12, prec in 8u32..300) {
        prop_assume!(an != 0 || e >= 0);
        let (a, av) = ball(an, ad, prec);
        let exact = num_traits::pow::Pow::pow(&av, e as i32);
        if let Ok(p) = a.powi(e) {
            prop_assert!(encloses(&p, &exact));
        }
    }

    #[test]
    fn sqrt_squares_back(n in 1u64..1_000_000_000_000, prec in 16u32..300) {
        let x = PrecReal::from_int(BigInt::from(n)).with_prec(prec);
        let s = x.sqrt().unwrap();
        let lo = ratio(&s.lower());
        let hi = ratio(&s.upper());
        let nv = BigRational::from_integer(n.into());
        prop_assert!(&lo * &lo <= nv && nv <= &hi * &hi);
    }

    #[test]
    fn exp_and_ln_invert(n in 1i64..10_000, d in 1i64..1000, prec in 32u32..256) {
        let (x, xv) = ball(n, d, prec);
        let back = x.ln().unwrap().exp().unwrap();
        prop_assert!(encloses(&back, &xv));
    }

    #[test]
    fn radius_shrinks_with_precision((an, ad) in frac()) {
        let lo = PrecReal::from_ratio(an.into(), ad.into(), 64).unwrap().sqr();
        let hi = PrecReal::from_ratio(an.into(), ad.into(), 512).unwrap().sqr();
        prop_assert!(hi.radius() <= lo.radius());
    }
}
