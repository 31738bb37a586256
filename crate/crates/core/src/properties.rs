use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use crate::characters::{binomial, char_eval, jacobi_sum};
use crate::gamma::{rational, reflection_check};
use crate::gauss::{gross_koblitz_product, reduce_gauss_product, GaussProduct};
use crate::residue::{make_context, primes_in};
use crate::verify::check_prop_equivalence;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(primes_in(5, 60))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn teichmuller_is_a_multiplicative_lift(p in small_prime(), n in 1u32..5, x in 1u64..1000, y in 1u64..1000) {
        let ctx = make_context(p, n, false).unwrap();
        prop_assume!(x % p != 0 && y % p != 0);
        let (wx, wy) = (ctx.teichmuller(x % p).unwrap(), ctx.teichmuller(y % p).unwrap());
        prop_assert_eq!(wx.value() % p, x % p);
        prop_assert_eq!(ctx.mod_pow(wx, p - 1).value(), 1);
        prop_assert_eq!(ctx.mul(wx, wy), ctx.teichmuller(x * y % p).unwrap());
    }

    #[test]
    fn scaled_arithmetic_matches_rationals(
        p in small_prime(),
        an in -5000i64..5000, ae in 0u32..3,
        bn in -5000i64..5000, be in 0u32..3,
    ) {
        let ctx = make_context(p, 4, false).unwrap();
        let pp = |e: u32| BigInt::from(p).pow(e);
        let ra = BigRational::new(an.into(), pp(ae));
        let rb = BigRational::new(bn.into(), pp(be));
        let (a, b) = (ctx.scaled_from_ratio(&ra).unwrap(), ctx.scaled_from_ratio(&rb).unwrap());
        prop_assert!(ctx.scaled_agree(ctx.scaled_mul(a, b), ctx.scaled_from_ratio(&(&ra * &rb)).unwrap()));
        if let Ok(s) = ctx.scaled_add(a, b) {
            prop_assert!(ctx.scaled_agree(s, ctx.scaled_from_ratio(&(&ra + &rb)).unwrap()));
        }
    }

    #[test]
    fn characters_are_homomorphisms(p in small_prime(), e in 0i64..60, x in 1i64..500, y in 1i64..500) {
        let ctx = make_context(p, 3, false).unwrap();
        let chi = ctx.character(e);
        prop_assert_eq!(char_eval(&ctx, chi, x * y), ctx.mul(char_eval(&ctx, chi, x), char_eval(&ctx, chi, y)));
        prop_assert_eq!(char_eval(&ctx, chi.pow(2), x), ctx.mod_pow(char_eval(&ctx, chi, x), 2));
    }

    #[test]
    fn jacobi_symmetry_and_binomial_scale(p in small_prime(), a in 0i64..60, b in 0i64..60) {
        let ctx = make_context(p, 3, false).unwrap();
        let (x, y) = (ctx.character(a), ctx.character(b));
        prop_assert_eq!(jacobi_sum(&ctx, x, y), jacobi_sum(&ctx, y, x));
        let v = binomial(&ctx, x, y);
        prop_assert!(v.valuation().is_none_or(|k| k >= -1));
    }

    #[test]
    fn gamma_reflection(p in small_prime(), m in 0i64..60) {
        let ctx = make_context(p, 2, true).unwrap();
        prop_assert!(reflection_check(&ctx, rational(m % (p as i64), p as i64 - 1)).unwrap());
    }

    #[test]
    fn balanced_products_agree_across_routes(p in small_prime(), e in prop::array::uniform4(0i64..60)) {
        let ctx = make_context(p, 3, true).unwrap();
        let c: Vec<_> = e.iter().map(|&k| ctx.character(k)).collect();
        let prod = GaussProduct::new(&ctx, c.clone(), vec![c[0] * c[1], c[2] * c[3]]);
        let jac = reduce_gauss_product(&ctx, &prod).unwrap();
        let gk = gross_koblitz_product(&ctx, &prod).unwrap();
        prop_assert!(ctx.scaled_agree(jac, gk));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn passing_checks_pass_at_lower_precision(p in prop::sample::select(primes_in(5, 80)), n in 3u32..5) {
        prop_assume!(p % 3 == 2);
        let hi = check_prop_equivalence(&make_context(p, n, true).unwrap()).unwrap();
        prop_assert!(hi.pass);
        let lo = check_prop_equivalence(&make_context(p, n - 1, true).unwrap()).unwrap();
        prop_assert!(lo.pass);
    }
}
