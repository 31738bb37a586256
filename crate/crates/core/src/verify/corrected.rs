//! Forms of the central identities that hold numerically, checked against an
//! independent complex evaluation of the central Gauss-sum combination.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::checks::{fourier_rational_part, max_precision};
use crate::characters::legendre;
use crate::finite_hypergeom::{f21, f32};
use crate::gauss::kloosterman_gauss_sum_exact;
use crate::kloosterman::sheaf_sum_twisted;
use crate::modforms::{a_p, b_p, f1_coefficients};
use crate::padic_hypergeom::{c_numerator, g1212_thm2, g44_half, g44_thm1, sextic_twist};
use crate::residue::{make_context, primes_in, primitive_root, PrimeContext, ScaledResidue};

/// `sum_a g(phi w^a)^2 g(w_bar^a)^4 g(phi w^2a) / g(phi) * w_bar^a(4)` with
/// complex Gauss sums and `w(g^k) = exp(2 pi i k / (p-1))`.
fn complex_central_sum(p: u64) -> i64 {
    let q = p - 1;
    let g = primitive_root(p);
    let mut dlog = vec![0u64; p as usize];
    let mut x = 1u64;
    for k in 0..q {
        dlog[x as usize] = k;
        x = x * g % p;
    }
    let zeta: Vec<Complex64> = (0..p).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / p as f64)).collect();
    let root: Vec<Complex64> = (0..q).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / q as f64)).collect();
    // g(w^e)
    let gauss: Vec<Complex64> = (0..q).map(|e| (1..p).map(|x| root[((e * dlog[x as usize]) % q) as usize] * zeta[x as usize]).sum()).collect();
    let h = q / 2;
    let gs = |e: i64| gauss[e.rem_euclid(q as i64) as usize];
    let total: Complex64 = (0..q as i64)
        .map(|a| {
            let num = gs(h as i64 + a).powu(2) * gs(-a).powu(4) * gs(h as i64 + 2 * a);
            let twist = root[((q as i64 - a).rem_euclid(q as i64) as u64 * dlog[4 % p as usize] % q) as usize];
            num / gs(h as i64) * twist
        })
        .sum();
    assert!(total.im.abs() < 1e-3 * (p as f64).powi(4), "p={p}: {total}");
    total.re.round() as i64
}

fn exact_b(p: u64) -> BigInt {
    kloosterman_gauss_sum_exact(&PrimeContext::new(p, max_precision(p)).unwrap()).unwrap()
}

fn t_over_p(ctx: &PrimeContext) -> BigRational {
    BigRational::new(sheaf_sum_twisted(ctx).to_integer().unwrap(), BigInt::from(ctx.p()))
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `B'/(p(p-1))` recovered from `T` once the special values are substituted.
fn central_share(ctx: &PrimeContext) -> BigRational {
    t_over_p(ctx) + fourier_rational_part(ctx, false) + BigRational::new(BigInt::from(1), BigInt::from(ctx.p()))
}

#[test]
fn complex_oracle_agrees_with_the_jacobi_route() {
    assert_eq!(complex_central_sum(7), -714);
    for p in primes_in(5, 60) {
        assert_eq!(BigInt::from(complex_central_sum(p)), exact_b(p), "p={p}");
    }
}

#[test]
fn master_identity_with_p_times_p_minus_one() {
    // T/p = -1 - p phi(2) + p^2 phi(2) 2F1(1/2)^2 + p^2 2F1(1)^2 - p^2 phi(-2) 3F2(1) + B'/(p(p-1))
    for p in primes_in(5, 200) {
        let ctx = make_context(p, 1, false).unwrap();
        let pi = p as i64;
        let (phi2, phim2) = (legendre(&ctx, 2), legendre(&ctx, -2));
        let half = f21(&ctx, p.div_ceil(2) as i64).unwrap().to_ratio();
        let one21 = f21(&ctx, 1).unwrap().to_ratio();
        let one32 = f32(&ctx, 1).unwrap().to_ratio();
        let p2 = int(pi * pi);
        let rhs = int(-1) - int(pi * phi2) + &p2 * &half * &half * int(phi2) + &p2 * &one21 * &one21
            - &p2 * one32 * int(phim2)
            + BigRational::new(exact_b(p), BigInt::from(pi * (pi - 1)));
        assert_eq!(t_over_p(&ctx), rhs, "p={p}");
    }
}

fn congruent(ctx: &PrimeContext, a: ScaledResidue, b: ScaledResidue) -> bool {
    ctx.scaled_congruent(a, b, ctx.precision() as i64).unwrap()
}

/// `phi(-1) p^3 psi_6_bar(2) psi_3(4) C* 4G4`, with `C*` the Gamma product
/// without the `1/Gamma(1/2)`.
fn four_slot_share(ctx: &PrimeContext) -> ScaledResidue {
    let unit = ctx.mul(c_numerator(ctx).unwrap(), sextic_twist(ctx).unwrap());
    let unit = ctx.mul(unit, ctx.from_i64(legendre(ctx, -1)));
    ctx.scaled_mul(ctx.scaled_mul_residue(g44_thm1(ctx).unwrap(), unit), ctx.scaled_p_pow(3))
}

#[test]
fn four_slot_proposition_without_gamma_half() {
    // B' = phi(-1) p^4 (p-1) psi_6_bar(2) psi_3(4) C* 4G4
    for p in primes_in(7, 300).into_iter().filter(|p| p % 3 == 1) {
        let ctx = make_context(p, 2, true).unwrap();
        let b = ctx.scaled_from_bigint(&exact_b(p));
        let rhs = ctx.scaled_mul(four_slot_share(&ctx), ctx.scaled_from_i64(p as i64 * (p as i64 - 1)));
        assert!(congruent(&ctx, b, rhs), "p={p}");
    }
}

#[test]
fn theorems_in_corrected_form() {
    // T/p + p phi(2) [...] = phi(-1) p^3 ... C* 4G4 (p = 1 mod 3) or -phi(-1) 12G12 (p = 2 mod 3),
    // and a(p) = -T/p, b(p) = phi(-1) a(p).
    let series = f1_coefficients(300);
    for p in primes_in(13, 300) {
        for n in if p <= 100 { vec![2, 3] } else { vec![2] } {
            let ctx = make_context(p, n, true).unwrap();
            let share = ctx.scaled_from_ratio(&central_share(&ctx)).unwrap();
            let value = if p % 3 == 1 {
                four_slot_share(&ctx)
            } else {
                ctx.scaled_mul_residue(g1212_thm2(&ctx).unwrap(), ctx.from_i64(-legendre(&ctx, -1)))
            };
            assert!(congruent(&ctx, share, value), "p={p} N={n}");
            let a = BigRational::from_integer(a_p(&series, p).unwrap());
            assert_eq!(a, -t_over_p(&ctx));
            assert_eq!(b_p(&series, p).unwrap(), a_p(&series, p).unwrap() * legendre(&ctx, -1));
        }
    }
}

#[test]
fn intro_identity_without_p_sixth() {
    for p in primes_in(5, 300) {
        let ctx = make_context(p, 2, true).unwrap();
        let rhs = ctx.scaled_from_ratio(&(int(p as i64) - t_over_p(&ctx))).unwrap();
        assert!(congruent(&ctx, g44_half(&ctx).unwrap(), rhs), "p={p}");
    }
    let c5 = make_context(5, 2, true).unwrap();
    assert!(congruent(&c5, g44_half(&c5).unwrap(), c5.scaled_from_i64(3)));
    let c7 = make_context(7, 2, true).unwrap();
    assert!(congruent(&c7, g44_half(&c7).unwrap(), c7.scaled_from_i64(31)));
}
