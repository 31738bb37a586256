//! Greene's hypergeometric functions over F_p with all upper parameters
//! quadratic and all lower parameters trivial.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::characters::{binomial, char_eval, legendre, legendre_table};
use crate::error::{Error, Result};
use crate::residue::{PPowerRational, PrimeContext, ScaledResidue};
use crate::verify::{two_squares, TwoSquares};

fn nonzero(ctx: &PrimeContext, x: i64) -> Result<u64> {
    match ctx.fp(x) {
        0 => Err(Error::ZeroArgument),
        v => Ok(v),
    }
}

/// `phi(-1)/p * sum_y phi(y) phi(1-y) phi(1-xy)`.
pub fn f21(ctx: &PrimeContext, x: i64) -> Result<PPowerRational> {
    let x = nonzero(ctx, x)?;
    let p = ctx.p();
    let leg = legendre_table(ctx);
    let mut s = 0i64;
    for y in 2..p {
        let w = leg[y as usize] * leg[(p + 1 - y) as usize];
        s += (w * leg[((p + 1 - x * y % p) % p) as usize]) as i64;
    }
    Ok(PPowerRational::new(p, legendre(ctx, -1) * s, 1))
}

/// `1/p^2 * sum_{y,z} phi(y) phi(1-y) phi(z) phi(1-z) phi(1-xyz)`.
pub fn f32(ctx: &PrimeContext, x: i64) -> Result<PPowerRational> {
    let x = nonzero(ctx, x)?;
    let p = ctx.p();
    let leg = legendre_table(ctx);
    let w: Vec<i64> = (0..p).map(|y| (leg[y as usize] * leg[((p + 1 - y) % p) as usize]) as i64).collect();
    let s: i64 = (2..p)
        .into_par_iter()
        .map(|y| {
            let xy = x * y % p;
            let inner: i64 = (2..p).map(|z| w[z as usize] * leg[((p + 1 - xy * z % p) % p) as usize] as i64).sum();
            w[y as usize] * inner
        })
        .sum();
    Ok(PPowerRational::new(p, s, 2))
}

/// `_{n+1}F_n(x)` from its definition as `p/(p-1)` times a sum of binomial
/// products over all characters.
pub fn greene_f(ctx: &PrimeContext, n: u32, x: i64) -> Result<ScaledResidue> {
    if !(1..=4).contains(&n) {
        return Err(Error::Unsupported(n));
    }
    nonzero(ctx, x)?;
    let phi = ctx.phi();
    let mut terms = Vec::with_capacity(ctx.p() as usize - 1);
    for e in 0..ctx.p() as i64 - 1 {
        let chi = ctx.character(e);
        let b = binomial(ctx, phi * chi, chi);
        let mut t = ctx.scaled_from_residue(char_eval(ctx, chi, x));
        for _ in 0..=n {
            t = ctx.scaled_mul(t, b);
        }
        terms.push(t);
    }
    let s = ctx.scaled_sum(terms)?;
    let scale = ctx.mod_inverse(ctx.residue(ctx.p() - 1))?;
    Ok(ctx.scaled_mul(ctx.scaled_mul_residue(s, scale), ctx.scaled_p_pow(1)))
}

/// `p^3 * 4F3(1)` as an exact integer, lifted from the p-adic value.
pub fn p3_f43_one(ctx: &PrimeContext) -> Result<BigInt> {
    let v = ctx.scaled_mul(greene_f(ctx, 3, 1)?, ctx.scaled_p_pow(3));
    let p = ctx.p() as f64;
    // |p^3 4F3(1)| <= 2 p^{3/2} + p
    let bound = BigInt::from((2.0 * p.powf(1.5) + p).ceil() as u64 + 1);
    ctx.scaled_lift_integer(v, &bound)
}

/// The two-squares pair of `p = 1 mod 4` and the sign `s` with
/// `2F1(1/2) = s * 2x / p`, read off the character sum itself.
///
/// With `x, y > 0` the sign equals `phi(2) (-1)^((x+y+1)/2)`; at `-1` and `2`
/// no `phi(2)` appears.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecialValueConvention {
    pub squares: TwoSquares,
    pub sign: i64,
}

pub fn special_value_convention(ctx: &PrimeContext) -> Result<SpecialValueConvention> {
    let p = ctx.p();
    let squares = two_squares(p)?;
    let half = p.div_ceil(2) as i64;
    let v = f21(ctx, half)?;
    let target = PPowerRational::new(p, 2 * squares.x as i64, 1);
    let sign = if v == target {
        1
    } else if v == -&target {
        -1
    } else {
        return Err(Error::BadArgument(format!("2F1(1/2) = {v} is not of the form +-2x/p")));
    };
    Ok(SpecialValueConvention { squares, sign })
}

/// `(-1)^((x+y+1)/2)`
pub fn two_squares_sign(s: TwoSquares) -> i64 {
    if (s.x + s.y).div_ceil(2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `3F2(1/(1-t^2)) = phi(t^2-1) (-1/p + 2F1((1-t)/2)^2)`.
pub fn evans_greene_check(ctx: &PrimeContext, t: i64) -> Result<bool> {
    let p = ctx.p() as i64;
    let t = t.rem_euclid(p);
    if t == 0 || t == 1 || t == p - 1 {
        return Err(Error::BadArgument(format!("t = {t} must avoid 0 and +-1")));
    }
    let inv = |v: i64| ctx.fp_inv(ctx.fp(v)).map(|u| u as i64);
    let lhs = f32(ctx, inv(1 - t * t)?)?;
    let f = f21(ctx, ctx.fp((1 - t) * inv(2)?) as i64)?;
    let inner = &(&f * &f) - &PPowerRational::new(ctx.p(), 1, 1);
    let rhs = inner.times(legendre(ctx, t * t - 1));
    Ok(lhs == rhs)
}
