//! McCarthy's p-adic hypergeometric function `nGn[a; b | t]` mod p^N and the
//! two parameter families attached to the central Gauss sum.

use rayon::prelude::*;

use crate::characters::char_eval;
use crate::error::{Error, Result};
use crate::gamma::{floor, fract, gamma_at, rational, rational_residue, RationalArg};
use crate::residue::{PrimeContext, Residue, ScaledResidue};

/// Upper parameters `a_k`, lower parameters `b_k` and the argument `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GParams {
    pub upper: Vec<RationalArg>,
    pub lower: Vec<RationalArg>,
    pub t: i64,
}

impl GParams {
    pub fn new(upper: Vec<RationalArg>, lower: Vec<RationalArg>, t: i64) -> Result<Self> {
        if upper.len() != lower.len() || upper.is_empty() {
            return Err(Error::BadArgument("need the same positive number of upper and lower parameters".into()));
        }
        Ok(GParams { upper, lower, t })
    }

    pub fn n(&self) -> usize {
        self.upper.len()
    }
}

/// One summand: its index, the total exponent of `-p` and its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GTerm {
    pub a: u64,
    pub exponent: i64,
    pub value: ScaledResidue,
}

/// Exponent of `-p` contributed by one slot at index `a`; always in `{-1, 0, 1}`.
pub fn slot_exponent(upper: RationalArg, lower: RationalArg, a: u64, p: u64) -> i64 {
    let x = rational(a as i64, p as i64 - 1);
    -floor(fract(upper) - x) - floor(fract(-lower) + x)
}

pub fn g_function_terms(ctx: &PrimeContext, params: &GParams) -> Result<Vec<GTerm>> {
    if ctx.gamma_table().is_none() {
        return Err(Error::GammaTableMissing(ctx.p()));
    }
    for &r in params.upper.iter().chain(&params.lower) {
        rational_residue(ctx, r)?;
    }
    let p = ctx.p();
    let q = p as i64 - 1;
    let n = params.n() as u64;
    // Gamma(<a_k>) Gamma(<-b_k>) is the same for every a.
    let mut base = ctx.residue(1);
    for (&ak, &bk) in params.upper.iter().zip(&params.lower) {
        base = ctx.mul(base, ctx.mul(gamma_at(ctx, fract(ak))?, gamma_at(ctx, fract(-bk))?));
    }
    let base_inv = ctx.mod_inverse(base)?;
    (0..p - 1)
        .into_par_iter()
        .map(|a| {
            let x = rational(a as i64, q);
            let mut unit = base_inv;
            let mut exponent = 0i64;
            for (&ak, &bk) in params.upper.iter().zip(&params.lower) {
                exponent += slot_exponent(ak, bk, a, p);
                unit = ctx.mul(unit, gamma_at(ctx, fract(ak - x))?);
                unit = ctx.mul(unit, gamma_at(ctx, fract(-bk + x))?);
            }
            unit = ctx.mul(unit, char_eval(ctx, ctx.character(-(a as i64)), params.t));
            // (-1)^{an} (-1)^{exponent}
            if (a * n + exponent.rem_euclid(2) as u64) % 2 == 1 {
                unit = ctx.neg(unit);
            }
            let value = ctx.scaled_mul(ctx.scaled_from_residue(unit), ctx.scaled_p_pow(exponent));
            Ok(GTerm { a, exponent, value })
        })
        .collect()
}

/// `-1/(p-1) * sum_a (-1)^{an} w_bar^a(t) prod_k (-p)^{e_k(a)} Gamma ratios`.
pub fn g_function(ctx: &PrimeContext, params: &GParams) -> Result<ScaledResidue> {
    let terms = g_function_terms(ctx, params)?;
    let s = ctx.scaled_sum(terms.into_iter().map(|t| t.value))?;
    let scale = ctx.neg(ctx.mod_inverse(ctx.residue(ctx.p() - 1))?);
    Ok(ctx.scaled_mul_residue(s, scale))
}

fn r(n: i64, d: i64) -> RationalArg {
    rational(n, d)
}

/// `4G4[5/6, 5/6, 1/12, 7/12; 1/3, 1/3, 1/3, 1/3 | 1]`.
pub fn g44_params() -> GParams {
    GParams { upper: vec![r(5, 6), r(5, 6), r(1, 12), r(7, 12)], lower: vec![r(1, 3); 4], t: 1 }
}

/// The twelve-slot family with upper `0, 1/3, 2/3` repeated four times.
pub fn g1212_params() -> GParams {
    let upper = (0..12).map(|k| r(k % 3, 3)).collect();
    let lower = vec![r(1, 6), r(1, 2), r(5, 6), r(1, 12), r(1, 6), r(1, 4), r(5, 12), r(1, 2), r(7, 12), r(3, 4), r(5, 6), r(11, 12)];
    GParams { upper, lower, t: 1 }
}

/// `4G4[1/2, 1/2, 1/2, 1/2; 0, 0, 0, 0 | 1]`.
pub fn g44_half_params() -> GParams {
    GParams { upper: vec![r(1, 2); 4], lower: vec![r(0, 1); 4], t: 1 }
}

fn require_p5(ctx: &PrimeContext) -> Result<()> {
    if ctx.p() < 5 {
        return Err(Error::BadArgument(format!("p = {} must be at least 5", ctx.p())));
    }
    Ok(())
}

pub fn g44_thm1(ctx: &PrimeContext) -> Result<ScaledResidue> {
    require_p5(ctx)?;
    g_function(ctx, &g44_params())
}

pub fn g1212_thm2(ctx: &PrimeContext) -> Result<ScaledResidue> {
    require_p5(ctx)?;
    g_function(ctx, &g1212_params())
}

pub fn g44_half(ctx: &PrimeContext) -> Result<ScaledResidue> {
    require_p5(ctx)?;
    g_function(ctx, &g44_half_params())
}

/// `Gamma(2/3)^4 Gamma(5/6)^2 Gamma(1/12) Gamma(7/12)`.
pub fn c_numerator(ctx: &PrimeContext) -> Result<Residue> {
    require_p5(ctx)?;
    let g = |n, d| gamma_at(ctx, r(n, d));
    let g23 = g(2, 3)?;
    let g56 = g(5, 6)?;
    let mut c = ctx.mod_pow(g23, 4);
    c = ctx.mul(c, ctx.mul(g56, g56));
    Ok(ctx.mul(c, ctx.mul(g(1, 12)?, g(7, 12)?)))
}

/// `C = Gamma(2/3)^4 Gamma(5/6)^2 Gamma(1/12) Gamma(7/12) / Gamma(1/2)`.
pub fn c_constant(ctx: &PrimeContext) -> Result<Residue> {
    let num = c_numerator(ctx)?;
    Ok(ctx.mul(num, ctx.mod_inverse(gamma_at(ctx, r(1, 2))?)?))
}

/// `psi_6_bar(2) psi_3(4)`, defined when `6 | p-1`.
pub fn sextic_twist(ctx: &PrimeContext) -> Result<Residue> {
    let psi6 = ctx.psi6()?;
    let psi3 = ctx.psi3()?;
    Ok(ctx.mul(char_eval(ctx, psi6.inverse(), 2), char_eval(ctx, psi3, 4)))
}
