//! Kloosterman sums, their quadratic-twisted moments and the fourth twisted
//! sheaf sum, exactly through Legendre sums and approximately through the
//! Frobenius roots.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{legendre, legendre_table};
use crate::error::{Error, Result};
use crate::residue::{PPowerRational, PrimeContext};

/// `cos(2 pi k / p)` for `k` in `0..p`, plus inverses mod p.
pub struct CosTable {
    p: u64,
    cos: Vec<f64>,
    inv: Vec<u64>,
}

impl CosTable {
    pub fn new(ctx: &PrimeContext) -> Self {
        let p = ctx.p();
        let cos = (0..p).map(|k| (TAU * k as f64 / p as f64).cos()).collect();
        let inv = (0..p).map(|x| if x == 0 { 0 } else { ctx.fp_inv(x).unwrap() }).collect();
        CosTable { p, cos, inv }
    }

    /// `K(a) = sum over x != 0 of cos(2 pi (x + a/x) / p)`.
    pub fn kloosterman(&self, a: i64) -> f64 {
        let p = self.p;
        let a = a.rem_euclid(p as i64) as u64;
        (1..p).map(|x| self.cos[((x + a * self.inv[x as usize]) % p) as usize]).sum()
    }
}

pub fn kloosterman_float(ctx: &PrimeContext, a: i64) -> f64 {
    CosTable::new(ctx).kloosterman(a)
}

/// The roots `g(a), h(a)` of `X^2 + K(a) X + p`.
#[derive(Clone, Copy, Debug)]
pub struct KloostermanRoots {
    pub g: Complex64,
    pub h: Complex64,
}

impl KloostermanRoots {
    pub fn new(k: f64, p: u64) -> Self {
        let disc = Complex64::new(k * k - 4.0 * p as f64, 0.0).sqrt();
        KloostermanRoots { g: (-k + disc) / 2.0, h: (-k - disc) / 2.0 }
    }

    /// `g^n + g^(n-1) h + ... + h^n`.
    pub fn symmetric_power(&self, n: u32) -> Complex64 {
        (0..=n).map(|i| self.g.powu(i) * self.h.powu(n - i)).sum()
    }
}

fn legendre_sum_moment(ctx: &PrimeContext, m: u32) -> i64 {
    let p = ctx.p();
    let leg = legendre_table(ctx);
    let inv: Vec<u64> = (0..p).map(|x| if x == 0 { 0 } else { ctx.fp_inv(x).unwrap() }).collect();
    let at = |s: u64, t: u64| (leg[((s + 1) % p) as usize] * leg[((t + 1) % p) as usize]) as i64;
    match m {
        1 => (1..p).map(|x| at(x, inv[x as usize])).sum(),
        2 => (1..p)
            .into_par_iter()
            .map(|x| (1..p).map(|y| at((x + y) % p, (inv[x as usize] + inv[y as usize]) % p)).sum::<i64>())
            .sum(),
        3 => {
            // Tally (x1 + x2, 1/x1 + 1/x2) first; the triple sum then runs over the tally.
            let mut pairs = vec![0i64; (p * p) as usize];
            for x in 1..p {
                for y in 1..p {
                    pairs[(((x + y) % p) * p + (inv[x as usize] + inv[y as usize]) % p) as usize] += 1;
                }
            }
            (1..p)
                .into_par_iter()
                .map(|z| {
                    let iz = inv[z as usize];
                    let mut acc = 0i64;
                    for s in 0..p {
                        let ls = leg[((s + z + 1) % p) as usize] as i64;
                        if ls == 0 {
                            continue;
                        }
                        let row = &pairs[(s * p) as usize..((s + 1) * p) as usize];
                        let mut inner = 0i64;
                        for (t, &c) in row.iter().enumerate() {
                            if c != 0 {
                                inner += c * leg[((t as u64 + iz + 1) % p) as usize] as i64;
                            }
                        }
                        acc += ls * inner;
                    }
                    acc
                })
                .sum()
        }
        _ => unreachable!(),
    }
}

/// `S(n, phi) = sum_a phi(a) K(a)^n`, an exact integer, via
/// `S(m+1, phi) = p phi(-1) sum phi(x_1+...+x_m+1) phi(1/x_1+...+1/x_m+1)`.
pub fn twisted_moment(ctx: &PrimeContext, n: u32) -> Result<PPowerRational> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(n));
    }
    let p = ctx.p() as i64;
    let s = legendre_sum_moment(ctx, n - 1);
    Ok(PPowerRational::from_integer(ctx.p(), p * legendre(ctx, -1) * s))
}

/// `F(a) = sum_{x,y} phi(x+y+a+1) phi(1/x+1/y+1/a+1)`.
#[allow(non_snake_case)]
pub fn F_of(ctx: &PrimeContext, a: i64) -> Result<PPowerRational> {
    let p = ctx.p();
    let a = ctx.fp(a);
    if a == 0 {
        return Err(Error::ZeroArgument);
    }
    let leg = legendre_table(ctx);
    let inv: Vec<u64> = (0..p).map(|x| if x == 0 { 0 } else { ctx.fp_inv(x).unwrap() }).collect();
    let ia = inv[a as usize];
    let s: i64 = (1..p)
        .map(|x| {
            (1..p)
                .map(|y| {
                    let u = (x + y + a + 1) % p;
                    let v = (inv[x as usize] + inv[y as usize] + ia + 1) % p;
                    (leg[u as usize] * leg[v as usize]) as i64
                })
                .sum::<i64>()
        })
        .sum();
    Ok(PPowerRational::from_integer(p, s))
}

/// `T_{4,phi} = S(4, phi) - 3p S(2, phi)`.
pub fn sheaf_sum_twisted(ctx: &PrimeContext) -> PPowerRational {
    let s4 = twisted_moment(ctx, 4).expect("n = 4 is supported");
    let s2 = twisted_moment(ctx, 2).expect("n = 2 is supported");
    &s4 - &s2.times(3 * ctx.p() as i64)
}

/// Floating-point `T_{n,phi}` (or the untwisted sum over `a != 0`) from the
/// Frobenius roots, rounded to the nearest integer.
pub fn sheaf_sum_float(ctx: &PrimeContext, n: u32, twisted: bool) -> Result<f64> {
    if n > 8 {
        return Err(Error::Unsupported(n));
    }
    let p = ctx.p();
    let table = CosTable::new(ctx);
    let total: Complex64 = (1..p as i64)
        .map(|a| {
            let w = if twisted { legendre(ctx, a) as f64 } else { 1.0 };
            KloostermanRoots::new(table.kloosterman(a), p).symmetric_power(n) * w
        })
        .sum();
    let rounded = total.re.round();
    let residual = (total.re - rounded).abs().max(total.im.abs());
    if residual > 1e-3 {
        return Err(Error::AccuracyBudget(format!("{residual:e}")));
    }
    Ok(rounded)
}

/// The unrounded twisted sum and its distance from the nearest integer.
pub fn sheaf_sum_float_residual(ctx: &PrimeContext, n: u32) -> (f64, f64) {
    let p = ctx.p();
    let table = CosTable::new(ctx);
    let total: Complex64 = (1..p as i64)
        .map(|a| KloostermanRoots::new(table.kloosterman(a), p).symmetric_power(n) * legendre(ctx, a) as f64)
        .sum();
    (total.re, (total.re - total.re.round()).abs().max(total.im.abs()))
}
