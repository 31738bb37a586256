//! Morita's p-adic Gamma function, table driven, plus the reflection and
//! multiplication formulas and two floor-sum identities.

use num_integer::Integer;
use num_rational::Ratio;

use crate::characters::char_eval;
use crate::error::{Error, Result};
use crate::residue::{inv_mod, mul_mod, PrimeContext, Residue};

/// `Gamma_p(k) mod p^N` for every `0 <= k < p^N`.
pub struct GammaTable {
    modulus: u64,
    values: Storage,
}

enum Storage {
    Narrow(Vec<u32>),
    Wide(Vec<u64>),
}

impl GammaTable {
    /// One sweep of `Gamma(k+1) = -k Gamma(k)` (or `-Gamma(k)` when `p | k`).
    pub fn build(p: u64, modulus: u64) -> Self {
        let len = modulus as usize;
        let mut next = {
            let mut g = 1u64;
            move |k: u64| {
                let cur = g;
                g = if k.is_multiple_of(p) { modulus - cur } else { mul_mod(modulus - k % modulus, cur, modulus) };
                if g == modulus {
                    g = 0;
                }
                cur
            }
        };
        let values = if modulus <= u32::MAX as u64 {
            Storage::Narrow((0..len as u64).map(|k| next(k) as u32).collect())
        } else {
            Storage::Wide((0..len as u64).map(&mut next).collect())
        };
        GammaTable { modulus, values }
    }

    pub fn len(&self) -> usize {
        self.modulus as usize
    }

    pub fn is_empty(&self) -> bool {
        self.modulus == 0
    }

    pub fn get(&self, k: u64) -> Residue {
        let k = (k % self.modulus) as usize;
        Residue(match &self.values {
            Storage::Narrow(v) => v[k] as u64,
            Storage::Wide(v) => v[k],
        })
    }
}

/// A rational number with denominator prime to p.
pub type RationalArg = Ratio<i64>;

pub fn rational(num: i64, den: i64) -> RationalArg {
    Ratio::new(num, den)
}

/// Fractional part in `[0, 1)`.
pub fn fract(x: RationalArg) -> RationalArg {
    x - x.floor()
}

pub fn floor(x: RationalArg) -> i64 {
    x.floor().to_integer()
}

/// `x mod p^N` for a rational with denominator prime to p.
pub fn rational_residue(ctx: &PrimeContext, x: RationalArg) -> Result<Residue> {
    let (num, den) = (*x.numer(), *x.denom());
    if den.rem_euclid(ctx.p() as i64) == 0 {
        return Err(Error::BadDenominator { num, den });
    }
    let m = ctx.modulus();
    let inv = inv_mod(den.rem_euclid(m as i64) as u64, m).expect("denominator prime to p");
    Ok(Residue(mul_mod(num.rem_euclid(m as i64) as u64, inv, m)))
}

/// The representative of `x mod p` in `{1, ..., p}`.
pub fn a0(ctx: &PrimeContext, x: RationalArg) -> Result<u64> {
    let r = rational_residue(ctx, x)?.value() % ctx.p();
    Ok(if r == 0 { ctx.p() } else { r })
}

pub fn gamma_at(ctx: &PrimeContext, x: RationalArg) -> Result<Residue> {
    let table = ctx.gamma_table().ok_or(Error::GammaTableMissing(ctx.p()))?;
    Ok(table.get(rational_residue(ctx, x)?.value()))
}

/// `Gamma_p(x) Gamma_p(1-x) = (-1)^{a_0(x)}`.
pub fn reflection_check(ctx: &PrimeContext, x: RationalArg) -> Result<bool> {
    let lhs = ctx.mul(gamma_at(ctx, x)?, gamma_at(ctx, RationalArg::from_integer(1) - x)?);
    let rhs = if a0(ctx, x)? % 2 == 0 { ctx.residue(1) } else { ctx.from_i64(-1) };
    Ok(lhs == rhs)
}

/// Gauss multiplication formula at `x = r/(p-1)`.
pub fn multiplication_check(ctx: &PrimeContext, m: u64, r: u64) -> Result<bool> {
    let p = ctx.p();
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::BadArgument(format!("multiplier {m} must be prime to {p}")));
    }
    if r > p - 1 {
        return Err(Error::BadArgument(format!("r = {r} exceeds p - 1")));
    }
    let x = rational(r as i64, p as i64 - 1);
    let m_i = m as i64;
    let mut lhs = ctx.residue(1);
    for h in 0..m_i {
        lhs = ctx.mul(lhs, gamma_at(ctx, (x + h) / m_i)?);
    }
    // omega^{(1-p)(1-x)}(m) = omega^{r-(p-1)}(m) = omega^r(m).
    let mut rhs = ctx.mul(char_eval(ctx, ctx.character(r as i64), m_i), gamma_at(ctx, x)?);
    for h in 1..m_i {
        rhs = ctx.mul(rhs, gamma_at(ctx, rational(h, m_i))?);
    }
    Ok(lhs == rhs)
}

/// Both product identities relating `Gamma_p(<ta/(p-1)>)` to shifted
/// products over `h/t`.
pub fn gamma_product_check(ctx: &PrimeContext, t: u64, a: u64) -> Result<bool> {
    let p = ctx.p();
    if t == 0 || t.is_multiple_of(p) || a > p - 2 {
        return Err(Error::BadArgument(format!("need 0 <= a <= p-2 and p not dividing t (t={t}, a={a})")));
    }
    let (ti, ai, q) = (t as i64, a as i64, p as i64 - 1);
    let x = rational(ai, q);
    let mut base = ctx.residue(1);
    for h in 1..ti {
        base = ctx.mul(base, gamma_at(ctx, fract(rational(h, ti)))?);
    }
    let omega_t = ctx.teichmuller(t)?;

    let w = ctx.mod_pow(omega_t, (t * a) % (p - 1));
    let lhs1 = ctx.mul(ctx.mul(w, gamma_at(ctx, fract(rational(ti * ai, q)))?), base);
    let mut rhs1 = ctx.residue(1);
    for h in 0..ti {
        rhs1 = ctx.mul(rhs1, gamma_at(ctx, fract(rational(h, ti) + x))?);
    }

    let w_inv = ctx.mod_pow(omega_t, (p - 1 - (t * a) % (p - 1)) % (p - 1));
    let lhs2 = ctx.mul(ctx.mul(w_inv, gamma_at(ctx, fract(rational(-ti * ai, q)))?), base);
    let mut rhs2 = ctx.residue(1);
    for h in 1..=ti {
        rhs2 = ctx.mul(rhs2, gamma_at(ctx, fract(rational(h, ti) - x))?);
    }
    Ok(lhs1 == rhs1 && lhs2 == rhs2)
}

/// `floor(-da/(p-1)) = -1 + sum_{h=1}^{d} floor(h/d - a/(p-1))`.
///
/// The `h = d` term uses `h/d = 1`; with the fractional part `<d/d> = 0` the
/// identity is off by one for every `a`.
pub fn floor_sum_shifted_down(d: u64, a: u64, p: u64) -> bool {
    let (d, q) = (d as i64, p as i64 - 1);
    let x = rational(a as i64, q);
    let lhs = floor(rational(-d * a as i64, q));
    let rhs = -1 + (1..=d).map(|h| floor(rational(h, d) - x)).sum::<i64>();
    lhs == rhs
}

/// `floor(da/(p-1)) = sum_{h=0}^{d-1} floor(<h/d> + a/(p-1))`.
pub fn floor_sum_shifted_up(d: u64, a: u64, p: u64) -> bool {
    let (d, q) = (d as i64, p as i64 - 1);
    let x = rational(a as i64, q);
    let lhs = floor(rational(d * a as i64, q));
    let rhs = (0..d).map(|h| floor(fract(rational(h, d)) + x)).sum::<i64>();
    lhs == rhs
}

/// Lowest-terms check used by callers that accept raw numerator/denominator pairs.
pub fn checked_rational(ctx: &PrimeContext, num: i64, den: i64) -> Result<RationalArg> {
    if den == 0 {
        return Err(Error::BadArgument("zero denominator".into()));
    }
    let g = num.gcd(&den);
    if (den / g).rem_euclid(ctx.p() as i64) == 0 {
        return Err(Error::BadDenominator { num, den });
    }
    Ok(rational(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::make_context;

    fn direct_gamma(k: u64, p: u64, m: u64) -> u64 {
        // (-1)^k times the product of 0 < j < k with p not dividing j.
        let mut acc = 1u64;
        for j in 1..k {
            if j % p != 0 {
                acc = mul_mod(acc, j % m, m);
            }
        }
        if k % 2 == 1 {
            (m - acc) % m
        } else {
            acc
        }
    }

    #[test]
    fn table_examples() {
        let ctx = make_context(5, 2, true).unwrap();
        let t = ctx.gamma_table().unwrap();
        assert_eq!(t.get(0).value(), 1);
        assert_eq!(ctx.balanced_lift(t.get(1)), -1);
        assert_eq!(ctx.balanced_lift(t.get(3)), -2);
    }

    #[test]
    fn table_matches_defining_product() {
        let ctx = make_context(101, 2, true).unwrap();
        let t = ctx.gamma_table().unwrap();
        let m = ctx.modulus();
        for k in 0..300 {
            assert_eq!(t.get(k).value(), direct_gamma(k, 101, m), "k = {k}");
        }
        for k in 0..m - 1 {
            let (cur, next) = (t.get(k).value(), t.get(k + 1).value());
            let expect = if k % 101 == 0 { (m - cur) % m } else { mul_mod(m - k, cur, m) };
            assert_eq!(next, expect, "k = {k}");
        }
    }

    #[test]
    fn rational_arguments() {
        let ctx = make_context(7, 1, true).unwrap();
        assert_eq!(ctx.balanced_lift(gamma_at(&ctx, rational(1, 1)).unwrap()), -1);
        let h = gamma_at(&ctx, rational(1, 2)).unwrap();
        assert_eq!(ctx.mul(h, h).value(), 1);
        assert_eq!(gamma_at(&ctx, rational(1, 7)), Err(Error::BadDenominator { num: 1, den: 7 }));
        let bare = make_context(7, 1, false).unwrap();
        assert_eq!(gamma_at(&bare, rational(1, 2)), Err(Error::GammaTableMissing(7)));
    }

    #[test]
    fn half_squared_is_minus_phi_minus_one() {
        for &(p, n) in &[(5u64, 3u32), (7, 3), (11, 2), (13, 2), (31, 2)] {
            let ctx = make_context(p, n, true).unwrap();
            let h = gamma_at(&ctx, rational(1, 2)).unwrap();
            let phi_m1 = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(ctx.balanced_lift(ctx.mul(h, h)), -phi_m1);
        }
    }

    #[test]
    fn reflection_exhaustive() {
        for p in crate::residue::primes_in(3, 200) {
            let ctx = make_context(p, 1, true).unwrap();
            for m in 0..(p - 1) as i64 {
                assert!(reflection_check(&ctx, rational(m, p as i64 - 1)).unwrap(), "p={p} m={m}");
            }
        }
        let ctx = make_context(7, 3, true).unwrap();
        assert!(reflection_check(&ctx, rational(1, 2)).unwrap());
        assert!(reflection_check(&ctx, rational(-5, 12)).unwrap());
    }

    #[test]
    fn multiplication_formula() {
        for &(p, n) in &[(5u64, 3u32), (7, 3), (13, 2), (29, 2)] {
            let ctx = make_context(p, n, true).unwrap();
            for m in 2..=6u64 {
                if m % p == 0 {
                    continue;
                }
                for r in 0..p {
                    assert!(multiplication_check(&ctx, m, r).unwrap(), "p={p} m={m} r={r}");
                }
            }
        }
    }

    #[test]
    fn gamma_products() {
        let ctx = make_context(13, 1, true).unwrap();
        assert!(gamma_product_check(&ctx, 2, 1).unwrap());
        for &(p, n) in &[(7u64, 3u32), (13, 2), (17, 2)] {
            let ctx = make_context(p, n, true).unwrap();
            for t in 1..=12u64 {
                if t % p == 0 {
                    continue;
                }
                for a in 0..p - 1 {
                    assert!(gamma_product_check(&ctx, t, a).unwrap(), "p={p} t={t} a={a}");
                }
            }
        }
    }

    #[test]
    fn floor_lemmas_exhaustive() {
        assert!(floor_sum_shifted_down(1, 0, 11) && floor_sum_shifted_up(1, 0, 11));
        assert!(floor_sum_shifted_down(12, 5, 13) && floor_sum_shifted_up(12, 5, 13));
        assert!(floor_sum_shifted_down(3, 5, 7) && floor_sum_shifted_up(3, 5, 7));
        for p in crate::residue::primes_in(3, 100) {
            for d in 1..=12 {
                for a in 0..p - 1 {
                    assert!(floor_sum_shifted_down(d, a, p) && floor_sum_shifted_up(d, a, p));
                }
            }
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(fract(rational(-1, 3)), rational(2, 3));
        assert_eq!(floor(rational(-1, 3)), -1);
        let ctx = make_context(5, 1, true).unwrap();
        assert_eq!(a0(&ctx, rational(5, 1)).unwrap(), 5);
        assert_eq!(a0(&ctx, rational(1, 2)).unwrap(), 3);
        assert!(checked_rational(&ctx, 1, 10).is_err());
        assert_eq!(checked_rational(&ctx, 10, 15).unwrap(), rational(2, 3));
        assert_eq!(checked_rational(&ctx, 10, 20).unwrap(), rational(1, 2));
    }
}
