//! Balanced products of Gauss sums, evaluated without ever representing the
//! uniformizer `pi`: once by rewriting into Jacobi sums and once through the
//! Gross-Koblitz formula.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::characters::{char_eval, jacobi_sum, Character};
use crate::error::{Error, Result};
use crate::gamma::{gamma_at, rational};
use crate::residue::{PrimeContext, Residue, ScaledResidue};

/// `scalar * prod g(num) / prod g(den)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussProduct {
    pub numerator: Vec<Character>,
    pub denominator: Vec<Character>,
    pub scalar: Residue,
}

impl GaussProduct {
    pub fn new(ctx: &PrimeContext, numerator: Vec<Character>, denominator: Vec<Character>) -> Self {
        GaussProduct { numerator, denominator, scalar: ctx.residue(1) }
    }

    pub fn with_scalar(mut self, scalar: Residue) -> Self {
        self.scalar = scalar;
        self
    }

    /// Total exponent of `pi`: each `g(omega_bar^e)` with `0 <= e < p-1` carries `pi^e`.
    pub fn pi_exponent(&self) -> i64 {
        let e = |c: &Character| c.conjugate_exponent() as i64;
        self.numerator.iter().map(e).sum::<i64>() - self.denominator.iter().map(e).sum::<i64>()
    }

    /// The exact p-adic valuation of the product, or `NotBalanced`.
    pub fn valuation(&self, ctx: &PrimeContext) -> Result<i64> {
        let s = self.pi_exponent();
        let q = ctx.p() as i64 - 1;
        if s % q != 0 {
            return Err(Error::NotBalanced(s));
        }
        Ok(s / q)
    }
}

/// One legal rewrite step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rewrite {
    /// `g(eps) = -1`.
    Trivial(usize),
    /// `g(chi) g(chi_bar) = p chi(-1)`.
    Cancel(usize, usize),
    /// `g(A) g(B) = J(A, B) g(AB)` with `AB` nontrivial.
    Contract(usize, usize),
}

fn legal_rewrites(sums: &[Character]) -> Vec<Rewrite> {
    let mut out = Vec::new();
    for (i, c) in sums.iter().enumerate() {
        if c.is_trivial() {
            out.push(Rewrite::Trivial(i));
        }
    }
    for i in 0..sums.len() {
        for j in i + 1..sums.len() {
            let (a, b) = (sums[i], sums[j]);
            if a.is_trivial() || b.is_trivial() {
                continue;
            }
            out.push(if (a * b).is_trivial() { Rewrite::Cancel(i, j) } else { Rewrite::Contract(i, j) });
        }
    }
    out
}

/// Reduce with the default schedule: trivial sums first, then cancellations,
/// then contractions, always taking the earliest applicable pair.
pub fn reduce_gauss_product(ctx: &PrimeContext, prod: &GaussProduct) -> Result<ScaledResidue> {
    reduce_gauss_product_by(ctx, prod, |rewrites| {
        rewrites
            .iter()
            .position(|r| matches!(r, Rewrite::Trivial(_)))
            .or_else(|| rewrites.iter().position(|r| matches!(r, Rewrite::Cancel(..))))
            .unwrap_or(0)
    })
}

/// Reduce, letting `choose` pick which of the legal rewrites to apply next.
pub fn reduce_gauss_product_by<F>(ctx: &PrimeContext, prod: &GaussProduct, mut choose: F) -> Result<ScaledResidue>
where
    F: FnMut(&[Rewrite]) -> usize,
{
    prod.valuation(ctx)?;
    let mut acc = ctx.scaled_from_residue(prod.scalar);
    // 1/g(chi) = g(chi_bar) / (p chi(-1)); 1/g(eps) = -1 = g(eps).
    let mut sums = prod.numerator.clone();
    for &c in &prod.denominator {
        sums.push(c.inverse());
        if !c.is_trivial() {
            acc = ctx.scaled_mul(acc, ctx.scaled_p_pow(-1));
            acc = ctx.scaled_mul_residue(acc, char_eval(ctx, c, -1));
        }
    }
    let minus_one = ctx.scaled_from_i64(-1);
    while !sums.is_empty() {
        let rewrites = legal_rewrites(&sums);
        if rewrites.is_empty() {
            return Err(Error::ReductionStuck(sums.len()));
        }
        let pick = choose(&rewrites).min(rewrites.len() - 1);
        match rewrites[pick] {
            Rewrite::Trivial(i) => {
                sums.swap_remove(i);
                acc = ctx.scaled_mul(acc, minus_one);
            }
            Rewrite::Cancel(i, j) => {
                let c = sums[i];
                sums.swap_remove(j);
                sums.swap_remove(i);
                acc = ctx.scaled_mul(acc, ctx.scaled_p_pow(1));
                acc = ctx.scaled_mul_residue(acc, char_eval(ctx, c, -1));
            }
            Rewrite::Contract(i, j) => {
                let (a, b) = (sums[i], sums[j]);
                acc = ctx.scaled_mul_residue(acc, jacobi_sum(ctx, a, b));
                sums[i] = a * b;
                sums.swap_remove(j);
            }
        }
    }
    Ok(acc)
}

/// `g(omega_bar^e) = -pi^e Gamma_p(e/(p-1))` for `0 <= e < p-1`, multiplied
/// out with `pi^(p-1) = -p`.
pub fn gross_koblitz_product(ctx: &PrimeContext, prod: &GaussProduct) -> Result<ScaledResidue> {
    let v = prod.valuation(ctx)?;
    let q = ctx.p() as i64 - 1;
    let mut unit = prod.scalar;
    for c in &prod.numerator {
        let g = gamma_at(ctx, rational(c.conjugate_exponent() as i64, q))?;
        unit = ctx.neg(ctx.mul(unit, g));
    }
    for c in &prod.denominator {
        let g = gamma_at(ctx, rational(c.conjugate_exponent() as i64, q))?;
        unit = ctx.neg(ctx.mul(unit, ctx.mod_inverse(g)?));
    }
    // (-p)^v
    if v % 2 != 0 {
        unit = ctx.neg(unit);
    }
    Ok(ctx.scaled_mul(ctx.scaled_from_residue(unit), ctx.scaled_p_pow(v)))
}

/// Characters of the `a`-th summand of the central sum: numerator
/// `phi w^a` (twice), `w_bar^a` (four times), `phi w^(2a)`; denominator `phi`;
/// twist `w_bar^a(4)`.
pub fn central_term_product(ctx: &PrimeContext, a: u64) -> GaussProduct {
    let (phi, w) = (ctx.phi(), ctx.omega());
    let wa = w.pow(a as i64);
    let num = vec![phi * wa, phi * wa, wa.inverse(), wa.inverse(), wa.inverse(), wa.inverse(), phi * wa.pow(2)];
    GaussProduct::new(ctx, num, vec![phi]).with_scalar(char_eval(ctx, wa.inverse(), 4))
}

/// Jacobi-route value of one summand, using the fixed schedule.
pub fn central_term(ctx: &PrimeContext, a: u64) -> ScaledResidue {
    let p = ctx.p();
    let q = p - 1;
    let (phi, w) = (ctx.phi(), ctx.omega());
    let phi_m1 = char_eval(ctx, phi, -1);
    let chi = w.pow(a as i64).inverse();
    let twist = char_eval(ctx, chi, 4);
    let p1 = ctx.scaled_p_pow(1);
    if a == 0 {
        return ctx.scaled_mul_residue(p1, phi_m1);
    }
    if 2 * a == q {
        return ctx.scaled_p_pow(2);
    }
    let pw = phi * w.pow(a as i64);
    let j1 = jacobi_sum(ctx, pw, pw);
    let j2 = jacobi_sum(ctx, chi, chi);
    let mut factors = vec![j1, j2, j2, twist];
    if q.is_multiple_of(4) && (4 * a == q || 4 * a == 3 * q) {
        // g(phi w^2a) = g(eps) = -1 and both squares contract onto g(phi).
        factors.push(ctx.neg(phi_m1));
    } else {
        factors.push(jacobi_sum(ctx, phi * w.pow(2 * a as i64), chi.pow(2)));
    }
    factors.into_iter().fold(p1, |acc, f| ctx.scaled_mul_residue(acc, f))
}

/// The central sum over `a = 0..p-2` (Jacobi route).
pub fn kloosterman_gauss_sum(ctx: &PrimeContext) -> Result<ScaledResidue> {
    require_p5(ctx)?;
    let terms: Vec<ScaledResidue> = (0..ctx.p() - 1).into_par_iter().map(|a| central_term(ctx, a)).collect();
    ctx.scaled_sum(terms)
}

/// The central sum as an exact integer; it is bounded by `(p-1) p^3`.
pub fn kloosterman_gauss_sum_exact(ctx: &PrimeContext) -> Result<BigInt> {
    let s = kloosterman_gauss_sum(ctx)?;
    let p = BigInt::from(ctx.p());
    ctx.scaled_lift_integer(s, &((&p - 1u32) * &p * &p * &p))
}

/// The central sum through Gross-Koblitz; needs the Gamma table.
pub fn kloosterman_gauss_sum_gamma(ctx: &PrimeContext) -> Result<ScaledResidue> {
    require_p5(ctx)?;
    let terms: Vec<ScaledResidue> = (0..ctx.p() - 1)
        .into_par_iter()
        .map(|a| gross_koblitz_product(ctx, &central_term_product(ctx, a)))
        .collect::<Result<_>>()?;
    ctx.scaled_sum(terms)
}

fn require_p5(ctx: &PrimeContext) -> Result<()> {
    if ctx.p() < 5 {
        return Err(Error::BadArgument(format!("p = {} is below 5", ctx.p())));
    }
    Ok(())
}

/// `prod_{chi^m = eps} g(chi psi) = -g(psi^m) psi(m^-m) prod_{chi^m = eps} g(chi)`,
/// checked by reducing the quotient of the two sides.
pub fn davenport_hasse_check(ctx: &PrimeContext, m: u64, psi: Character) -> Result<bool> {
    let q = ctx.p() - 1;
    if m == 0 || !q.is_multiple_of(m) {
        return Err(Error::BadArgument(format!("m = {m} does not divide p - 1")));
    }
    let step = (q / m) as i64;
    let chis: Vec<Character> = (0..m as i64).map(|k| ctx.character(k * step)).collect();
    let num: Vec<Character> = chis.iter().map(|&c| c * psi).collect();
    let mut den = chis.clone();
    den.push(psi.pow(m as i64));
    let ratio = reduce_gauss_product(ctx, &GaussProduct::new(ctx, num, den))?;
    let expect = ctx.scaled_from_residue(ctx.neg(char_eval(ctx, psi.pow(-(m as i64)), m as i64)));
    Ok(ctx.scaled_agree(ratio, expect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::make_context;
    use rand::{Rng, SeedableRng};

    #[test]
    fn basic_products() {
        let c5 = make_context(5, 3, false).unwrap();
        let phi = c5.phi();
        let v = reduce_gauss_product(&c5, &GaussProduct::new(&c5, vec![phi, phi], vec![])).unwrap();
        assert_eq!(v, c5.scaled_from_i64(5));
        let eps = c5.epsilon();
        let v = reduce_gauss_product(&c5, &GaussProduct::new(&c5, vec![eps, eps], vec![])).unwrap();
        assert_eq!(v, c5.scaled_one());
        for p in [5u64, 7, 13] {
            let ctx = make_context(p, 2, false).unwrap();
            let w = ctx.omega();
            let prod = GaussProduct::new(&ctx, vec![w, w.inverse()], vec![])
                .with_scalar(ctx.mod_inverse(char_eval(&ctx, w, -1)).unwrap());
            let v = reduce_gauss_product(&ctx, &prod).unwrap();
            assert_eq!(v, ctx.scaled_p_pow(1));
        }
    }

    #[test]
    fn unbalanced_is_rejected() {
        let ctx = make_context(7, 2, false).unwrap();
        let prod = GaussProduct::new(&ctx, vec![ctx.omega()], vec![]);
        assert_eq!(reduce_gauss_product(&ctx, &prod), Err(Error::NotBalanced(5)));
    }

    #[test]
    fn degenerate_terms() {
        for p in [5u64, 7, 11, 13, 17] {
            let ctx = make_context(p, 3, false).unwrap();
            let phi_m1 = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(central_term(&ctx, 0), ctx.scaled_from_i64(p as i64 * phi_m1));
            assert_eq!(central_term(&ctx, (p - 1) / 2), ctx.scaled_from_i64((p * p) as i64));
        }
    }

    #[test]
    fn fixed_schedule_matches_generic_engine() {
        for p in [5u64, 7, 13, 17, 29] {
            let ctx = make_context(p, 3, true).unwrap();
            for a in 0..p - 1 {
                let prod = central_term_product(&ctx, a);
                let fixed = central_term(&ctx, a);
                assert!(ctx.scaled_agree(fixed, reduce_gauss_product(&ctx, &prod).unwrap()), "p={p} a={a}");
                assert!(ctx.scaled_agree(fixed, gross_koblitz_product(&ctx, &prod).unwrap()), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn central_sum_routes_agree() {
        for &(p, n) in &[(7u64, 2u32), (13, 2), (5, 3), (11, 2), (19, 2)] {
            let ctx = make_context(p, n, true).unwrap();
            let j = kloosterman_gauss_sum(&ctx).unwrap();
            let g = kloosterman_gauss_sum_gamma(&ctx).unwrap();
            assert!(ctx.scaled_congruent(j, g, n as i64).unwrap(), "p={p}");
        }
    }

    #[test]
    fn central_sum_is_a_stable_integer() {
        for p in [5u64, 7, 11, 13] {
            let lifts: Vec<BigInt> = (4..=6)
                .map(|n| kloosterman_gauss_sum_exact(&make_context(p, n, false).unwrap()).unwrap())
                .collect();
            assert!(lifts.windows(2).all(|w| w[0] == w[1]), "p={p}: {lifts:?}");
        }
    }

    #[test]
    fn davenport_hasse() {
        let ctx = make_context(13, 3, false).unwrap();
        assert!(davenport_hasse_check(&ctx, 2, ctx.omega()).unwrap());
        assert!(davenport_hasse_check(&ctx, 2, ctx.epsilon()).unwrap());
        assert!(davenport_hasse_check(&ctx, 3, ctx.omega()).unwrap());
        for p in [7u64, 13, 37] {
            let ctx = make_context(p, 2, false).unwrap();
            for m in [2u64, 3, 4, 6] {
                if (p - 1) % m != 0 {
                    assert!(davenport_hasse_check(&ctx, m, ctx.omega()).is_err());
                    continue;
                }
                for e in 0..(p - 1) as i64 {
                    assert!(davenport_hasse_check(&ctx, m, ctx.character(e)).unwrap(), "p={p} m={m} e={e}");
                }
            }
        }
    }

    #[test]
    fn schedule_independence_and_valuation() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let p = [5u64, 7, 11, 13][rng.gen_range(0..4)];
            let ctx = make_context(p, 4, true).unwrap();
            let q = p as i64 - 1;
            let k = rng.gen_range(1..6);
            let mut num: Vec<Character> = (0..k).map(|_| ctx.character(rng.gen_range(0..q))).collect();
            let den: Vec<Character> = (0..rng.gen_range(0..3)).map(|_| ctx.character(rng.gen_range(0..q))).collect();
            let mut prod = GaussProduct::new(&ctx, num.clone(), den.clone());
            // balance with one more numerator factor
            let s = prod.pi_exponent().rem_euclid(q);
            if s != 0 {
                num.push(ctx.character(s));
                prod = GaussProduct::new(&ctx, num, den);
            }
            let v = prod.valuation(&ctx).unwrap();
            let a = reduce_gauss_product(&ctx, &prod).unwrap();
            let b = reduce_gauss_product_by(&ctx, &prod, |r| rng.gen_range(0..r.len())).unwrap();
            let c = gross_koblitz_product(&ctx, &prod).unwrap();
            assert!(ctx.scaled_agree(a, b) && ctx.scaled_agree(a, c), "{prod:?}");
            assert_eq!(a.valuation(), Some(v));
        }
    }
}
