use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::squares::two_squares;
use crate::characters::{binomial, char_eval, jacobi_sum, jacobi_sum_generalized, legendre};
use crate::error::{Error, Result};
use crate::finite_hypergeom::{evans_greene_check, f21, f32, p3_f43_one};
use crate::gamma::{floor_sum_shifted_down, floor_sum_shifted_up, gamma_product_check, multiplication_check, rational, reflection_check};
use crate::gauss::{davenport_hasse_check, kloosterman_gauss_sum, kloosterman_gauss_sum_exact};
use crate::kloosterman::{sheaf_sum_twisted, F_of};
use crate::modforms::{a_p, b_p, SeriesZ};
use crate::padic_hypergeom::{c_constant, g1212_thm2, g44_half, g44_thm1, sextic_twist};
use crate::residue::{PrimeContext, ScaledResidue};

/// One row of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub prime: u64,
    pub class_mod_12: u64,
    pub check_id: String,
    pub lhs: String,
    pub rhs: String,
    pub precision: u32,
    pub pass: bool,
    pub runtime_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Master,
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Prop,
    Intro,
    Dgp,
    Lemmas,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Master,
        CheckKind::Thm1,
        CheckKind::Thm2,
        CheckKind::Thm3,
        CheckKind::Thm4,
        CheckKind::Prop,
        CheckKind::Intro,
        CheckKind::Dgp,
        CheckKind::Lemmas,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CheckKind::Master => "master",
            CheckKind::Thm1 => "thm1",
            CheckKind::Thm2 => "thm2",
            CheckKind::Thm3 => "thm3",
            CheckKind::Thm4 => "thm4",
            CheckKind::Prop => "prop",
            CheckKind::Intro => "intro",
            CheckKind::Dgp => "dgp",
            CheckKind::Lemmas => "lemmas",
        }
    }

    /// Whether the check is defined at `p` (class dispatch for the theorems).
    pub fn applies(self, p: u64) -> bool {
        match self {
            CheckKind::Thm1 | CheckKind::Thm3 => matches!(p % 12, 1 | 7),
            CheckKind::Thm2 | CheckKind::Thm4 => matches!(p % 12, 5 | 11),
            CheckKind::Dgp => p >= 3,
            _ => p >= 5,
        }
    }

    /// Checks evaluated through the Gamma table at the configured precision.
    pub fn uses_gamma(self) -> bool {
        !matches!(self, CheckKind::Master | CheckKind::Dgp)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::BadArgument(format!("unknown check '{s}'")))
    }
}

/// Largest `N` with `p^N < 2^63`.
pub fn max_precision(p: u64) -> u32 {
    let mut n = 0u32;
    let mut m = 1u64;
    while let Some(next) = m.checked_mul(p).filter(|&v| v < (1u64 << 63)) {
        m = next;
        n += 1;
    }
    n
}

fn row(ctx: &PrimeContext, id: &str, lhs: String, rhs: String, pass: bool, start: Instant) -> CheckResult {
    CheckResult {
        prime: ctx.p(),
        class_mod_12: ctx.p() % 12,
        check_id: id.to_string(),
        lhs,
        rhs,
        precision: ctx.precision(),
        pass,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

fn require_class(ctx: &PrimeContext, kind: CheckKind) -> Result<()> {
    if kind.applies(ctx.p()) {
        Ok(())
    } else {
        Err(Error::WrongResidueClass { p: ctx.p(), class: ctx.p() % 12, check: kind.id() })
    }
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn twisted_sheaf_integer(ctx: &PrimeContext) -> BigInt {
    sheaf_sum_twisted(ctx).to_integer().expect("T is an integer")
}

/// `4x^2` when `p = 1 mod 4`, together with `3F2(1)`'s numerator `4x^2 - 2p`.
fn square_terms(p: u64) -> Option<(BigInt, BigInt)> {
    two_squares(p).ok().map(|s| {
        let x2 = int(4 * (s.x * s.x) as i64);
        let r = &x2 - int(2 * p as i64);
        (x2, r)
    })
}

/// `1 - T - p^2 phi(2) [+ 4p x^2 phi(2) - p phi(-2)(4x^2 - 2p)]`.
pub fn thm1_rhs(ctx: &PrimeContext, t: &BigInt) -> BigInt {
    let p = ctx.p() as i64;
    let (phi2, phim2) = (legendre(ctx, 2), legendre(ctx, -2));
    let mut v = int(1) - t - int(p * p * phi2);
    if let Some((x2, r)) = square_terms(ctx.p()) {
        v += &x2 * int(p * phi2) - r * int(p * phim2);
    }
    v
}

/// `(p-1)` times the right-hand side of the twelve-slot identity.
pub fn thm2_rhs_numerator(ctx: &PrimeContext, t: &BigInt) -> BigInt {
    let p = ctx.p() as i64;
    let (phim1, phi2, phim2) = (legendre(ctx, -1), legendre(ctx, 2), legendre(ctx, -2));
    let mut v = int(phim1) - t * int(phim1) - int(p * p * phim2);
    if let Some((x2, r)) = square_terms(ctx.p()) {
        v += &x2 * int(p * phim2) - r * int(p * phi2);
    }
    v
}

/// The part of the `a(p)` formulas not involving a hypergeometric value:
/// `-1/p + p phi(2) [- 4x^2 phi(2) + phi(-2)(4x^2 - 2p)]`; for `b(p)` every
/// character value is multiplied by `phi(-1)`.
pub fn fourier_rational_part(ctx: &PrimeContext, twisted: bool) -> BigRational {
    let p = ctx.p() as i64;
    let s = if twisted { legendre(ctx, -1) } else { 1 };
    let (c2, cm2) = (s * legendre(ctx, 2), s * legendre(ctx, -2));
    let mut v = ratio(int(-s), int(p)) + BigRational::from_integer(int(p * c2));
    if let Some((x2, r)) = square_terms(ctx.p()) {
        v += BigRational::from_integer(-&x2 * int(c2) + r * int(cm2));
    }
    v
}

fn congruent(ctx: &PrimeContext, a: ScaledResidue, b: ScaledResidue) -> Result<bool> {
    ctx.scaled_congruent(a, b, ctx.precision() as i64)
}

fn show(ctx: &PrimeContext, a: ScaledResidue) -> String {
    ctx.scaled_display(ctx.scaled_truncate(a, ctx.precision() as i64))
}

/// `C p^3 (p-1) psi_6_bar(2) psi_3(4) 4G4[...]`.
pub fn thm1_lhs(ctx: &PrimeContext) -> Result<ScaledResidue> {
    let p = ctx.p();
    let unit = ctx.mul(c_constant(ctx)?, ctx.mul(sextic_twist(ctx)?, ctx.residue(p - 1)));
    let g = g44_thm1(ctx)?;
    Ok(ctx.scaled_mul(ctx.scaled_mul_residue(g, unit), ctx.scaled_p_pow(3)))
}

fn b_prime_exact(ctx: &PrimeContext) -> Result<BigInt> {
    kloosterman_gauss_sum_exact(ctx)
}

/// `T/p` against the combination of special values plus `B'/p^2`, exactly.
pub fn check_master_identity(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    if ctx.p() < 5 {
        return Err(Error::BadArgument(format!("p = {} is below 5", ctx.p())));
    }
    let p = ctx.p();
    let pi = p as i64;
    let pb = int(pi);
    let t = twisted_sheaf_integer(ctx);
    let lhs = ratio(t, pb.clone());
    let (phi2, phim2) = (legendre(ctx, 2), legendre(ctx, -2));
    let half = f21(ctx, p.div_ceil(2) as i64)?.to_ratio();
    let one21 = f21(ctx, 1)?.to_ratio();
    let one32 = f32(ctx, 1)?.to_ratio();
    let p2 = BigRational::from_integer(int(pi * pi));
    let b = b_prime_exact(ctx)?;
    let rhs = ratio(int(1 - pi), pb.clone()) - BigRational::from_integer(int(pi * phi2))
        + &p2 * &half * &half * BigRational::from_integer(int(phi2))
        + &p2 * &one21 * &one21
        - &p2 * one32 * BigRational::from_integer(int(phim2))
        + ratio(b, int(pi * pi));
    Ok(row(ctx, "master", lhs.to_string(), rhs.to_string(), lhs == rhs, start))
}

/// Gamma-route check of the four-slot identity modulo `p^N`.
pub fn check_thm1(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm1)?;
    let t = twisted_sheaf_integer(ctx);
    let lhs = thm1_lhs(ctx)?;
    let rhs = ctx.scaled_from_bigint(&thm1_rhs(ctx, &t));
    let pass = congruent(ctx, lhs, rhs)?;
    Ok(row(ctx, "thm1", show(ctx, lhs), show(ctx, rhs), pass, start))
}

/// The four-slot identity with its left side replaced by `-B'/p`, exactly.
pub fn check_thm1_jacobi(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm1)?;
    let t = twisted_sheaf_integer(ctx);
    let lhs = ratio(-b_prime_exact(ctx)?, int(ctx.p() as i64));
    let rhs = BigRational::from_integer(thm1_rhs(ctx, &t));
    Ok(row(ctx, "thm1-jacobi", lhs.to_string(), rhs.to_string(), lhs == rhs, start))
}

/// Gamma-route check of the twelve-slot identity modulo `p^N`.
pub fn check_thm2(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm2)?;
    let t = twisted_sheaf_integer(ctx);
    let lhs = g1212_thm2(ctx)?;
    let inv = ctx.mod_inverse(ctx.residue(ctx.p() - 1))?;
    let rhs = ctx.scaled_mul_residue(ctx.scaled_from_bigint(&thm2_rhs_numerator(ctx, &t)), inv);
    let pass = congruent(ctx, lhs, rhs)?;
    Ok(row(ctx, "thm2", show(ctx, lhs), show(ctx, rhs), pass, start))
}

/// The twelve-slot identity with `12G12` replaced by `phi(-1) B' / (p(1-p))`.
pub fn check_thm2_jacobi(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm2)?;
    let p = ctx.p() as i64;
    let t = twisted_sheaf_integer(ctx);
    let lhs = ratio(b_prime_exact(ctx)? * int(legendre(ctx, -1)), int(p * (1 - p)));
    let rhs = ratio(thm2_rhs_numerator(ctx, &t), int(p - 1));
    Ok(row(ctx, "thm2-jacobi", lhs.to_string(), rhs.to_string(), lhs == rhs, start))
}

fn fourier_row(
    ctx: &PrimeContext,
    id: &str,
    series: &SeriesZ,
    hyper_a: ScaledResidue,
    start: Instant,
) -> Result<CheckResult> {
    let p = ctx.p();
    let (a, b) = (a_p(series, p)?, b_p(series, p)?);
    let phim1 = ctx.from_i64(legendre(ctx, -1));
    let rhs_a = ctx.scaled_add(ctx.scaled_from_ratio(&fourier_rational_part(ctx, false))?, hyper_a)?;
    let rhs_b = ctx.scaled_add(
        ctx.scaled_from_ratio(&fourier_rational_part(ctx, true))?,
        ctx.scaled_mul_residue(hyper_a, phim1),
    )?;
    let p1 = ctx.scaled_p_pow(1);
    // Both sides carry a 1/p; compare p times each modulo p^N.
    let (la, lb) = (ctx.scaled_from_bigint(&a), ctx.scaled_from_bigint(&b));
    let pass_a = congruent(ctx, ctx.scaled_mul(la, p1), ctx.scaled_mul(rhs_a, p1))?;
    let pass_b = congruent(ctx, ctx.scaled_mul(lb, p1), ctx.scaled_mul(rhs_b, p1))?;
    let shown = |x: ScaledResidue| ctx.scaled_display(ctx.scaled_truncate(x, ctx.precision() as i64 - 1));
    Ok(row(
        ctx,
        id,
        format!("a={a}; b={b}"),
        format!("a={}; b={}", shown(rhs_a), shown(rhs_b)),
        pass_a && pass_b,
        start,
    ))
}

fn fourier_row_exact(ctx: &PrimeContext, id: &str, series: &SeriesZ, start: Instant) -> Result<CheckResult> {
    let p = ctx.p() as i64;
    let (a, b) = (a_p(series, ctx.p())?, b_p(series, ctx.p())?);
    let hyper = ratio(-b_prime_exact(ctx)?, int(p * p));
    let rhs_a = fourier_rational_part(ctx, false) + &hyper;
    let rhs_b = fourier_rational_part(ctx, true) + hyper * BigRational::from_integer(int(legendre(ctx, -1)));
    let (la, lb) = (BigRational::from_integer(a), BigRational::from_integer(b));
    let pass = la == rhs_a && lb == rhs_b;
    Ok(row(ctx, id, format!("a={la}; b={lb}"), format!("a={rhs_a}; b={rhs_b}"), pass, start))
}

/// `a(p)` and `b(p)` from the four-slot value, modulo `p^(N-1)`.
pub fn check_thm3(ctx: &PrimeContext, series: &SeriesZ) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm3)?;
    // C p^2 (p-1) psi_6_bar(2) psi_3(4) 4G4
    let hyper = ctx.scaled_mul(thm1_lhs(ctx)?, ctx.scaled_p_pow(-1));
    fourier_row(ctx, "thm3", series, hyper, start)
}

pub fn check_thm3_jacobi(ctx: &PrimeContext, series: &SeriesZ) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm3)?;
    fourier_row_exact(ctx, "thm3-jacobi", series, start)
}

/// `a(p)` and `b(p)` from the twelve-slot value. For `p = 11 mod 12` the
/// `a(p)` formula is taken as `-1/p + p phi(2) + phi(-1)(p-1)/p 12G12`.
pub fn check_thm4(ctx: &PrimeContext, series: &SeriesZ) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm4)?;
    let p = ctx.p();
    let g = g1212_thm2(ctx)?;
    let unit = ctx.mul(ctx.from_i64(legendre(ctx, -1)), ctx.residue(p - 1));
    let hyper = ctx.scaled_mul(ctx.scaled_mul_residue(g, unit), ctx.scaled_p_pow(-1));
    fourier_row(ctx, "thm4", series, hyper, start)
}

pub fn check_thm4_jacobi(ctx: &PrimeContext, series: &SeriesZ) -> Result<CheckResult> {
    let start = Instant::now();
    require_class(ctx, CheckKind::Thm4)?;
    fourier_row_exact(ctx, "thm4-jacobi", series, start)
}

/// Jacobi-route central sum against the Gamma-route hypergeometric value.
pub fn check_prop_equivalence(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    let p = ctx.p();
    if p < 5 {
        return Err(Error::BadArgument(format!("p = {p} is below 5")));
    }
    let b = kloosterman_gauss_sum(ctx)?;
    let (lhs, rhs) = if p % 3 == 1 {
        // -C p^4 (p-1) psi_6_bar(2) psi_3(4) 4G4
        let rhs = ctx.scaled_neg(ctx.scaled_mul(thm1_lhs(ctx)?, ctx.scaled_p_pow(1)));
        (b, rhs)
    } else {
        let den = ctx.scaled_mul(ctx.scaled_p_pow(1), ctx.scaled_from_i64(1 - p as i64));
        let lhs = ctx.scaled_div(ctx.scaled_mul_residue(b, ctx.from_i64(legendre(ctx, -1))), den)?;
        (lhs, g1212_thm2(ctx)?)
    };
    let pass = congruent(ctx, lhs, rhs)?;
    Ok(row(ctx, "prop", show(ctx, lhs), show(ctx, rhs), pass, start))
}

/// `p^6 4G4[1/2 x4; 0 x4 | 1]` against `p - T/p` modulo `p^N`.
pub fn check_intro_identity(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    let g = g44_half(ctx)?;
    let lhs = ctx.scaled_mul(g, ctx.scaled_p_pow(6));
    let t = twisted_sheaf_integer(ctx);
    let rhs = ctx.scaled_from_bigint(&(BigInt::from(ctx.p()) - t / BigInt::from(ctx.p())));
    let pass = congruent(ctx, lhs, rhs)?;
    Ok(row(ctx, "intro", show(ctx, lhs), show(ctx, rhs), pass, start))
}

/// `T = -p a(p)` and `p^3 4F3(1) = -a(p) - p`, both exact.
pub fn check_dgp_bridge(ctx: &PrimeContext, series: &SeriesZ) -> Result<CheckResult> {
    let start = Instant::now();
    if ctx.precision() < 3 {
        return Err(Error::InsufficientPrecision { available: ctx.precision() as i64, required: 3 });
    }
    let p = BigInt::from(ctx.p());
    let a = a_p(series, ctx.p())?;
    let t = twisted_sheaf_integer(ctx);
    let f = p3_f43_one(ctx)?;
    let pass = t == -&p * &a && f == -&a - &p;
    Ok(row(ctx, "dgp", format!("T={t}; p^3*4F3(1)={f}"), format!("-p*a(p)={}; -a(p)-p={}", -&p * &a, -&a - &p), pass, start))
}

/// Named outcome of one constituent of the lemma suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

/// At most `cap` indices spread evenly over `0..n`.
fn spread(n: u64, cap: u64) -> Vec<u64> {
    if n <= cap {
        return (0..n).collect();
    }
    (0..cap).map(|i| i * n / cap).collect()
}

fn tally<I: IntoIterator<Item = Result<bool>>>(name: &'static str, cases: I) -> Result<LemmaOutcome> {
    let mut out = LemmaOutcome { name, cases: 0, failures: 0 };
    for c in cases {
        out.cases += 1;
        if !c? {
            out.failures += 1;
        }
    }
    Ok(out)
}

/// Every constituent identity at this prime; needs the Gamma table.
pub fn lemma_breakdown(ctx: &PrimeContext) -> Result<Vec<LemmaOutcome>> {
    let p = ctx.p();
    let q = p - 1;
    let pi = p as i64;
    let exhaustive = p <= 100;
    let mut out = Vec::new();

    out.push(tally(
        "orthogonality",
        (0..q as i64).map(|e| {
            let chi = ctx.character(e);
            let s = (0..pi).fold(ctx.residue(0), |acc, x| ctx.add(acc, char_eval(ctx, chi, x)));
            Ok(s.value() == if chi.is_trivial() { q } else { 0 })
        })
        .chain((0..pi).map(|x| {
            let s = (0..q as i64).fold(ctx.residue(0), |acc, e| ctx.add(acc, char_eval(ctx, ctx.character(e), x)));
            Ok(s.value() == if x == 1 { q } else { 0 })
        })),
    )?);

    out.push(tally(
        "floor",
        (1..=12u64).flat_map(|d| (0..q).map(move |a| Ok(floor_sum_shifted_down(d, a, p) && floor_sum_shifted_up(d, a, p)))),
    )?);

    out.push(tally("reflection", (0..q).map(|m| reflection_check(ctx, rational(m as i64, q as i64))))?);

    out.push(tally(
        "multiplication",
        [2u64, 3].into_iter().flat_map(|m| (0..=q).map(move |r| multiplication_check(ctx, m, r))),
    )?);

    out.push(tally(
        "gamma-products",
        (1..=6u64).filter(|t| t % p != 0).flat_map(|t| spread(q - 1, 60).into_iter().map(move |a| gamma_product_check(ctx, t, a))),
    )?);

    out.push(tally(
        "davenport-hasse",
        [2u64, 3]
            .into_iter()
            .filter(|m| q.is_multiple_of(*m))
            .flat_map(|m| spread(q, 60).into_iter().map(move |e| davenport_hasse_check(ctx, m, ctx.character(e as i64)))),
    )?);

    let ts: Vec<u64> = if exhaustive { (2..q).collect() } else { spread(q - 3, 10).into_iter().map(|t| t + 2).collect() };
    out.push(tally("evans-greene", ts.iter().map(|&t| evans_greene_check(ctx, t as i64)))?);

    let phim1 = legendre(ctx, -1);
    let p2 = crate::residue::PPowerRational::from_integer(p, pi * pi);
    let pp = crate::residue::PPowerRational::from_integer(p, pi);
    let avals: Vec<i64> = if exhaustive { (1..pi).collect() } else { spread(q, 10).into_iter().map(|a| a as i64 + 1).collect() };
    out.push(tally(
        "sheaf-lemmas",
        avals.iter().map(|&a| {
            let lhs = F_of(ctx, a)?;
            let f = f21(ctx, -a)?;
            let sq = &p2 * &(&f * &f);
            Ok(if a == 1 {
                lhs.times(phim1) == &sq.times(phim1) - &pp
            } else if a == pi - 1 {
                lhs.times(phim1) == &sq - &pp
            } else {
                lhs == sq.times(legendre(ctx, a))
            })
        }),
    )?);

    // Deterministic spread of (A, B, t) triples.
    let cases = (0..200u64).map(|i| {
        let a = ctx.character(((i * 7 + 1) % q) as i64);
        let b = ctx.character(((i * 13 + 3) % q) as i64);
        let t = (i * 31 % (p - 1) + 1) as i64;
        let lhs = jacobi_sum_generalized(ctx, a, b, t)?;
        let gen = lhs == ctx.mul(char_eval(ctx, a * b, t), jacobi_sum(ctx, a, b));
        let left = binomial(ctx, a, b);
        let right = ctx.scaled_mul_residue(binomial(ctx, b * a.inverse(), b), char_eval(ctx, b, -1));
        Ok(gen && ctx.scaled_agree(left, right))
    });
    out.push(tally("jacobi-binomial", cases)?);
    Ok(out)
}

pub fn check_lemma_suite(ctx: &PrimeContext) -> Result<CheckResult> {
    let start = Instant::now();
    let parts = lemma_breakdown(ctx)?;
    let pass = parts.iter().all(|o| o.failures == 0);
    let lhs = parts.iter().map(|o| format!("{}:{}/{}", o.name, o.cases - o.failures, o.cases)).collect::<Vec<_>>().join(",");
    Ok(row(ctx, "lemmas", lhs, "no failures".to_string(), pass, start))
}
