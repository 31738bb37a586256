use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gamma::GammaTable;

/// Default Gamma table budget in entries.
pub const DEFAULT_GAMMA_BUDGET: u64 = 1 << 27;

/// An element of Z/p^N, always stored reduced into `[0, p^N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(pub(crate) u64);

impl Residue {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Options controlling [`PrimeContext`] construction.
#[derive(Clone, Copy, Debug)]
pub struct ContextOptions {
    pub with_gamma: bool,
    /// Maximum number of Gamma table entries (one per residue mod p^N).
    pub gamma_budget: u64,
}

impl Default for ContextOptions {
    fn default() -> Self {
        ContextOptions { with_gamma: false, gamma_budget: DEFAULT_GAMMA_BUDGET }
    }
}

/// All precomputed state for one odd prime `p` at precision `N`.
///
/// Immutable after construction; every operation is a pure function of the
/// context and its inputs, so a context can be shared across threads.
pub struct PrimeContext {
    p: u64,
    n: u32,
    modulus: u64,
    p_powers: Vec<u64>,
    generator: u64,
    // dlog[x] for x in 1..p; dlog[0] is unused.
    dlog: Vec<u32>,
    // g^k mod p.
    fp_powers: Vec<u64>,
    // omega(g)^k mod p^N for k in 0..p-1.
    omega_powers: Vec<u64>,
    teich: Vec<u64>,
    gamma: Option<GammaTable>,
}

impl fmt::Debug for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeContext")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("generator", &self.generator)
            .field("gamma", &self.gamma.is_some())
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Odd primes in `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&q| is_prime(q)).collect()
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Smallest primitive root of F_p, found by trial over 2, 3, 4, ...
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Build a context without a Gamma table, or with one at the default budget.
pub fn make_context(p: u64, n: u32, with_gamma: bool) -> Result<PrimeContext> {
    PrimeContext::with_options(p, n, ContextOptions { with_gamma, ..Default::default() })
}

impl PrimeContext {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        make_context(p, n, false)
    }

    pub fn with_options(p: u64, n: u32, opts: ContextOptions) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::BadArgument("precision must be at least 1".into()));
        }
        let mut p_powers = vec![1u64];
        for _ in 0..n {
            let next = p_powers
                .last()
                .unwrap()
                .checked_mul(p)
                .filter(|&v| v < (1u64 << 63))
                .ok_or(Error::PrecisionOverflow { p, n })?;
            p_powers.push(next);
        }
        let modulus = p_powers[n as usize];
        if opts.with_gamma && modulus > opts.gamma_budget {
            return Err(Error::TableBudgetExceeded {
                p,
                n,
                entries: modulus,
                budget: opts.gamma_budget,
            });
        }

        let generator = primitive_root(p);
        let order = (p - 1) as usize;
        let mut dlog = vec![0u32; p as usize];
        let mut fp_powers = Vec::with_capacity(order);
        let mut x = 1u64;
        for k in 0..order {
            dlog[x as usize] = k as u32;
            fp_powers.push(x);
            x = x * generator % p;
        }

        // x <- x^p, N-1 times, converges to the Teichmuller lift of g.
        let mut omega_g = generator;
        for _ in 1..n {
            omega_g = pow_mod(omega_g, p, modulus);
        }
        let mut omega_powers = Vec::with_capacity(order);
        let mut w = 1u64;
        for _ in 0..order {
            omega_powers.push(w);
            w = mul_mod(w, omega_g, modulus);
        }
        let mut teich = vec![0u64; p as usize];
        for k in 0..order {
            teich[fp_powers[k] as usize] = omega_powers[k];
        }

        let gamma = if opts.with_gamma { Some(GammaTable::build(p, modulus)) } else { None };

        Ok(PrimeContext { p, n, modulus, p_powers, generator, dlog, fp_powers, omega_powers, teich, gamma })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The precision exponent N.
    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `p^k` for `0 <= k <= N`.
    pub fn p_pow(&self, k: u32) -> u64 {
        self.p_powers[k as usize]
    }

    pub fn gamma_table(&self) -> Option<&GammaTable> {
        self.gamma.as_ref()
    }

    /// Reduce an integer into F_p.
    pub fn fp(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn fp_inv(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(pow_mod(x, self.p - 2, self.p))
    }

    /// Index of `x` in the cyclic group generated by the primitive root.
    pub fn dlog(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.dlog[x as usize] as u64)
    }

    pub(crate) fn dlog_unchecked(&self, x: u64) -> u64 {
        self.dlog[x as usize] as u64
    }

    /// `g^k mod p`.
    pub fn fp_exp(&self, k: u64) -> u64 {
        self.fp_powers[(k % (self.p - 1)) as usize]
    }

    /// `omega(g)^k mod p^N`.
    pub(crate) fn omega_power(&self, k: u64) -> u64 {
        self.omega_powers[(k % (self.p - 1)) as usize]
    }

    /// The Teichmuller lift of `x`: the (p-1)-th root of unity congruent to `x` mod p.
    pub fn teichmuller(&self, x: u64) -> Result<Residue> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(Residue(self.teich[x as usize]))
    }

    pub fn residue(&self, x: u64) -> Residue {
        Residue(x % self.modulus)
    }

    pub fn from_i64(&self, x: i64) -> Residue {
        Residue(x.rem_euclid(self.modulus as i64) as u64)
    }

    pub fn from_bigint(&self, x: &BigInt) -> Residue {
        let m = BigInt::from(self.modulus);
        Residue(x.mod_floor(&m).to_u64().expect("reduced below modulus"))
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a.0 as u128 + b.0 as u128;
        Residue((s % self.modulus as u128) as u64)
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        if a.0 >= b.0 {
            Residue(a.0 - b.0)
        } else {
            Residue(self.modulus - (b.0 - a.0))
        }
    }

    pub fn neg(&self, a: Residue) -> Residue {
        if a.0 == 0 {
            a
        } else {
            Residue(self.modulus - a.0)
        }
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        Residue(mul_mod(a.0, b.0, self.modulus))
    }

    pub fn mod_pow(&self, a: Residue, e: u64) -> Residue {
        Residue(pow_mod(a.0, e, self.modulus))
    }

    pub fn mod_inverse(&self, a: Residue) -> Result<Residue> {
        if a.0.is_multiple_of(self.p) {
            return Err(Error::NotInvertible(a.0));
        }
        Ok(Residue(inv_mod(a.0, self.modulus).expect("unit mod p^N")))
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn balanced_lift(&self, r: Residue) -> i64 {
        if r.0 > self.modulus / 2 {
            r.0 as i64 - self.modulus as i64
        } else {
            r.0 as i64
        }
    }

    /// p-adic valuation of a nonzero integer.
    pub fn valuation_of(&self, x: &BigInt) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut x = x.abs();
        let mut v = 0;
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        Some(v)
    }
}
