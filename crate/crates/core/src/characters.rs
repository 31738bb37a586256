//! Multiplicative characters of F_p^x valued in Teichmuller units of Z/p^N.
//!
//! A character is `omega^a` for an exponent `a` mod `p-1`. Every character,
//! including the trivial one, takes the value 0 at 0.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::residue::{PrimeContext, Residue, ScaledResidue};

/// The character `omega^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    exponent: u64,
    group_order: u64,
}

impl Character {
    pub fn new(exponent: i64, group_order: u64) -> Self {
        Character { exponent: exponent.rem_euclid(group_order as i64) as u64, group_order }
    }

    pub fn exponent(self) -> u64 {
        self.exponent
    }

    pub fn group_order(self) -> u64 {
        self.group_order
    }

    pub fn is_trivial(self) -> bool {
        self.exponent == 0
    }

    pub fn inverse(self) -> Self {
        Character::new(-(self.exponent as i64), self.group_order)
    }

    pub fn pow(self, k: i64) -> Self {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.group_order as i128);
        Character { exponent: e as u64, group_order: self.group_order }
    }

    /// Exponent `e` in `[0, p-2]` with `self = omega_bar^e`.
    pub fn conjugate_exponent(self) -> u64 {
        (self.group_order - self.exponent) % self.group_order
    }
}

impl Mul for Character {
    type Output = Character;
    fn mul(self, rhs: Character) -> Character {
        assert_eq!(self.group_order, rhs.group_order);
        Character::new((self.exponent + rhs.exponent) as i64, self.group_order)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{}", self.exponent)
    }
}

impl PrimeContext {
    pub fn character(&self, exponent: i64) -> Character {
        Character::new(exponent, self.p() - 1)
    }

    pub fn epsilon(&self) -> Character {
        self.character(0)
    }

    /// The quadratic character.
    pub fn phi(&self) -> Character {
        self.character(((self.p() - 1) / 2) as i64)
    }

    pub fn omega(&self) -> Character {
        self.character(1)
    }

    /// A character of exact order `d`; needs `d | p-1`.
    pub fn character_of_order(&self, d: u64, name: &'static str) -> Result<Character> {
        if !(self.p() - 1).is_multiple_of(d) {
            return Err(Error::CharacterUnavailable(name, d));
        }
        Ok(self.character(((self.p() - 1) / d) as i64))
    }

    pub fn psi3(&self) -> Result<Character> {
        self.character_of_order(3, "psi_3")
    }

    pub fn psi6(&self) -> Result<Character> {
        self.character_of_order(6, "psi_6")
    }
}

pub fn delta(a: Character) -> u32 {
    a.is_trivial() as u32
}

/// `A(x)` as a residue mod p^N; zero at `x = 0` for every character.
pub fn char_eval(ctx: &PrimeContext, a: Character, x: i64) -> Residue {
    let x = ctx.fp(x);
    if x == 0 {
        return ctx.residue(0);
    }
    Residue(ctx.omega_power(a.exponent * ctx.dlog_unchecked(x)))
}

/// Legendre symbol as a signed integer.
pub fn legendre(ctx: &PrimeContext, x: i64) -> i64 {
    let x = ctx.fp(x);
    if x == 0 {
        0
    } else if ctx.dlog_unchecked(x).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Table of Legendre symbols for `0..p`, for hot loops.
pub fn legendre_table(ctx: &PrimeContext) -> Vec<i8> {
    (0..ctx.p() as i64).map(|x| legendre(ctx, x) as i8).collect()
}

/// `J(A, B) = sum over x of A(x) B(1-x)`.
pub fn jacobi_sum(ctx: &PrimeContext, a: Character, b: Character) -> Residue {
    let p = ctx.p();
    let order = p - 1;
    let mut acc = 0u128;
    // x = 0 and x = 1 contribute nothing.
    for x in 2..p {
        let k = (a.exponent * ctx.dlog_unchecked(x) + b.exponent * ctx.dlog_unchecked(p + 1 - x)) % order;
        acc += ctx.omega_power(k) as u128;
    }
    Residue((acc % ctx.modulus() as u128) as u64)
}

/// `J_a(A, B) = sum over t1 + t2 = a of A(t1) B(t2)`.
pub fn jacobi_sum_generalized(ctx: &PrimeContext, a_char: Character, b_char: Character, a: i64) -> Result<Residue> {
    let a = ctx.fp(a);
    if a == 0 {
        return Err(Error::ZeroArgument);
    }
    let p = ctx.p() as i64;
    let mut acc = ctx.residue(0);
    for t1 in 1..p {
        let t2 = (a as i64 - t1).rem_euclid(p);
        if t2 == 0 {
            continue;
        }
        acc = ctx.add(acc, ctx.mul(char_eval(ctx, a_char, t1), char_eval(ctx, b_char, t2)));
    }
    Ok(acc)
}

/// Greene's binomial `B(-1)/p * J(A, B_bar)`.
pub fn binomial(ctx: &PrimeContext, a: Character, b: Character) -> ScaledResidue {
    let j = jacobi_sum(ctx, a, b.inverse());
    let v = ctx.mul(char_eval(ctx, b, -1), j);
    ctx.scaled_mul(ctx.scaled_from_residue(v), ctx.scaled_p_pow(-1))
}
