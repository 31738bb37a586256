use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::context::{inv_mod, mul_mod, PrimeContext, Residue};
use super::rational::PPowerRational;
use crate::error::{Error, Result};

/// Absolute precision carried by an exact zero.
pub const EXACT: i64 = i64::MAX / 4;

/// A p-adic number `unit * p^valuation` known to finite precision.
///
/// `Unit` keeps `digits` significant p-adic digits of the unit (so the value is
/// known modulo `p^(valuation + digits)`); the unit is stored reduced modulo
/// `p^digits`, which makes structural equality meaningful. `Zero` records that
/// the value is congruent to zero modulo `p^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaledResidue {
    Zero { precision: i64 },
    Unit { valuation: i64, unit: u64, digits: u32 },
}

impl ScaledResidue {
    pub fn exact_zero() -> Self {
        ScaledResidue::Zero { precision: EXACT }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScaledResidue::Zero { .. })
    }

    /// Exponent `k` such that the value is known modulo `p^k`.
    pub fn abs_precision(&self) -> i64 {
        match *self {
            ScaledResidue::Zero { precision } => precision,
            ScaledResidue::Unit { valuation, digits, .. } => valuation + digits as i64,
        }
    }

    /// Valuation of a unit; `None` for the zero marker.
    pub fn valuation(&self) -> Option<i64> {
        match *self {
            ScaledResidue::Zero { .. } => None,
            ScaledResidue::Unit { valuation, .. } => Some(valuation),
        }
    }

    /// Valuation, or the known lower bound for a zero marker.
    fn floor_valuation(&self) -> i64 {
        match *self {
            ScaledResidue::Zero { precision } => precision,
            ScaledResidue::Unit { valuation, .. } => valuation,
        }
    }
}

impl fmt::Display for ScaledResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScaledResidue::Zero { precision } if precision >= EXACT => write!(f, "0"),
            ScaledResidue::Zero { precision } => write!(f, "O(p^{precision})"),
            ScaledResidue::Unit { valuation, unit, digits } => {
                write!(f, "{unit}*p^{valuation} + O(p^{})", valuation + digits as i64)
            }
        }
    }
}

impl PrimeContext {
    fn unit_from_parts(&self, valuation: i64, unit: u64, digits: u32) -> ScaledResidue {
        debug_assert!(digits >= 1 && digits <= self.precision());
        debug_assert!(!unit.is_multiple_of(self.p()));
        ScaledResidue::Unit { valuation, unit: unit % self.p_pow(digits), digits }
    }

    /// Same value, forgetting everything beyond `p^k`.
    pub fn scaled_truncate(&self, a: ScaledResidue, k: i64) -> ScaledResidue {
        if k >= a.abs_precision() {
            return a;
        }
        match a {
            ScaledResidue::Zero { .. } => ScaledResidue::Zero { precision: k },
            ScaledResidue::Unit { valuation, .. } if k <= valuation => ScaledResidue::Zero { precision: k },
            ScaledResidue::Unit { valuation, unit, .. } => self.unit_from_parts(valuation, unit, (k - valuation) as u32),
        }
    }

    /// Interpret a residue mod p^N as a p-adic number known to N digits.
    pub fn scaled_from_residue(&self, r: Residue) -> ScaledResidue {
        self.scaled_digits(r.0, 0, self.precision())
    }

    /// `x * p^shift` where `x` is known modulo `p^digits`.
    fn scaled_digits(&self, x: u64, shift: i64, digits: u32) -> ScaledResidue {
        let x = x % self.p_pow(digits);
        if x == 0 {
            return ScaledResidue::Zero { precision: shift + digits as i64 };
        }
        let mut v = 0u32;
        let mut u = x;
        while u.is_multiple_of(self.p()) {
            u /= self.p();
            v += 1;
        }
        self.unit_from_parts(shift + v as i64, u, digits - v)
    }

    pub fn scaled_from_i64(&self, x: i64) -> ScaledResidue {
        self.scaled_from_bigint(&BigInt::from(x))
    }

    /// An exact integer, carried to N significant digits.
    pub fn scaled_from_bigint(&self, x: &BigInt) -> ScaledResidue {
        if x.is_zero() {
            return ScaledResidue::exact_zero();
        }
        let p = BigInt::from(self.p());
        let mut v = 0i64;
        let mut u = x.clone();
        while (&u % &p).is_zero() {
            u /= &p;
            v += 1;
        }
        let r = self.from_bigint(&u);
        self.unit_from_parts(v, r.0, self.precision())
    }

    pub fn scaled_from_rational(&self, x: &PPowerRational) -> ScaledResidue {
        let v = self.scaled_from_bigint(x.numerator());
        self.scaled_mul(v, self.scaled_p_pow(-(x.p_exponent() as i64)))
    }

    /// An exact rational number whose denominator may contain powers of p.
    pub fn scaled_from_ratio(&self, x: &BigRational) -> Result<ScaledResidue> {
        let num = self.scaled_from_bigint(x.numer());
        let den = self.scaled_from_bigint(x.denom());
        self.scaled_div(num, den)
    }

    /// The exact value `p^k`.
    pub fn scaled_p_pow(&self, k: i64) -> ScaledResidue {
        self.unit_from_parts(k, 1, self.precision())
    }

    pub fn scaled_one(&self) -> ScaledResidue {
        self.scaled_p_pow(0)
    }

    pub fn scaled_neg(&self, a: ScaledResidue) -> ScaledResidue {
        match a {
            ScaledResidue::Unit { valuation, unit, digits } => {
                let m = self.p_pow(digits);
                ScaledResidue::Unit { valuation, unit: (m - unit) % m, digits }
            }
            z => z,
        }
    }

    pub fn scaled_mul(&self, a: ScaledResidue, b: ScaledResidue) -> ScaledResidue {
        use ScaledResidue::*;
        match (a, b) {
            (Zero { precision: pa }, Zero { precision: pb }) => Zero { precision: pa.saturating_add(pb).min(EXACT) },
            (Zero { precision }, Unit { valuation, .. }) | (Unit { valuation, .. }, Zero { precision }) => {
                Zero { precision: if precision >= EXACT { EXACT } else { precision + valuation } }
            }
            (Unit { valuation: va, unit: ua, digits: da }, Unit { valuation: vb, unit: ub, digits: db }) => {
                let digits = da.min(db);
                let m = self.p_pow(digits);
                Unit { valuation: va + vb, unit: mul_mod(ua % m, ub % m, m), digits }
            }
        }
    }

    pub fn scaled_mul_residue(&self, a: ScaledResidue, r: Residue) -> ScaledResidue {
        self.scaled_mul(a, self.scaled_from_residue(r))
    }

    pub fn scaled_inverse(&self, a: ScaledResidue) -> Result<ScaledResidue> {
        match a {
            ScaledResidue::Zero { .. } => Err(Error::PrecisionExhausted),
            ScaledResidue::Unit { valuation, unit, digits } => {
                let m = self.p_pow(digits);
                let inv = inv_mod(unit, m).expect("unit is prime to p");
                Ok(ScaledResidue::Unit { valuation: -valuation, unit: inv, digits })
            }
        }
    }

    pub fn scaled_div(&self, a: ScaledResidue, b: ScaledResidue) -> Result<ScaledResidue> {
        Ok(self.scaled_mul(a, self.scaled_inverse(b)?))
    }

    /// Sum of two p-adic numbers.
    ///
    /// The result is known to the smaller of the two absolute precisions. When
    /// that precision does not reach the lowest valuation among the nonzero
    /// operands no digit of the sum is guaranteed and the addition fails.
    pub fn scaled_add(&self, a: ScaledResidue, b: ScaledResidue) -> Result<ScaledResidue> {
        let abs = a.abs_precision().min(b.abs_precision());
        let units: Vec<(i64, u64)> = [a, b]
            .iter()
            .filter_map(|x| match *x {
                ScaledResidue::Unit { valuation, unit, .. } => Some((valuation, unit)),
                ScaledResidue::Zero { .. } => None,
            })
            .collect();
        if units.is_empty() {
            return Ok(ScaledResidue::Zero { precision: abs });
        }
        let vmin = units.iter().map(|u| u.0).min().unwrap();
        if abs <= vmin {
            return Err(Error::PrecisionExhausted);
        }
        let digits = (abs - vmin) as u32;
        debug_assert!(digits <= self.precision());
        let m = self.p_pow(digits);
        let mut s = 0u64;
        for &(v, u) in &units {
            let shift = v - vmin;
            if shift >= digits as i64 {
                continue;
            }
            let term = mul_mod(u % m, self.p_pow(shift as u32), m);
            s = ((s as u128 + term as u128) % m as u128) as u64;
        }
        Ok(self.scaled_digits(s, vmin, digits))
    }

    pub fn scaled_sub(&self, a: ScaledResidue, b: ScaledResidue) -> Result<ScaledResidue> {
        self.scaled_add(a, self.scaled_neg(b))
    }

    /// Sum of many terms.
    pub fn scaled_sum<I: IntoIterator<Item = ScaledResidue>>(&self, terms: I) -> Result<ScaledResidue> {
        terms.into_iter().try_fold(ScaledResidue::exact_zero(), |acc, t| self.scaled_add(acc, t))
    }

    /// True iff `a` and `b` agree to the smaller of their precisions.
    pub fn scaled_agree(&self, a: ScaledResidue, b: ScaledResidue) -> bool {
        match self.scaled_sub(a, b) {
            Ok(d) => d.is_zero(),
            // Neither operand has a digit the other can see.
            Err(_) => a.floor_valuation().min(b.floor_valuation()) >= a.abs_precision().min(b.abs_precision()),
        }
    }

    /// `a == b mod p^k`, failing if either side is not known that far.
    pub fn scaled_congruent(&self, a: ScaledResidue, b: ScaledResidue, k: i64) -> Result<bool> {
        let available = a.abs_precision().min(b.abs_precision());
        if available < k {
            return Err(Error::InsufficientPrecision { available, required: k });
        }
        let a = self.scaled_truncate(a, k);
        let b = self.scaled_truncate(b, k);
        Ok(self.scaled_agree(a, b))
    }

    /// The unique integer `z` with `|z| <= bound` represented by `a`.
    ///
    /// Requires nonnegative valuation and `p^precision > 2 * bound`.
    pub fn scaled_lift_integer(&self, a: ScaledResidue, bound: &BigInt) -> Result<BigInt> {
        let abs = a.abs_precision();
        let p = BigInt::from(self.p());
        let needed = bound * 2u32;
        let modulus = if abs >= EXACT {
            return Ok(BigInt::zero());
        } else if abs < 0 {
            return Err(Error::InsufficientPrecision { available: abs, required: 1 });
        } else {
            num_traits::pow(p.clone(), abs as usize)
        };
        if modulus <= needed {
            let mut required = 0i64;
            let mut m = BigInt::one();
            while m <= needed {
                m *= &p;
                required += 1;
            }
            return Err(Error::InsufficientPrecision { available: abs, required });
        }
        let value = match a {
            ScaledResidue::Zero { .. } => BigInt::zero(),
            ScaledResidue::Unit { valuation, unit, .. } => {
                if valuation < 0 {
                    return Err(Error::BadArgument("value is not p-integral".into()));
                }
                BigInt::from(unit) * num_traits::pow(p.clone(), valuation as usize)
            }
        };
        let mut z = value.mod_floor(&modulus);
        if z > &modulus / 2u32 {
            z -= &modulus;
        }
        Ok(z)
    }

    /// Value modulo `p^k` for a p-integral number known at least that far.
    pub fn scaled_to_residue(&self, a: ScaledResidue, k: u32) -> Result<u64> {
        if a.abs_precision() < k as i64 {
            return Err(Error::InsufficientPrecision { available: a.abs_precision(), required: k as i64 });
        }
        match a {
            ScaledResidue::Zero { .. } => Ok(0),
            ScaledResidue::Unit { valuation, unit, .. } => {
                if valuation < 0 {
                    return Err(Error::BadArgument("value is not p-integral".into()));
                }
                if valuation >= k as i64 {
                    return Ok(0);
                }
                let m = self.p_pow(k);
                Ok(mul_mod(unit % m, self.p_pow(valuation as u32), m))
            }
        }
    }

    /// Render with the actual prime in place of `p`.
    pub fn scaled_display(&self, a: ScaledResidue) -> String {
        let p = self.p();
        match a {
            ScaledResidue::Zero { precision } if precision >= EXACT => "0".to_string(),
            ScaledResidue::Zero { precision } => format!("O({p}^{precision})"),
            ScaledResidue::Unit { valuation, unit, digits } => {
                let signed = if unit > self.p_pow(digits) / 2 { unit as i128 - self.p_pow(digits) as i128 } else { unit as i128 };
                format!("{signed}*{p}^{valuation} + O({p}^{})", valuation + digits as i64)
            }
        }
    }

    /// Exact rational value `unit * p^valuation` of the stored digits.
    pub fn scaled_to_ratio(&self, a: ScaledResidue) -> BigRational {
        match a {
            ScaledResidue::Zero { .. } => BigRational::zero(),
            ScaledResidue::Unit { valuation, unit, .. } => {
                let p = BigInt::from(self.p());
                let u = BigRational::from_integer(BigInt::from(unit));
                if valuation >= 0 {
                    u * BigRational::from_integer(num_traits::pow(p, valuation as usize))
                } else {
                    u / BigRational::from_integer(num_traits::pow(p, (-valuation) as usize))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::make_context;

    #[test]
    fn multiplication_adds_valuations() {
        let ctx = make_context(5, 3, false).unwrap();
        let a = ctx.scaled_p_pow(1);
        let b = ctx.scaled_p_pow(-1);
        assert_eq!(ctx.scaled_mul(a, b), ctx.scaled_one());
    }

    #[test]
    fn cancellation_gives_zero_marker() {
        let ctx = make_context(5, 2, false).unwrap();
        let one = ctx.scaled_one();
        let minus = ctx.scaled_from_residue(ctx.residue(24));
        let s = ctx.scaled_add(one, minus).unwrap();
        assert_eq!(s, ScaledResidue::Zero { precision: 2 });
    }

    #[test]
    fn addend_below_precision_is_absorbed() {
        let ctx = make_context(5, 2, false).unwrap();
        let one = ctx.scaled_one();
        let tiny = ctx.scaled_p_pow(2);
        let s = ctx.scaled_add(one, tiny).unwrap();
        assert_eq!(s, ScaledResidue::Unit { valuation: 0, unit: 1, digits: 2 });
    }

    #[test]
    fn precision_loss_is_recorded() {
        let ctx = make_context(5, 3, false).unwrap();
        // 1 + 4 = 5 leaves two guaranteed digits above p^1.
        let s = ctx.scaled_add(ctx.scaled_one(), ctx.scaled_from_i64(4)).unwrap();
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.abs_precision(), 3);
        // A value known to p^1 cannot absorb one with valuation 2.
        let coarse = ScaledResidue::Zero { precision: 1 };
        assert_eq!(ctx.scaled_add(coarse, ctx.scaled_p_pow(2)), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn lift_recovers_small_integers() {
        let ctx = make_context(7, 4, false).unwrap();
        let b = BigInt::from(1200);
        for z in [-840i64, -714, 0, 1, 343, -1200] {
            let s = ctx.scaled_from_i64(z);
            assert_eq!(ctx.scaled_lift_integer(s, &b).unwrap(), BigInt::from(z));
        }
        let coarse = ctx.scaled_truncate(ctx.scaled_from_i64(-840), 3);
        assert!(matches!(ctx.scaled_lift_integer(coarse, &b), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn congruence_needs_precision() {
        let ctx = make_context(7, 2, false).unwrap();
        let a = ctx.scaled_from_i64(50);
        let b = ctx.scaled_from_i64(1);
        assert!(ctx.scaled_congruent(a, b, 2).unwrap());
        let a3 = ctx.scaled_mul(a, ctx.scaled_p_pow(-1));
        assert!(matches!(ctx.scaled_congruent(a3, b, 2), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn rational_conversion() {
        let ctx = make_context(5, 2, false).unwrap();
        let r = BigRational::new(BigInt::from(3), BigInt::from(5));
        let s = ctx.scaled_from_ratio(&r).unwrap();
        assert_eq!(s, ScaledResidue::Unit { valuation: -1, unit: 3, digits: 2 });
        assert_eq!(ctx.scaled_to_ratio(s), r);
    }
}
