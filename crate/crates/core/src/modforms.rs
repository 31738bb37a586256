//! q-expansions of `q prod (1-q^2n)^4 (1-q^4n)^4` and its quadratic twist.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A power series in `q` truncated after `q^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesZ {
    coeffs: Vec<BigInt>,
}

impl SeriesZ {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        SeriesZ { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        SeriesZ { coeffs }
    }

    /// Highest power of q carried.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        self.coeffs.get(n).ok_or(Error::OrderTooSmall { have: self.order(), need: n })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiply in place by `1 - q^k`.
    pub fn mul_one_minus(&mut self, k: usize) {
        if k == 0 {
            self.coeffs.iter_mut().for_each(|c| *c = BigInt::zero());
            return;
        }
        for i in (k..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] -= &lo[i - k];
        }
    }

    /// Multiply by `q^s`, dropping what falls past the order.
    pub fn shift(&self, s: usize) -> Self {
        let len = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); len];
        coeffs[s..len].clone_from_slice(&self.coeffs[..(len - s)]);
        SeriesZ { coeffs }
    }

    /// Truncated product.
    pub fn mul(&self, other: &SeriesZ) -> SeriesZ {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        SeriesZ { coeffs }
    }
}

/// `a(n)` for `n <= upto`.
pub fn f1_coefficients(upto: usize) -> SeriesZ {
    let upto = upto.max(2);
    let mut s = SeriesZ::one(upto);
    for k in (2..=upto).step_by(2) {
        for _ in 0..4 {
            s.mul_one_minus(k);
        }
        if 2 * k <= upto {
            for _ in 0..4 {
                s.mul_one_minus(2 * k);
            }
        }
    }
    s.shift(1)
}

pub fn a_p(series: &SeriesZ, p: u64) -> Result<BigInt> {
    series.coeff(p as usize).cloned()
}

/// `b(p) = phi(-1) a(p)`.
pub fn b_p(series: &SeriesZ, p: u64) -> Result<BigInt> {
    let a = a_p(series, p)?;
    Ok(if p % 4 == 1 { a } else { -a })
}

/// `|a(p)| <= 2 p^{3/2}`, checked in integers as `a(p)^2 <= 4 p^3`.
pub fn within_deligne_bound(a: &BigInt, p: u64) -> bool {
    let p3 = BigInt::from(p).pow(3);
    a.abs().pow(2) <= p3 * 4u32
}
