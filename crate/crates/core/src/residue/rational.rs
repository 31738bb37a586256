use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational `numerator / p^k`, kept reduced (p does not divide the
/// numerator unless `k == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PPowerRational {
    p: u64,
    num: BigInt,
    k: u32,
}

impl PPowerRational {
    pub fn new(p: u64, num: impl Into<BigInt>, k: u32) -> Self {
        let mut r = PPowerRational { p, num: num.into(), k };
        r.reduce();
        r
    }

    pub fn from_integer(p: u64, n: impl Into<BigInt>) -> Self {
        Self::new(p, n, 0)
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, 0, 0)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        let p = BigInt::from(self.p);
        while self.k > 0 && (&self.num % &p).is_zero() {
            self.num /= &p;
            self.k -= 1;
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// The exponent k of the denominator p^k.
    pub fn p_exponent(&self) -> u32 {
        self.k
    }

    pub fn is_integer(&self) -> bool {
        self.k == 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.num.clone())
    }

    pub fn denominator(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.k as usize)
    }

    /// Multiply by `p^e` (e may be negative).
    pub fn scale_p(&self, e: i64) -> Self {
        if e >= 0 {
            Self::new(self.p, &self.num * num_traits::pow(BigInt::from(self.p), e as usize), self.k)
        } else {
            Self::new(self.p, self.num.clone(), self.k + (-e) as u32)
        }
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.denominator())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, BigInt::one(), 0)
    }
}

impl fmt::Display for PPowerRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

fn align(a: &PPowerRational, b: &PPowerRational) -> (BigInt, BigInt, u32) {
    assert_eq!(a.p, b.p, "mixed primes");
    let k = a.k.max(b.k);
    let p = BigInt::from(a.p);
    let an = &a.num * num_traits::pow(p.clone(), (k - a.k) as usize);
    let bn = &b.num * num_traits::pow(p, (k - b.k) as usize);
    (an, bn, k)
}

impl Add for &PPowerRational {
    type Output = PPowerRational;
    fn add(self, rhs: &PPowerRational) -> PPowerRational {
        let (a, b, k) = align(self, rhs);
        PPowerRational::new(self.p, a + b, k)
    }
}

impl Sub for &PPowerRational {
    type Output = PPowerRational;
    fn sub(self, rhs: &PPowerRational) -> PPowerRational {
        let (a, b, k) = align(self, rhs);
        PPowerRational::new(self.p, a - b, k)
    }
}

impl Mul for &PPowerRational {
    type Output = PPowerRational;
    fn mul(self, rhs: &PPowerRational) -> PPowerRational {
        assert_eq!(self.p, rhs.p, "mixed primes");
        PPowerRational::new(self.p, &self.num * &rhs.num, self.k + rhs.k)
    }
}

impl Neg for &PPowerRational {
    type Output = PPowerRational;
    fn neg(self) -> PPowerRational {
        PPowerRational { p: self.p, num: -&self.num, k: self.k }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PPowerRational {
            type Output = PPowerRational;
            fn $m(self, rhs: PPowerRational) -> PPowerRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PPowerRational {
    type Output = PPowerRational;
    fn neg(self) -> PPowerRational {
        -&self
    }
}

impl PPowerRational {
    /// Multiply by an integer.
    pub fn times(&self, n: impl Into<BigInt>) -> Self {
        Self::new(self.p, &self.num * n.into(), self.k)
    }
}
