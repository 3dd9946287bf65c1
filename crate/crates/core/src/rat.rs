//! Exact rational exponents and certification caps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `self * base^k` for a possibly negative integer `k`.
    pub fn scale_pow(&self, base: u64, k: i64) -> Self {
        let f = BigInt::from(base).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Rat(&self.0 * BigRational::from_integer(f))
        } else {
            Rat(&self.0 / BigRational::from_integer(f))
        }
    }

    /// The exponent of `p` in this rational; `None` for zero.
    pub fn p_adic_valuation(&self, p: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        let count = |mut n: BigInt| {
            let mut k = 0i64;
            loop {
                let (q, r) = n.div_rem(&p);
                if !r.is_zero() {
                    return k;
                }
                n = q;
                k += 1;
            }
        };
        Some(count(self.numer().clone()) - count(self.denom().clone()))
    }

    pub fn min(self, other: Self) -> Self {
        Ord::min(self, other)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        let bad = || Error::parse(1, format!("invalid rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rat::new(n, d))
            }
            None => Ok(Rat::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// Certification bound of a series: every coefficient at an exponent
/// strictly below the cap is exactly known. `Infinite` marks an exact series.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Cap {
    Finite(Rat),
    Infinite,
}

impl Cap {
    pub fn finite(r: impl Into<Rat>) -> Self {
        Cap::Finite(r.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cap::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Cap::Finite(r) => Some(r),
            Cap::Infinite => None,
        }
    }

    /// True when coefficients at `e` are certified.
    pub fn covers(&self, e: &Rat) -> bool {
        match self {
            Cap::Finite(c) => e < c,
            Cap::Infinite => true,
        }
    }

    pub fn shift(&self, by: &Rat) -> Cap {
        match self {
            Cap::Finite(c) => Cap::Finite(c + by),
            Cap::Infinite => Cap::Infinite,
        }
    }

    /// Multiply by a positive rational.
    pub fn scale(&self, by: &Rat) -> Cap {
        debug_assert!(by.is_positive());
        match self {
            Cap::Finite(c) => Cap::Finite(c * by),
            Cap::Infinite => Cap::Infinite,
        }
    }

    pub fn scale_pow(&self, base: u64, k: i64) -> Cap {
        match self {
            Cap::Finite(c) => Cap::Finite(c.scale_pow(base, k)),
            Cap::Infinite => Cap::Infinite,
        }
    }

    pub fn min(self, other: Cap) -> Cap {
        Ord::min(self, other)
    }

    pub fn min_rat(self, other: &Rat) -> Cap {
        self.min(Cap::Finite(other.clone()))
    }
}

impl Ord for Cap {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cap::Finite(a), Cap::Finite(b)) => a.cmp(b),
            (Cap::Finite(_), Cap::Infinite) => Ordering::Less,
            (Cap::Infinite, Cap::Finite(_)) => Ordering::Greater,
            (Cap::Infinite, Cap::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Cap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rat> for Cap {
    fn from(r: Rat) -> Self {
        Cap::Finite(r)
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cap::Finite(r) => write!(f, "{r}"),
            Cap::Infinite => write!(f, "inf"),
        }
    }
}
