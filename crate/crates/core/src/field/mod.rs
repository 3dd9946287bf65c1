//! Coefficient fields: exact rationals and finite fields F_{p^e}.

mod finite;
mod fp_poly;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use finite::FiniteField;

use crate::error::{Error, Result};

/// Largest field order for which exhaustive searches are attempted.
pub const EXHAUSTIVE_BOUND: u64 = 1 << 20;

/// A coefficient. Finite-field elements are packed coefficient vectors and
/// only meaningful together with their [`FieldCtx`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coeff {
    Rational(BigRational),
    Finite(u64),
}

/// Descriptor of the coefficient field `k`.
#[derive(Clone, Debug)]
pub enum FieldCtx {
    Rationals,
    Finite(Arc<FiniteField>),
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldCtx::Rationals, FieldCtx::Rationals) => true,
            (FieldCtx::Finite(a), FieldCtx::Finite(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.characteristic() == b.characteristic() && a.modulus() == b.modulus())
            }
            _ => false,
        }
    }
}

impl Eq for FieldCtx {}

/// Parse a field description: `Q`, `F<q>`, or `F<q>:<modulus in x>`.
pub fn make_field(spec: &str) -> Result<FieldCtx> {
    spec.parse()
}

impl FromStr for FieldCtx {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "Q" {
            return Ok(FieldCtx::Rationals);
        }
        let bad = || Error::parse(1, format!("unknown field `{spec}`"));
        let rest = spec.strip_prefix('F').ok_or_else(bad)?;
        let (order, modulus) = match rest.split_once(':') {
            Some((o, m)) => (o, Some(m)),
            None => (rest, None),
        };
        let q: u64 = order.trim().parse().map_err(|_| bad())?;
        let (p, e) = prime_power(q)?;
        let modulus = modulus.map(|m| parse_modulus(m, p)).transpose()?;
        FieldCtx::finite(p, e, modulus)
    }
}

fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut n = q;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    if n != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, e))
}

fn parse_modulus(text: &str, p: u64) -> Result<Vec<u64>> {
    let expr = crate::expr::parse(text)?;
    let coeffs = crate::eval::integer_polynomial(&expr, "x")?;
    let pb = BigInt::from(p);
    Ok(coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap_or(0))
        .collect())
}

impl FieldCtx {
    pub fn rationals() -> Self {
        FieldCtx::Rationals
    }

    /// F_{p^e}; the modulus is given as ascending coefficients of a monic
    /// polynomial and defaults to the first irreducible one.
    pub fn finite(p: u64, e: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        Ok(FieldCtx::Finite(Arc::new(FiniteField::new(p, e, modulus)?)))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldCtx::Rationals => 0,
            FieldCtx::Finite(f) => f.characteristic(),
        }
    }

    /// `q` for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldCtx::Rationals => None,
            FieldCtx::Finite(f) => Some(f.order()),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            FieldCtx::Rationals => 1,
            FieldCtx::Finite(f) => f.degree(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldCtx::Finite(_))
    }

    pub fn finite_field(&self) -> Option<&FiniteField> {
        match self {
            FieldCtx::Rationals => None,
            FieldCtx::Finite(f) => Some(f),
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            FieldCtx::Rationals => Coeff::Rational(BigRational::zero()),
            FieldCtx::Finite(_) => Coeff::Finite(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            FieldCtx::Rationals => Coeff::Rational(BigRational::one()),
            FieldCtx::Finite(_) => Coeff::Finite(1),
        }
    }

    pub fn from_int(&self, n: i64) -> Coeff {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            FieldCtx::Rationals => Coeff::Rational(BigRational::from_integer(n.clone())),
            FieldCtx::Finite(f) => {
                let p = BigInt::from(f.characteristic());
                Coeff::Finite(n.mod_floor(&p).to_u64().unwrap())
            }
        }
    }

    /// Image of a rational number; in characteristic p the denominator must
    /// be a unit.
    pub fn from_rational(&self, r: &BigRational) -> Result<Coeff> {
        match self {
            FieldCtx::Rationals => Ok(Coeff::Rational(r.clone())),
            FieldCtx::Finite(f) => {
                let p = BigInt::from(f.characteristic());
                let d = r.denom().mod_floor(&p);
                if d.is_zero() {
                    return Err(Error::DenominatorDivisibleByP(r.to_string()));
                }
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                self.div(&n, &d)
            }
        }
    }

    /// `g`, the class of `x` modulo the defining polynomial (degree > 1 only).
    pub fn generator(&self) -> Option<Coeff> {
        match self {
            FieldCtx::Finite(f) if f.degree() > 1 => Some(Coeff::Finite(f.generator())),
            _ => None,
        }
    }

    pub fn is_zero(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Rational(r) => r.is_zero(),
            Coeff::Finite(a) => *a == 0,
        }
    }

    pub fn is_one(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Rational(r) => r.is_one(),
            Coeff::Finite(a) => *a == 1,
        }
    }

    /// Whether `c` is a valid element of this field.
    pub fn contains(&self, c: &Coeff) -> bool {
        match (self, c) {
            (FieldCtx::Rationals, Coeff::Rational(_)) => true,
            (FieldCtx::Finite(f), Coeff::Finite(a)) => *a < f.order(),
            _ => false,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (FieldCtx::Finite(f), Coeff::Finite(x), Coeff::Finite(y)) => Coeff::Finite(f.add(*x, *y)),
            (FieldCtx::Rationals, Coeff::Rational(x), Coeff::Rational(y)) => Coeff::Rational(x + y),
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (FieldCtx::Finite(f), Coeff::Finite(x)) => Coeff::Finite(f.neg(*x)),
            (FieldCtx::Rationals, Coeff::Rational(x)) => Coeff::Rational(-x),
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (FieldCtx::Finite(f), Coeff::Finite(x), Coeff::Finite(y)) => Coeff::Finite(f.mul(*x, *y)),
            (FieldCtx::Rationals, Coeff::Rational(x), Coeff::Rational(y)) => Coeff::Rational(x * y),
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        match (self, a) {
            (FieldCtx::Finite(f), Coeff::Finite(x)) => Ok(Coeff::Finite(f.inv(*x)?)),
            (FieldCtx::Rationals, Coeff::Rational(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Coeff::Rational(x.recip()))
                }
            }
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^n` for any integer `n` (negative powers need `a != 0`).
    pub fn pow(&self, a: &Coeff, n: &BigInt) -> Result<Coeff> {
        let base = if n.is_negative() { self.inv(a)? } else { a.clone() };
        let n = n.abs();
        match (self, &base) {
            (FieldCtx::Finite(f), Coeff::Finite(x)) => {
                // reduce modulo the group order; 0^n stays 0 for n > 0
                if *x == 0 {
                    return Ok(if n.is_zero() { self.one() } else { self.zero() });
                }
                let m = n.mod_floor(&BigInt::from(f.order() - 1)).to_u64().unwrap();
                Ok(Coeff::Finite(f.pow(*x, m)))
            }
            (FieldCtx::Rationals, Coeff::Rational(x)) => {
                let e: u32 = n
                    .to_u32()
                    .ok_or_else(|| Error::Eval(format!("exponent {n} too large")))?;
                Ok(Coeff::Rational(num_traits::pow::Pow::pow(x, e)))
            }
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    pub fn pow_i64(&self, a: &Coeff, n: i64) -> Result<Coeff> {
        self.pow(a, &BigInt::from(n))
    }

    /// `c^(p^b)`; negative `b` takes iterated p-th roots, which exist because
    /// finite fields are perfect.
    pub fn frobenius(&self, c: &Coeff, b: i64) -> Result<Coeff> {
        match (self, c) {
            (FieldCtx::Rationals, _) => Err(Error::CharacteristicZero),
            (FieldCtx::Finite(f), Coeff::Finite(x)) => {
                let k = b.rem_euclid(f.degree() as i64) as u32;
                Ok(Coeff::Finite(f.frobenius_pow(*x, k)))
            }
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    /// All `n`-th roots of `c` in the field, in canonical order.
    pub fn nth_roots(&self, c: &Coeff, n: u64) -> Result<Vec<Coeff>> {
        assert!(n > 0, "root order must be positive");
        if self.is_zero(c) {
            return Ok(vec![self.zero()]);
        }
        match (self, c) {
            (FieldCtx::Rationals, Coeff::Rational(x)) => rational_roots(x, n),
            (FieldCtx::Finite(f), Coeff::Finite(x)) => finite_roots(f, *x, n),
            _ => panic!("coefficient does not belong to {self}"),
        }
    }

    /// Iterator over all elements in canonical order (finite fields up to
    /// [`EXHAUSTIVE_BOUND`]).
    pub fn elements(&self) -> Result<impl Iterator<Item = Coeff>> {
        match self {
            FieldCtx::Rationals => Err(Error::Eval("the rationals are not enumerable".into())),
            FieldCtx::Finite(f) if f.order() > EXHAUSTIVE_BOUND => {
                Err(Error::ExhaustiveBound { q: f.order() })
            }
            FieldCtx::Finite(f) => Ok((0..f.order()).map(Coeff::Finite)),
        }
    }

    pub fn format_coeff(&self, c: &Coeff) -> String {
        match (self, c) {
            (_, Coeff::Rational(r)) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (FieldCtx::Finite(f), Coeff::Finite(a)) => f.format_element(*a),
            (FieldCtx::Rationals, Coeff::Finite(a)) => format!("<{a}>"),
        }
    }

    /// Parse a coefficient such as `3`, `-1/2`, `g+1` or `2*g^2`.
    pub fn parse_coeff(&self, text: &str) -> Result<Coeff> {
        let expr = crate::expr::parse(text)?;
        crate::eval::constant(self, &expr)
    }
}

fn rational_roots(x: &BigRational, n: u64) -> Result<Vec<Coeff>> {
    let irrational = || Error::IrrationalRoot(x.to_string());
    let n32 = u32::try_from(n).map_err(|_| irrational())?;
    let even = n % 2 == 0;
    if x.is_negative() && even {
        return Ok(Vec::new());
    }
    let root_int = |m: &BigInt| -> Option<BigInt> {
        let r = m.abs().nth_root(n32);
        (num_traits::pow::Pow::pow(&r, n32) == m.abs()).then_some(r)
    };
    let num = root_int(x.numer()).ok_or_else(irrational)?;
    let den = root_int(x.denom()).ok_or_else(irrational)?;
    let r = BigRational::new(num, den);
    Ok(if x.is_negative() {
        vec![Coeff::Rational(-r)]
    } else if even {
        vec![Coeff::Rational(r.clone()), Coeff::Rational(-r)]
    } else {
        vec![Coeff::Rational(r)]
    })
}

fn finite_roots(f: &FiniteField, x: u64, n: u64) -> Result<Vec<Coeff>> {
    let order = f.order() - 1;
    if let Some(k) = f.log(x) {
        // gamma^(j n) = gamma^k  <=>  j n = k (mod q-1)
        let g = n.gcd(&order);
        if k % g != 0 {
            return Ok(Vec::new());
        }
        let (n1, k1, m1) = (n / g, k / g, order / g);
        let j0 = if m1 == 1 {
            0
        } else {
            (k1 as u128 * mod_inverse(n1 % m1, m1) as u128 % m1 as u128) as u64
        };
        let mut roots: Vec<u64> = (0..g)
            .map(|t| f.exp(j0 + t * m1).unwrap())
            .collect();
        roots.sort_unstable();
        return Ok(roots.into_iter().map(Coeff::Finite).collect());
    }
    if f.order() > EXHAUSTIVE_BOUND {
        return Err(Error::ExhaustiveBound { q: f.order() });
    }
    Ok((1..f.order())
        .filter(|&r| f.pow(r, n) == x)
        .map(Coeff::Finite)
        .collect())
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rationals => write!(f, "Q"),
            FieldCtx::Finite(ff) if ff.degree() == 1 => write!(f, "F{}", ff.order()),
            FieldCtx::Finite(ff) => write!(f, "F{}:{}", ff.order(), ff.modulus_string()),
        }
    }
}
