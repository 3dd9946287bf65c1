//! Rational powers of monic series.
//!
//! For `x = t^m (1 + eps)` with `v(eps) > 0`, `x^i = t^(m i) (1 + eps)^i` and
//! the second factor is a binomial series. In characteristic p the binomial
//! coefficients only make sense when p does not divide the denominator of the
//! exponent, so `i` is split as `p^b q` and `(1 + eps)^i` is taken as the
//! termwise Frobenius image `((1 + eps)^q)^(p^b)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldCtx};
use crate::rat::{Cap, Rat};
use crate::series::Series;

/// `i (i-1) ... (i-n+1) / n!` mapped into `ctx`.
pub fn rat_binomial(ctx: &FieldCtx, i: &Rat, n: u64) -> Result<Coeff> {
    let p = ctx.characteristic();
    if p == 0 {
        let mut acc = BigRational::one();
        for j in 0..n {
            acc = acc * (i.as_big() - BigRational::from_integer(j.into()))
                / BigRational::from_integer((j + 1).into());
        }
        return Ok(Coeff::Rational(acc));
    }
    let digits = p_adic_digits(i, p, n)?;
    let table = SmallBinomials::new(p, n);
    Ok(ctx.from_int(lucas(&digits, n, p, &table) as i64))
}

/// Binomial coefficients `binom(i, n)` for `n = 0..count`.
fn binomial_row(ctx: &FieldCtx, i: &Rat, count: u64) -> Result<Vec<Coeff>> {
    let p = ctx.characteristic();
    let mut out = Vec::with_capacity(count as usize);
    if count == 0 {
        return Ok(out);
    }
    if p == 0 {
        let mut acc = BigRational::one();
        out.push(Coeff::Rational(acc.clone()));
        for j in 1..count {
            acc = acc * (i.as_big() - BigRational::from_integer((j - 1).into()))
                / BigRational::from_integer(j.into());
            out.push(Coeff::Rational(acc.clone()));
        }
        return Ok(out);
    }
    let max_n = count - 1;
    if max_n < p {
        // every j+1 <= max_n is a unit mod p
        let q = ctx.from_rational(i.as_big())?;
        let mut acc = ctx.one();
        out.push(acc.clone());
        for j in 1..count {
            let num = ctx.sub(&q, &ctx.from_int((j - 1) as i64));
            let den = ctx.from_int(j as i64);
            acc = ctx.div(&ctx.mul(&acc, &num), &den)?;
            out.push(acc.clone());
        }
        return Ok(out);
    }
    let digits = p_adic_digits(i, p, max_n)?;
    let table = SmallBinomials::new(p, max_n);
    for n in 0..count {
        out.push(ctx.from_int(lucas(&digits, n, p, &table) as i64));
    }
    Ok(out)
}

/// Base-p digits of the p-adic integer `i`, enough of them to cover `n`.
fn p_adic_digits(i: &Rat, p: u64, n: u64) -> Result<Vec<u64>> {
    let pb = BigInt::from(p);
    if (i.denom() % &pb).is_zero() {
        return Err(Error::DenominatorDivisibleByP(i.to_string()));
    }
    let mut len = 1u32;
    let mut pw = p as u128;
    while pw <= n as u128 {
        pw *= p as u128;
        len += 1;
    }
    let modulus = pb.pow(len);
    let inv = {
        let e = i.denom().extended_gcd(&modulus);
        e.x.mod_floor(&modulus)
    };
    let mut value = (i.numer() * inv).mod_floor(&modulus);
    let mut digits = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let (q, r) = value.div_rem(&pb);
        digits.push(r.to_u64().unwrap());
        value = q;
    }
    Ok(digits)
}

struct SmallBinomials {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl SmallBinomials {
    fn new(p: u64, n: u64) -> Self {
        // digits of n are < p, and are also bounded by n itself
        let size = (p.min(n + 1)) as usize;
        let mut fact = vec![1u64; size.max(1)];
        for k in 1..size {
            fact[k] = mulmod(fact[k - 1], k as u64, p);
        }
        let inv_fact = fact.iter().map(|&f| powmod(f, p - 2, p)).collect();
        SmallBinomials { p, fact, inv_fact }
    }

    fn binom(&self, a: u64, b: u64) -> u64 {
        if b > a {
            return 0;
        }
        // a may exceed the table when p > n; fall back to the product form
        if (a as usize) < self.fact.len() {
            return mulmod(
                self.fact[a as usize],
                mulmod(self.inv_fact[b as usize], self.inv_fact[(a - b) as usize], self.p),
                self.p,
            );
        }
        let mut acc = 1u64;
        for j in 0..b {
            acc = mulmod(acc, (a - j) % self.p, self.p);
        }
        mulmod(acc, self.inv_fact[b as usize], self.p)
    }
}

fn lucas(digits: &[u64], mut n: u64, p: u64, table: &SmallBinomials) -> u64 {
    let mut acc = 1u64;
    for &d in digits {
        let nk = n % p;
        n /= p;
        acc = mulmod(acc, table.binom(d, nk), p);
        if acc == 0 {
            return 0;
        }
    }
    debug_assert_eq!(n, 0);
    acc
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// `sum_n binom(i, n) eps^n`, certified below `rel` (and below whatever the
/// precision of `eps` allows). Requires `v(eps) > 0`.
fn binomial_series(eps: &Series, i: &Rat, rel: &Rat) -> Result<Series> {
    let ctx = eps.ctx();
    let rel_cap = Cap::Finite(rel.clone());
    let step = match eps.valuation_bound() {
        Cap::Finite(s) => s,
        Cap::Infinite => return Ok(Series::one(ctx).truncate(&rel_cap)),
    };
    debug_assert!(step.is_positive());
    // terms with n * v(eps) >= rel vanish below the cap
    let count = if rel.is_positive() {
        (rel / &step).ceil().to_u64().ok_or_else(|| {
            Error::InsufficientPrecision(format!("binomial expansion to {rel} is too long"))
        })?
    } else {
        0
    };
    let coeffs = binomial_row(ctx, i, count)?;
    let eps = eps.truncate(&rel_cap);
    let mut acc: BTreeMap<Rat, Coeff> = BTreeMap::new();
    let mut cap = rel_cap.clone();
    if eps.is_exact() && eps.len() == 1 {
        let (e, c) = eps.leading_term().unwrap();
        let mut c_n = ctx.one();
        let mut e_n = Rat::zero();
        for (n, b) in coeffs.iter().enumerate() {
            if n > 0 {
                c_n = ctx.mul(&c_n, c);
                e_n = &e_n + e;
            }
            if !ctx.is_zero(b) {
                acc.insert(e_n.clone(), ctx.mul(b, &c_n));
            }
        }
        return Ok(Series::from_map(ctx, acc, cap));
    }
    let mut power = Series::one(ctx);
    for (n, b) in coeffs.iter().enumerate() {
        if n > 0 {
            power = power.mul(&eps)?.truncate(&rel_cap);
        }
        cap = cap.min(power.cap().clone());
        if ctx.is_zero(b) {
            continue;
        }
        for (e, c) in power.terms() {
            let term = ctx.mul(b, c);
            match acc.get_mut(e) {
                Some(slot) => *slot = ctx.add(slot, &term),
                None => {
                    acc.insert(e.clone(), term);
                }
            }
        }
    }
    Ok(Series::from_map(ctx, acc, cap))
}

fn check_base(x: &Series) -> Result<()> {
    match x.leading_coeff() {
        None => Err(Error::NoLeadingTerm),
        Some(_) if !x.is_monic() => Err(Error::NotMonic),
        Some(_) => Ok(()),
    }
}

/// `x^i` for monic `x`, certified below at most `requested_cap`.
pub fn pow_rat(x: &Series, i: &Rat, requested_cap: &Rat) -> Result<Series> {
    check_base(x)?;
    let ctx = x.ctx();
    if i.is_zero() {
        return Ok(Series::one(ctx));
    }
    if i == &Rat::one() {
        return Ok(x.clone());
    }
    let (m, _, eps) = x.normalize()?;
    let shift = &m * i;
    if eps.is_exact_zero() {
        return Ok(Series::monomial(ctx, ctx.one(), shift));
    }
    let rel = requested_cap - &shift;
    let p = ctx.characteristic();
    let body = if p == 0 {
        binomial_series(&eps, i, &rel)?
    } else {
        let b = i.p_adic_valuation(p).expect("nonzero exponent");
        let q = i.scale_pow(p, -b);
        let inner = binomial_series(&eps, &q, &rel.scale_pow(p, -b))?;
        inner.frobenius(b)?
    };
    Ok(body.shift(&shift))
}

/// `x^(1/n)` for monic `x`.
pub fn nth_root(x: &Series, n: u64, requested_cap: &Rat) -> Result<Series> {
    assert!(n > 0, "root order must be positive");
    pow_rat(x, &Rat::new(1, n as i64), requested_cap)
}
