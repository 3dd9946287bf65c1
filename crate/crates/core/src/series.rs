//! Generalized power series `sum c_i t^i` with rational exponents, stored as
//! a finite known part plus a certification cap.
//!
//! A series with cap `C` asserts that every coefficient at an exponent
//! `< C` is exactly the stored one (zero when absent); nothing is claimed at
//! or above `C`. Every operation derives the cap of its result from the caps
//! of its inputs so that the claim stays true whatever the unknown tails are.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldCtx};
use crate::rat::{Cap, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    ctx: FieldCtx,
    terms: BTreeMap<Rat, Coeff>,
    cap: Cap,
}

/// Result of asking for the valuation of a possibly truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rat),
    /// The exact zero series.
    Infinity,
    /// Nothing is known below the cap, so `v >= cap`.
    AtLeast(Rat),
}

pub(crate) fn cap_add(a: &Cap, b: &Cap) -> Cap {
    match (a, b) {
        (Cap::Finite(x), Cap::Finite(y)) => Cap::Finite(x + y),
        _ => Cap::Infinite,
    }
}

impl Series {
    /// Validated constructor: rejects zero coefficients, duplicate exponents
    /// and terms at or above the cap.
    pub fn new(
        ctx: &FieldCtx,
        terms: impl IntoIterator<Item = (Rat, Coeff)>,
        cap: Cap,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if !ctx.contains(&c) {
                return Err(Error::FieldMismatch);
            }
            if ctx.is_zero(&c) {
                return Err(Error::ZeroCoefficient(e));
            }
            if let Cap::Finite(k) = &cap {
                if &e >= k {
                    return Err(Error::TermAtOrAboveCap {
                        exponent: Box::new(e),
                        cap: Box::new(k.clone()),
                    });
                }
            }
            if map.insert(e.clone(), c).is_some() {
                return Err(Error::DuplicateExponent(e));
            }
        }
        Ok(Series {
            ctx: ctx.clone(),
            terms: map,
            cap,
        })
    }

    /// Build from an accumulated map, dropping zeros and anything the cap
    /// does not certify.
    pub(crate) fn from_map(ctx: &FieldCtx, mut terms: BTreeMap<Rat, Coeff>, cap: Cap) -> Self {
        if let Cap::Finite(k) = &cap {
            let _ = terms.split_off(k);
        }
        terms.retain(|_, c| !ctx.is_zero(c));
        Series {
            ctx: ctx.clone(),
            terms,
            cap,
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Series::from_map(ctx, BTreeMap::new(), Cap::Infinite)
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Series::constant(ctx, ctx.one())
    }

    /// The uniformizer `t`.
    pub fn t(ctx: &FieldCtx) -> Self {
        Series::monomial(ctx, ctx.one(), Rat::one())
    }

    pub fn constant(ctx: &FieldCtx, c: Coeff) -> Self {
        Series::monomial(ctx, c, Rat::zero())
    }

    pub fn monomial(ctx: &FieldCtx, c: Coeff, e: Rat) -> Self {
        Series::from_map(ctx, BTreeMap::from([(e, c)]), Cap::Infinite)
    }

    /// `O(t^cap)`: nothing known.
    pub fn unknown(ctx: &FieldCtx, cap: Rat) -> Self {
        Series::from_map(ctx, BTreeMap::new(), Cap::Finite(cap))
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn cap(&self) -> &Cap {
        &self.cap
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Rat, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.cap.is_infinite()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    /// Exact and supported at exponent 0 only (or zero).
    pub fn as_constant(&self) -> Option<Coeff> {
        if !self.is_exact() {
            return None;
        }
        match self.terms.len() {
            0 => Some(self.ctx.zero()),
            1 => self.terms.get(&Rat::zero()).cloned(),
            _ => None,
        }
    }

    /// The certified coefficient at `e`.
    pub fn coeff(&self, e: &Rat) -> Result<Coeff> {
        if !self.cap.covers(e) {
            return Err(Error::Uncertified(e.clone()));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(|| self.ctx.zero()))
    }

    pub fn leading_term(&self) -> Option<(&Rat, &Coeff)> {
        self.terms.iter().next()
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn valuation(&self) -> Valuation {
        match (self.leading_term(), &self.cap) {
            (Some((e, _)), _) => Valuation::Finite(e.clone()),
            (None, Cap::Infinite) => Valuation::Infinity,
            (None, Cap::Finite(c)) => Valuation::AtLeast(c.clone()),
        }
    }

    /// Lower bound for the valuation of the true series: the leading exponent
    /// if visible, otherwise the cap.
    pub fn valuation_bound(&self) -> Cap {
        match self.leading_term() {
            Some((e, _)) => Cap::Finite(e.clone()),
            None => self.cap.clone(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| self.ctx.is_one(c))
    }

    fn check_ctx(&self, other: &Series) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Forget everything at or above `cap`.
    pub fn truncate(&self, cap: &Cap) -> Series {
        let new_cap = self.cap.clone().min(cap.clone());
        Series::from_map(&self.ctx, self.terms.clone(), new_cap)
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        let cap = self.cap.clone().min(other.cap.clone());
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            match out.get_mut(e) {
                Some(v) => *v = self.ctx.add(v, c),
                None => {
                    out.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Series::from_map(&self.ctx, out, cap))
    }

    pub fn neg(&self) -> Series {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.ctx.neg(c)))
            .collect();
        Series::from_map(&self.ctx, terms, self.cap.clone())
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    /// Multiply by a constant.
    pub fn scale(&self, c: &Coeff) -> Series {
        if self.ctx.is_zero(c) {
            return Series::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), self.ctx.mul(x, c)))
            .collect();
        Series::from_map(&self.ctx, terms, self.cap.clone())
    }

    /// Multiply by `t^e`.
    pub fn shift(&self, e: &Rat) -> Series {
        let terms = self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect();
        Series::from_map(&self.ctx, terms, self.cap.shift(e))
    }

    /// Convolution. The product is certified below
    /// `min(cap_x + v(y), cap_y + v(x))`, with valuations bounded by caps
    /// when nothing is known.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        let cap = cap_add(&self.cap, &other.valuation_bound())
            .min(cap_add(&other.cap, &self.valuation_bound()));
        let mut out: BTreeMap<Rat, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if !cap.covers(&e) {
                    break;
                }
                let prod = self.ctx.mul(ca, cb);
                match out.get_mut(&e) {
                    Some(v) => *v = self.ctx.add(v, &prod),
                    None => {
                        out.insert(e, prod);
                    }
                }
            }
        }
        Ok(Series::from_map(&self.ctx, out, cap))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow_u64(&self, mut n: u64) -> Series {
        let mut acc = Series::one(&self.ctx);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Split `x = c t^v (1 + eps)`; returns `(v, c, eps)`.
    pub(crate) fn normalize(&self) -> Result<(Rat, Coeff, Series)> {
        let (v, c) = self.leading_term().ok_or(Error::NoLeadingTerm)?;
        let (v, c) = (v.clone(), c.clone());
        let cinv = self.ctx.inv(&c)?;
        let mut rest = self.terms.clone();
        rest.remove(&v);
        let eps = Series::from_map(&self.ctx, rest, self.cap.clone())
            .scale(&cinv)
            .shift(&-&v);
        Ok((v, c, eps))
    }

    /// `1/x` certified below `min(requested_cap, cap_x - 2 v(x))`, by the
    /// geometric series in `eps` where `x = c t^v (1 + eps)`. A monomial
    /// input inverts exactly.
    pub fn invert(&self, requested_cap: &Rat) -> Result<Series> {
        let (v, c, eps) = self.normalize()?;
        let cinv = self.ctx.inv(&c)?;
        if eps.is_exact_zero() {
            return Ok(Series::monomial(&self.ctx, cinv, -&v));
        }
        let target = Cap::Finite(requested_cap.clone())
            .min(self.cap.shift(&(-&v - &v)));
        // relative precision needed for the geometric sum
        let rel = target.shift(&v);
        let neg_eps = eps.neg().truncate(&rel);
        let step = neg_eps.valuation_bound();
        let mut sum = Series::one(&self.ctx).truncate(&rel);
        let mut power = Series::one(&self.ctx);
        let mut n: i64 = 0;
        loop {
            n += 1;
            // (-eps)^n lies entirely at or above n * v(eps)
            if let (Cap::Finite(s), Cap::Finite(r)) = (&step, &rel) {
                if &(s * &Rat::from_int(n)) >= r {
                    break;
                }
            }
            power = power.mul(&neg_eps)?.truncate(&rel);
            if power.is_exact_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.truncate(&rel).scale(&cinv).shift(&-&v))
    }

    /// Termwise `sum c t^e -> sum c^(p^b) t^(e p^b)`; a ring automorphism in
    /// characteristic p. The cap scales by `p^b`.
    pub fn frobenius(&self, b: i64) -> Result<Series> {
        let p = self.ctx.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(e.scale_pow(p, b), self.ctx.frobenius(c, b)?);
        }
        Ok(Series::from_map(&self.ctx, terms, self.cap.scale_pow(p, b)))
    }

    /// `sum c_i t^i -> sum c_i t^(r i)` for `r > 0`.
    pub fn scale_exponents(&self, r: &Rat) -> Result<Series> {
        if !r.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        let terms = self.terms.iter().map(|(e, c)| (e * r, c.clone())).collect();
        Ok(Series::from_map(&self.ctx, terms, self.cap.scale(r)))
    }

    /// Split into the parts with negative, zero and positive exponents.
    pub fn split_by_sign(&self) -> (Series, Coeff, Series) {
        let zero = Rat::zero();
        let mut neg = BTreeMap::new();
        let mut pos = BTreeMap::new();
        let mut c0 = self.ctx.zero();
        for (e, c) in &self.terms {
            if e < &zero {
                neg.insert(e.clone(), c.clone());
            } else if e > &zero {
                pos.insert(e.clone(), c.clone());
            } else {
                c0 = c.clone();
            }
        }
        let neg_cap = if self.cap.covers(&zero) {
            Cap::Infinite
        } else {
            self.cap.clone()
        };
        (
            Series::from_map(&self.ctx, neg, neg_cap),
            c0,
            Series::from_map(&self.ctx, pos, self.cap.clone()),
        )
    }

    /// The smaller of two caps; coefficients of both series are meaningful
    /// below it.
    pub fn joint_cap(&self, other: &Series) -> Cap {
        self.cap.clone().min(other.cap.clone())
    }

    /// True when both series have the same coefficients at every exponent
    /// below `bound` (which must not exceed either cap).
    pub fn agrees_below(&self, other: &Series, bound: &Cap) -> bool {
        if self.ctx != other.ctx || &self.joint_cap(other) < bound {
            return false;
        }
        let a: Vec<_> = self.terms.iter().take_while(|(e, _)| bound.covers(e)).collect();
        let b: Vec<_> = other.terms.iter().take_while(|(e, _)| bound.covers(e)).collect();
        a == b
    }

    /// Agreement below the joint cap.
    pub fn agrees(&self, other: &Series) -> bool {
        self.agrees_below(other, &self.joint_cap(other))
    }

    pub(crate) fn map_terms(&self, mut f: impl FnMut(&Rat, &Coeff) -> Result<(Rat, Coeff)>, cap: Cap) -> Result<Series> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (e2, c2) = f(e, c)?;
            terms.insert(e2, c2);
        }
        Ok(Series::from_map(&self.ctx, terms, cap))
    }

    /// Exponent denominators' least common multiple over the known support.
    pub fn exponent_denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .keys()
            .fold(BigInt::from(1), |acc, e| acc.lcm(e.denom()))
    }
}

fn format_exponent(e: &Rat) -> Option<String> {
    if e.is_zero() {
        None
    } else if e == &Rat::one() {
        Some("t".into())
    } else if e.is_integer() && e.is_positive() {
        Some(format!("t^{e}"))
    } else {
        Some(format!("t^({e})"))
    }
}

impl fmt::Display for Series {
    /// `c1*t^(e1) + c2*t^(e2) + ... + O(t^(cap))`; exact series omit the
    /// O-term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (negative, body) = match c {
                Coeff::Rational(r) => (
                    num_traits::Signed::is_negative(r),
                    self.ctx.format_coeff(&Coeff::Rational(num_traits::Signed::abs(r))),
                ),
                _ => (false, self.ctx.format_coeff(c)),
            };
            let compound = body.contains('+');
            let mono = format_exponent(e);
            let term = match mono {
                None if compound => format!("({body})"),
                None => body,
                Some(m) if body == "1" => m,
                Some(m) if compound => format!("({body})*{m}"),
                Some(m) => format!("{body}*{m}"),
            };
            match (first, negative) {
                (true, false) => write!(f, "{term}")?,
                (true, true) => write!(f, "-{term}")?,
                (false, false) => write!(f, " + {term}")?,
                (false, true) => write!(f, " - {term}")?,
            }
            first = false;
        }
        match &self.cap {
            Cap::Infinite if first => write!(f, "0"),
            Cap::Infinite => Ok(()),
            Cap::Finite(k) => {
                let o = format!("O({})", format_exponent(k).unwrap_or_else(|| "1".into()));
                if first {
                    write!(f, "{o}")
                } else {
                    write!(f, " + {o}")
                }
            }
        }
    }
}
