//! Additive polynomials `P(x) = sum a_i x^(p^i)` and the surjectivity oracle.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldCtx, EXHAUSTIVE_BOUND};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePoly {
    ctx: FieldCtx,
    coeffs: Vec<Coeff>,
}

impl AdditivePoly {
    /// `coeffs[i]` multiplies `x^(p^i)`. Trailing zeros are dropped; the
    /// result must be nonzero, and of degree 0 in characteristic 0.
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<Coeff>) -> Result<Self> {
        if coeffs.iter().any(|c| !ctx.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        while coeffs.last().is_some_and(|c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroAdditivePoly);
        }
        if ctx.characteristic() == 0 && coeffs.len() > 1 {
            return Err(Error::NonlinearInCharZero);
        }
        Ok(AdditivePoly {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    /// `x^q - x` over a finite field.
    pub fn canonical(ctx: &FieldCtx) -> Result<Self> {
        if !ctx.is_finite() {
            return Err(Error::CharacteristicZero);
        }
        let mut coeffs = vec![ctx.zero(); ctx.degree() as usize + 1];
        coeffs[0] = ctx.from_int(-1);
        coeffs[ctx.degree() as usize] = ctx.one();
        AdditivePoly::new(ctx, coeffs)
    }

    /// `x^(p^n) + x`.
    pub fn artin_schreier(ctx: &FieldCtx, n: u32) -> Result<Self> {
        let mut coeffs = vec![ctx.zero(); n as usize + 1];
        coeffs[0] = ctx.one();
        coeffs[n as usize] = ctx.add(&coeffs[n as usize], &ctx.one());
        AdditivePoly::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    /// `n` with `a_n` the leading coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Coeff {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, c: &Coeff) -> Result<Coeff> {
        additive_eval(self, c)
    }

    /// `P(x) = sum a_i F^i(x)` with `F` the termwise Frobenius.
    pub fn eval_series(&self, x: &Series) -> Result<Series> {
        if x.ctx() != &self.ctx {
            return Err(Error::FieldMismatch);
        }
        let mut acc = Series::zero(&self.ctx);
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ctx.is_zero(a) {
                continue;
            }
            let fx = if i == 0 { x.clone() } else { x.frobenius(i as i64)? };
            acc = acc.add(&fx.scale(a))?;
        }
        Ok(acc)
    }

    /// `P = F^j o Q` with `Q` separable.
    pub fn separable_part(&self) -> (AdditivePoly, u32) {
        let j = self
            .coeffs
            .iter()
            .position(|c| !self.ctx.is_zero(c))
            .unwrap();
        if j == 0 {
            return (self.clone(), 0);
        }
        let coeffs = self.coeffs[j..]
            .iter()
            .map(|c| self.ctx.frobenius(c, -(j as i64)).unwrap())
            .collect();
        (
            AdditivePoly {
                ctx: self.ctx.clone(),
                coeffs,
            },
            j as u32,
        )
    }

    /// Some `c` with `P(c) = b`, by exhaustive search.
    pub fn preimage(&self, b: &Coeff) -> Result<Option<Coeff>> {
        if self.ctx.characteristic() == 0 {
            return Ok(Some(self.ctx.div(b, &self.coeffs[0])?));
        }
        for c in self.ctx.elements()? {
            if &self.eval(&c)? == b {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

pub fn additive_eval(p: &AdditivePoly, c: &Coeff) -> Result<Coeff> {
    let ctx = &p.ctx;
    if !ctx.contains(c) {
        return Err(Error::FieldMismatch);
    }
    let mut acc = ctx.zero();
    let mut power = c.clone();
    for (i, a) in p.coeffs.iter().enumerate() {
        if i > 0 {
            power = ctx.frobenius(&power, 1)?;
        }
        acc = ctx.add(&acc, &ctx.mul(a, &power));
    }
    Ok(acc)
}

impl fmt::Display for AdditivePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.characteristic().max(1);
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if self.ctx.is_zero(a) {
                continue;
            }
            let mono = match p.checked_pow(i as u32) {
                Some(1) => "x".to_string(),
                Some(d) => format!("x^{d}"),
                None => format!("x^{p}^{i}"),
            };
            let c = self.ctx.format_coeff(a);
            parts.push(if self.ctx.is_one(a) {
                mono
            } else if c.contains('+') || c.contains('/') || c.starts_with('-') {
                format!("({c})*{mono}")
            } else {
                format!("{c}*{mono}")
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisA {
    Satisfies,
    FailsWithWitness(Coeff),
}

/// Whether `P` (default `x^q - x`) is surjective on the coefficient field.
/// Characteristic 0 satisfies the hypothesis by convention.
pub fn hypothesis_a_check(ctx: &FieldCtx, p: Option<&AdditivePoly>) -> Result<HypothesisA> {
    if ctx.characteristic() == 0 {
        return Ok(HypothesisA::Satisfies);
    }
    let canonical;
    let p = match p {
        Some(p) if p.ctx() != ctx => return Err(Error::FieldMismatch),
        Some(p) => p,
        None => {
            canonical = AdditivePoly::canonical(ctx)?;
            &canonical
        }
    };
    let q = ctx.order().unwrap();
    if q > EXHAUSTIVE_BOUND {
        return Err(Error::ExhaustiveBound { q });
    }
    let mut hit = vec![false; q as usize];
    for c in ctx.elements()? {
        if let Coeff::Finite(v) = p.eval(&c)? {
            hit[v as usize] = true;
        }
    }
    Ok(match hit.iter().position(|&h| !h) {
        Some(b) => HypothesisA::FailsWithWitness(Coeff::Finite(b as u64)),
        None => HypothesisA::Satisfies,
    })
}
