//! Trace, additive equations on the trace-zero hyperplane, the
//! Artin-Schreier operator, the trace sign test and the leading-coefficient
//! norm.

use crate::additive::AdditivePoly;
use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::rat::{Cap, Rat};
use crate::series::Series;

/// The constant coefficient. Needs `cap > 0`.
pub fn trace(x: &Series) -> Result<Coeff> {
    x.coeff(&Rat::zero()).map_err(|_| {
        Error::InsufficientPrecision(format!("trace needs cap > 0, have {}", x.cap()))
    })
}

/// Solution of `P(x) = b` split along the sign of the exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveParts {
    /// Solves against the negative part of `b`; certified below the
    /// negative target.
    pub negative: Series,
    /// Preimage of the constant coefficient (zero when that is zero).
    pub constant: Coeff,
    /// Solves against the positive part of `b`.
    pub positive: Series,
}

impl SolveParts {
    pub fn combined(&self) -> Result<Series> {
        let ctx = self.negative.ctx();
        self.negative
            .add(&Series::constant(ctx, self.constant.clone()))?
            .add(&self.positive)
    }
}

/// Default target when the caller gives none: `min(0, v(b)) / 2` if `b` has
/// negative exponents, `fallback` otherwise.
pub fn default_target(b: &Series, fallback: &Rat) -> Rat {
    match b.leading_term() {
        Some((v, _)) if v.is_negative() => v / &Rat::from_int(2),
        _ => fallback.clone(),
    }
}

/// Solve `P(x) = b` with the negative part certified below `neg_target`
/// (which must be negative when there is one) and the positive part below
/// `pos_target`.
pub fn solve_additive_parts(
    p: &AdditivePoly,
    b: &Series,
    neg_target: &Rat,
    pos_target: &Rat,
) -> Result<SolveParts> {
    let ctx = p.ctx();
    if b.ctx() != ctx {
        return Err(Error::FieldMismatch);
    }
    if !b.cap().covers(&Rat::zero()) {
        return Err(Error::InsufficientPrecision(format!(
            "right-hand side needs cap > 0, have {}",
            b.cap()
        )));
    }
    if ctx.characteristic() == 0 {
        let a = &p.coeffs()[0];
        let (neg, c, pos) = b.split_by_sign();
        let inv = ctx.inv(a)?;
        return Ok(SolveParts {
            negative: neg.scale(&inv),
            constant: ctx.mul(&c, &inv),
            positive: pos.scale(&inv),
        });
    }
    // P = F^j o Q, so P(x) = b iff Q(x) = F^(-j)(b)
    let (q, j) = p.separable_part();
    let b = b.frobenius(-(j as i64))?;
    let (neg, c, pos) = b.split_by_sign();
    let constant = if ctx.is_zero(&c) {
        c
    } else {
        q.preimage(&c)?
            .ok_or_else(|| Error::NoSolution(ctx.format_coeff(&c)))?
    };
    let negative = if neg.is_empty() {
        Series::zero(ctx)
    } else {
        if !neg_target.is_negative() {
            return Err(Error::UnreachableCap(neg_target.clone()));
        }
        solve_negative(&q, &neg, neg_target)?
    };
    let positive = solve_positive(&q, &pos, pos_target)?;
    Ok(SolveParts {
        negative,
        constant,
        positive,
    })
}

/// A solution of `P(x) = b`, certified below `target` (and below what the
/// precision of `b` allows).
pub fn solve_additive(p: &AdditivePoly, b: &Series, target: &Rat) -> Result<Series> {
    solve_additive_parts(p, b, target, target)?.combined()
}

/// `Q(x) = b` for `b` supported on negative exponents: eliminate from the
/// most negative term with `x^(p^n)` dominating.
fn solve_negative(q: &AdditivePoly, b: &Series, target: &Rat) -> Result<Series> {
    let ctx = q.ctx();
    let p = ctx.characteristic();
    let n = q.degree() as i64;
    let lead_inv = ctx.inv(q.leading())?;
    let mut residual = b.clone();
    let mut x = Series::zero(ctx);
    while let Some((v, c)) = residual.leading_term() {
        let e = v.scale_pow(p, -n);
        if &e >= target {
            break;
        }
        let coef = ctx.frobenius(&ctx.mul(c, &lead_inv), -n)?;
        let delta = Series::monomial(ctx, coef, e);
        residual = residual.sub(&q.eval_series(&delta)?)?;
        x = x.add(&delta)?;
    }
    Ok(x.truncate(&Cap::Finite(target.clone())))
}

/// `Q(x) = b` for `b` supported on positive exponents: eliminate from the
/// lowest term with the linear term dominating.
fn solve_positive(q: &AdditivePoly, b: &Series, target: &Rat) -> Result<Series> {
    let ctx = q.ctx();
    let cap = b.cap().clone().min_rat(target);
    let a0_inv = ctx.inv(&q.coeffs()[0])?;
    let mut residual = b.truncate(&cap);
    let mut x = Series::zero(ctx);
    while let Some((v, c)) = residual.leading_term() {
        let delta = Series::monomial(ctx, ctx.mul(c, &a0_inv), v.clone());
        residual = residual.sub(&q.eval_series(&delta)?)?.truncate(&cap);
        x = x.add(&delta)?;
    }
    Ok(x.truncate(&cap))
}

/// `h(x)`: the trace-zero `y` with `y^(p^n) + y = x - Tr(x)`.
pub fn artin_schreier_h(x: &Series, n: u32, target: &Rat) -> Result<Series> {
    let ctx = x.ctx();
    if ctx.characteristic() == 0 {
        return Err(Error::CharacteristicZero);
    }
    if n == 0 {
        return Err(Error::Eval("n must be positive".into()));
    }
    let c = trace(x)?;
    let rhs = x.sub(&Series::constant(ctx, c))?;
    solve_additive(&AdditivePoly::artin_schreier(ctx, n)?, &rhs, target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Sign of `v(x)` for trace-zero `x`, read off `Tr(x^p / (x^p - x))`.
pub fn valuation_sign_via_trace(x: &Series) -> Result<Sign> {
    let ctx = x.ctx();
    if ctx.characteristic() == 0 {
        return Err(Error::CharacteristicZero);
    }
    let tr = trace(x)?;
    if !ctx.is_zero(&tr) {
        return Err(Error::NonzeroTrace(ctx.format_coeff(&tr)));
    }
    if x.leading_term().is_none() {
        return Err(Error::NoLeadingTerm);
    }
    let xp = x.frobenius(1)?;
    let denom = xp.sub(x)?;
    let vp = match xp.valuation_bound() {
        Cap::Finite(v) => v,
        Cap::Infinite => unreachable!("x has a visible leading term"),
    };
    let quotient = xp.mul(&denom.invert(&(Rat::one() - vp))?)?;
    let tq = trace(&quotient)?;
    if ctx.is_zero(&tq) {
        Ok(Sign::Positive)
    } else if ctx.is_one(&tq) {
        Ok(Sign::Negative)
    } else {
        Err(Error::Eval(format!(
            "unexpected trace {} of x^p/(x^p - x)",
            ctx.format_coeff(&tq)
        )))
    }
}

/// The leading coefficient: the constant `c` with `x/c` divisible in the
/// multiplicative group.
pub fn norm_leading(x: &Series) -> Result<Coeff> {
    if !x.ctx().is_finite() {
        return Err(Error::CharacteristicZero);
    }
    x.leading_coeff().cloned().ok_or(Error::NoLeadingTerm)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionEntry {
    pub poly: AdditivePoly,
    pub solvable: bool,
    /// Trace-zero case: whether `P(solution)` matched `x` below its cap.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    pub trace: Coeff,
    pub entries: Vec<IntersectionEntry>,
}

impl IntersectionReport {
    pub fn all_solvable(&self) -> bool {
        self.entries.iter().all(|e| e.solvable)
    }
}

/// For trace-zero `x`, solve `P(y) = x` for every `P` and back-substitute.
/// Otherwise report which `P` have the trace in their image on `k`.
pub fn intersection_spotcheck(x: &Series, ps: &[AdditivePoly], target: &Rat) -> Result<IntersectionReport> {
    let ctx = x.ctx();
    if ctx.characteristic() == 0 {
        return Err(Error::CharacteristicZero);
    }
    let tr = trace(x)?;
    let mut entries = Vec::with_capacity(ps.len());
    for p in ps {
        if p.ctx() != ctx {
            return Err(Error::FieldMismatch);
        }
        if ctx.is_zero(&tr) {
            let y = solve_additive(p, x, target)?;
            let back = p.eval_series(&y)?;
            let verified = back.agrees(x);
            entries.push(IntersectionEntry {
                poly: p.clone(),
                solvable: true,
                verified,
            });
        } else {
            let solvable = p.preimage(&tr)?.is_some();
            entries.push(IntersectionEntry {
                poly: p.clone(),
                solvable,
                verified: false,
            });
        }
    }
    Ok(IntersectionReport { trace: tr, entries })
}
