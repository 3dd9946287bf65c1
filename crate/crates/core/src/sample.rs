//! Random generators for property tests and the CLI's seeded commands.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::additive::AdditivePoly;
use crate::field::{Coeff, FieldCtx};
use crate::morphisms::ExpHom;
use crate::rat::{Cap, Rat};
use crate::series::Series;

const DENOMINATORS: [i64; 5] = [1, 2, 3, 4, 6];

/// Shape of generated series.
#[derive(Clone, Debug)]
pub struct SeriesShape {
    pub max_terms: usize,
    /// Exponents are drawn from `[min_exp, max_exp)`.
    pub min_exp: i64,
    pub max_exp: i64,
    /// Probability of a finite cap.
    pub capped: f64,
}

impl Default for SeriesShape {
    fn default() -> Self {
        SeriesShape {
            max_terms: 4,
            min_exp: -2,
            max_exp: 3,
            capped: 0.5,
        }
    }
}

pub fn coeff<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> Coeff {
    match ctx.order() {
        Some(q) => Coeff::Finite(rng.gen_range(0..q)),
        None => {
            let n = rng.gen_range(-5i64..=5);
            let d = rng.gen_range(1i64..=4);
            let r = num_rational::BigRational::new(n.into(), d.into());
            ctx.from_rational(&r).unwrap()
        }
    }
}

pub fn nonzero_coeff<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> Coeff {
    loop {
        let c = coeff(ctx, rng);
        if !ctx.is_zero(&c) {
            return c;
        }
    }
}

pub fn exponent<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> Rat {
    let d = *DENOMINATORS.choose(rng).unwrap();
    Rat::new(rng.gen_range(lo * d..hi * d), d)
}

pub fn series<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R, shape: &SeriesShape) -> Series {
    let n = rng.gen_range(1..=shape.max_terms);
    let mut terms = std::collections::BTreeMap::new();
    for _ in 0..n {
        terms.insert(exponent(rng, shape.min_exp, shape.max_exp), nonzero_coeff(ctx, rng));
    }
    let cap = if rng.gen_bool(shape.capped) {
        let top = terms.keys().next_back().cloned().unwrap();
        Cap::Finite(top + Rat::new(rng.gen_range(1i64..=6), 2))
    } else {
        Cap::Infinite
    };
    Series::new(ctx, terms, cap).unwrap()
}

/// Monic with positive valuation.
pub fn monic_positive<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R, capped: f64) -> Series {
    let v = loop {
        let e = exponent(rng, 0, 2);
        if e.is_positive() {
            break e;
        }
    };
    let rest = series(
        ctx,
        rng,
        &SeriesShape {
            max_terms: 3,
            min_exp: 0,
            max_exp: 3,
            capped,
        },
    );
    let lead = Series::monomial(ctx, ctx.one(), v.clone());
    let mut terms: Vec<(Rat, Coeff)> = rest
        .terms()
        .filter(|(e, _)| *e > &v)
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    terms.insert(0, (v.clone(), ctx.one()));
    let cap = match rest.cap() {
        Cap::Finite(k) if k > &v => Cap::Finite(k.clone()),
        Cap::Finite(_) => Cap::Finite(&v + &Rat::from_int(2)),
        Cap::Infinite => Cap::Infinite,
    };
    Series::new(ctx, terms, cap).unwrap_or(lead)
}

/// Trace-zero series with terms of both signs and a positive cap.
pub fn trace_zero<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> Series {
    let s = series(
        ctx,
        rng,
        &SeriesShape {
            max_terms: 4,
            min_exp: -2,
            max_exp: 3,
            capped: 0.5,
        },
    );
    let terms: Vec<(Rat, Coeff)> = s
        .terms()
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    if terms.is_empty() {
        return Series::t(ctx);
    }
    let cap = match s.cap() {
        Cap::Finite(k) if !k.is_positive() => Cap::Finite(Rat::new(1, 2)),
        c => c.clone(),
    };
    Series::new(ctx, terms, cap).unwrap()
}

pub fn additive_poly<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R, max_degree: usize) -> AdditivePoly {
    if ctx.characteristic() == 0 {
        return AdditivePoly::new(ctx, vec![nonzero_coeff(ctx, rng)]).unwrap();
    }
    let n = rng.gen_range(0..=max_degree);
    let mut coeffs: Vec<Coeff> = (0..n).map(|_| coeff(ctx, rng)).collect();
    coeffs.push(nonzero_coeff(ctx, rng));
    AdditivePoly::new(ctx, coeffs).unwrap()
}

/// A homomorphism committed on `(1/d) Z` for `d = lcm(DENOMINATORS)`, so
/// every exponent the generators produce is queryable.
pub fn exp_hom<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> ExpHom {
    let u = match ctx.order() {
        Some(_) => nonzero_coeff(ctx, rng),
        // keep rational images small: lambda(1) = u^12 is already large
        None => ctx.from_int(*[1i64, -1, 2].choose(rng).unwrap()),
    };
    ExpHom::new(ctx, vec![(12, u)]).unwrap()
}
