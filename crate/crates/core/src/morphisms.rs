//! Endomorphisms of k((t^Q)): rescalings `psi_lambda`, exponent scalings,
//! substitutions `phi_x`, and the orbit machinery built from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldCtx};
use crate::powers::pow_rat;
use crate::rat::{Cap, Rat};
use crate::series::Series;

/// A homomorphism `Q -> k*` known on the lattices `(1/d) Z` of its
/// committed pairs `(d, lambda(1/d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpHom {
    ctx: FieldCtx,
    pairs: Vec<(u64, Coeff)>,
    trivial: bool,
}

impl ExpHom {
    pub fn trivial(ctx: &FieldCtx) -> Self {
        ExpHom {
            ctx: ctx.clone(),
            pairs: Vec::new(),
            trivial: true,
        }
    }

    /// Commit `lambda(1/d) = u_d` for each pair. Pairs must agree on the
    /// common lattice: `u_d^(d/g) = u_d'^(d'/g)` with `g = gcd(d, d')`.
    pub fn new(ctx: &FieldCtx, pairs: Vec<(u64, Coeff)>) -> Result<Self> {
        for (d, u) in &pairs {
            if *d == 0 {
                return Err(Error::Eval("denominators must be positive".into()));
            }
            if !ctx.contains(u) {
                return Err(Error::FieldMismatch);
            }
            if ctx.is_zero(u) {
                return Err(Error::DivisionByZero);
            }
        }
        for (i, (d1, u1)) in pairs.iter().enumerate() {
            for (d2, u2) in &pairs[i + 1..] {
                let g = d1.gcd(d2);
                let a = ctx.pow(u1, &BigInt::from(d1 / g))?;
                let b = ctx.pow(u2, &BigInt::from(d2 / g))?;
                if a != b {
                    return Err(Error::IncompatibleHom(*d1, *d2));
                }
            }
        }
        Ok(ExpHom {
            ctx: ctx.clone(),
            pairs,
            trivial: false,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn pairs(&self) -> &[(u64, Coeff)] {
        &self.pairs
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial || self.pairs.iter().all(|(_, u)| self.ctx.is_one(u))
    }

    /// `lambda(e)`.
    pub fn query(&self, e: &Rat) -> Result<Coeff> {
        if self.trivial || e.is_zero() {
            return Ok(self.ctx.one());
        }
        for (d, u) in &self.pairs {
            let d = BigInt::from(*d);
            if (&d % e.denom()).is_zero() {
                let n = e.numer() * (d / e.denom());
                return self.ctx.pow(u, &n);
            }
        }
        Err(Error::Unqueryable(e.clone()))
    }

    /// The pointwise inverse `e -> lambda(e)^(-1)`.
    pub fn inverse(&self) -> Result<ExpHom> {
        if self.trivial {
            return Ok(self.clone());
        }
        let pairs = self
            .pairs
            .iter()
            .map(|(d, u)| Ok((*d, self.ctx.inv(u)?)))
            .collect::<Result<_>>()?;
        Ok(ExpHom {
            ctx: self.ctx.clone(),
            pairs,
            trivial: false,
        })
    }
}

/// `sum c_i t^i -> sum lambda(i) c_i t^i`.
pub fn psi_lambda(lambda: &ExpHom, y: &Series) -> Result<Series> {
    thm2_map(lambda, &Rat::one(), y)
}

/// `sum c_i t^i -> sum lambda(i) c_i t^(r i)` for `r > 0`; the cap scales
/// by `r`.
pub fn thm2_map(lambda: &ExpHom, r: &Rat, y: &Series) -> Result<Series> {
    if lambda.ctx() != y.ctx() {
        return Err(Error::FieldMismatch);
    }
    if !r.is_positive() {
        return Err(Error::NonPositiveScale);
    }
    let ctx = y.ctx();
    y.map_terms(
        |e, c| Ok((e * r, ctx.mul(&lambda.query(e)?, c))),
        y.cap().scale(r),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermDiagnostic {
    pub exponent: Rat,
    /// `v_p` of the exponent; `None` in characteristic 0 or for exponent 0.
    pub p_adic_valuation: Option<i64>,
    pub cap: Cap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub terms: Vec<TermDiagnostic>,
    /// Cap contribution of the unknown tail of `y`, `v(x) * cap_y`.
    pub tail_cap: Cap,
    /// Two or more distinct negative p-adic valuations among the exponents
    /// of `y`: the termwise roots needed shrink the certified precision by
    /// a factor of p per level.
    pub hypothesis_a_risk: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub series: Series,
    pub achieved_cap: Cap,
    pub diagnostics: Diagnostics,
}

/// `phi_x(y) = sum c_i x^i` for monic `x` with `v(x) > 0`. Each power is
/// computed to `requested_cap` at most.
pub fn substitute(x: &Series, y: &Series, requested_cap: &Rat) -> Result<Substitution> {
    if x.ctx() != y.ctx() {
        return Err(Error::FieldMismatch);
    }
    let (m, c) = x.leading_term().ok_or(Error::NoLeadingTerm)?;
    if !x.ctx().is_one(c) {
        return Err(Error::NotMonic);
    }
    if !m.is_positive() {
        return Err(Error::NonPositiveValuation(m.clone()));
    }
    let ctx = x.ctx();
    let p = ctx.characteristic();
    let tail_cap = y.cap().scale(m);
    let mut acc = Series::zero(ctx).truncate(&tail_cap);
    let mut terms = Vec::with_capacity(y.len());
    let mut negative_vals = std::collections::BTreeSet::new();
    for (i, c) in y.terms() {
        let power = pow_rat(x, i, requested_cap)?;
        let v_p = if p == 0 { None } else { i.p_adic_valuation(p) };
        if let Some(b) = v_p.filter(|b| *b < 0) {
            negative_vals.insert(b);
        }
        terms.push(TermDiagnostic {
            exponent: i.clone(),
            p_adic_valuation: v_p,
            cap: power.cap().clone(),
        });
        acc = acc.add(&power.scale(c))?;
    }
    Ok(Substitution {
        achieved_cap: acc.cap().clone(),
        series: acc,
        diagnostics: Diagnostics {
            terms,
            tail_cap,
            hypothesis_a_risk: negative_vals.len() >= 2,
        },
    })
}

/// Orbit labels: `S_inf` (negative valuation) and `S_c = c + S_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    SInfinity,
    SC(Coeff),
}

impl OrbitClass {
    pub fn describe(&self, ctx: &FieldCtx) -> String {
        match self {
            OrbitClass::SInfinity => "S_inf".into(),
            OrbitClass::SC(c) => format!("S_{}", ctx.format_coeff(c)),
        }
    }
}

pub fn classify_orbit(y: &Series) -> Result<OrbitClass> {
    if y.as_constant().is_some() {
        return Err(Error::BareConstant);
    }
    let ctx = y.ctx();
    let (v, c) = y.leading_term().ok_or(Error::Undecidable)?;
    if v.is_negative() {
        return Ok(OrbitClass::SInfinity);
    }
    if v.is_positive() {
        return Ok(OrbitClass::SC(ctx.zero()));
    }
    // a lone visible constant with a finite cap may still be a bare constant
    if y.len() == 1 {
        return Err(Error::Undecidable);
    }
    Ok(OrbitClass::SC(c.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Translate(Coeff),
    Invert,
    Rescale(ExpHom),
    ScaleExp(Rat),
    Substitute(Series),
}

/// Steps applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Transform {
    pub steps: Vec<Step>,
}

pub fn apply_transform(t: &Transform, z: &Series, requested_cap: &Rat) -> Result<Series> {
    let mut cur = z.clone();
    for step in &t.steps {
        cur = match step {
            Step::Translate(c) => cur.add(&Series::constant(cur.ctx(), c.clone()))?,
            Step::Invert => cur.invert(requested_cap)?,
            Step::Rescale(l) => psi_lambda(l, &cur)?,
            Step::ScaleExp(r) => cur.scale_exponents(r)?,
            Step::Substitute(x) => substitute(x, &cur, requested_cap)?.series,
        };
    }
    Ok(cur)
}

/// A transform carrying `t` to `y` (below certified caps).
pub fn orbit_transform(y: &Series, requested_cap: &Rat) -> Result<Transform> {
    let ctx = y.ctx();
    match classify_orbit(y)? {
        OrbitClass::SC(c) if ctx.is_zero(&c) => positive_transform(y),
        OrbitClass::SC(c) => {
            let rest = y.sub(&Series::constant(ctx, c.clone()))?;
            let mut t = positive_transform(&rest)?;
            t.steps.push(Step::Translate(c));
            Ok(t)
        }
        OrbitClass::SInfinity => {
            let w = y.invert(requested_cap)?;
            let mut t = positive_transform(&w)?;
            t.steps.push(Step::Invert);
            Ok(t)
        }
    }
}

/// `[Substitute(x)]` for monic `w`, otherwise `[Substitute(psi_{1/lambda}(w)),
/// Rescale(lambda)]` with `lambda(v(w)) = lead(w)`.
fn positive_transform(w: &Series) -> Result<Transform> {
    let ctx = w.ctx();
    let (v, c) = w.leading_term().ok_or(Error::Undecidable)?;
    if ctx.is_one(c) {
        return Ok(Transform {
            steps: vec![Step::Substitute(w.clone())],
        });
    }
    let unreachable = || Error::UnreachableCoefficient(ctx.format_coeff(c));
    let lattice = w.exponent_denominator_lcm();
    let d = lattice.to_u64().ok_or_else(unreachable)?;
    let a = (v.numer() * (&lattice / v.denom())).to_i64().ok_or_else(unreachable)?;
    let target = if a > 0 { c.clone() } else { ctx.inv(c)? };
    let roots = match ctx.nth_roots(&target, a.unsigned_abs()) {
        Ok(r) => r,
        Err(Error::IrrationalRoot(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let u = roots.into_iter().next().ok_or_else(unreachable)?;
    let lambda = ExpHom::new(ctx, vec![(d, u)])?;
    let x = psi_lambda(&lambda.inverse()?, w)?;
    debug_assert!(x.is_monic());
    Ok(Transform {
        steps: vec![Step::Substitute(x), Step::Rescale(lambda)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn ser(ctx: &FieldCtx, terms: &[(i64, i64, i64)], cap: Option<Rat>) -> Series {
        Series::new(
            ctx,
            terms.iter().map(|&(n, d, c)| (r(n, d), ctx.from_int(c))),
            cap.map(Cap::Finite).unwrap_or(Cap::Infinite),
        )
        .unwrap()
    }

    #[test]
    fn psi_examples() {
        let q = make_field("Q").unwrap();
        let y = ser(&q, &[(1, 1, 1), (2, 1, 1)], Some(r(5, 1)));
        assert_eq!(psi_lambda(&ExpHom::trivial(&q), &y).unwrap(), y);
        let l = ExpHom::new(&q, vec![(1, q.from_int(2))]).unwrap();
        assert_eq!(psi_lambda(&l, &y).unwrap(), ser(&q, &[(1, 1, 2), (2, 1, 4)], Some(r(5, 1))));
        assert_eq!(
            psi_lambda(&l, &ser(&q, &[(1, 2, 1)], None)),
            Err(Error::Unqueryable(r(1, 2)))
        );

        let f4 = make_field("F4").unwrap();
        let g = f4.generator().unwrap();
        let l = ExpHom::new(&f4, vec![(3, g.clone())]).unwrap();
        let got = psi_lambda(&l, &ser(&f4, &[(2, 3, 1)], None)).unwrap();
        assert_eq!(got, Series::monomial(&f4, f4.mul(&g, &g), r(2, 3)));
    }

    #[test]
    fn hom_compatibility() {
        let q = make_field("Q").unwrap();
        assert!(ExpHom::new(&q, vec![(2, q.from_int(3)), (1, q.from_int(9))]).is_ok());
        assert_eq!(
            ExpHom::new(&q, vec![(2, q.from_int(3)), (1, q.from_int(8))]),
            Err(Error::IncompatibleHom(2, 1))
        );
        // gcd(4, 6) = 2: u_4^2 must equal u_6^3
        assert!(ExpHom::new(&q, vec![(4, q.from_int(8)), (6, q.from_int(4))]).is_ok());
    }

    #[test]
    fn thm2_examples() {
        let f2 = make_field("F2").unwrap();
        let id = ExpHom::trivial(&f2);
        let y = ser(&f2, &[(1, 1, 1), (3, 1, 1)], None);
        assert_eq!(thm2_map(&id, &r(1, 2), &y).unwrap(), ser(&f2, &[(1, 2, 1), (3, 2, 1)], None));
        assert_eq!(thm2_map(&id, &r(1, 1), &y).unwrap(), y);
        let capped = ser(&f2, &[(1, 1, 1)], Some(r(3, 1)));
        assert_eq!(thm2_map(&id, &r(2, 1), &capped).unwrap().cap(), &Cap::finite(r(6, 1)));
        assert_eq!(thm2_map(&id, &r(0, 1), &y), Err(Error::NonPositiveScale));
    }

    #[test]
    fn substitute_examples() {
        let q = make_field("Q").unwrap();
        let x = ser(&q, &[(1, 1, 1), (3, 2, 2), (2, 1, -1)], None);
        let s = substitute(&x, &Series::t(&q), &r(5, 1)).unwrap();
        assert_eq!(s.series, x);
        assert_eq!(s.achieved_cap, Cap::Infinite);

        let t2 = ser(&q, &[(2, 1, 1)], None);
        let y = ser(&q, &[(-1, 1, 3), (1, 3, 1), (2, 1, -5)], Some(r(4, 1)));
        let s = substitute(&t2, &y, &r(10, 1)).unwrap();
        assert_eq!(s.series, ser(&q, &[(-2, 1, 3), (2, 3, 1), (4, 1, -5)], Some(r(8, 1))));

        assert_eq!(
            substitute(&ser(&q, &[(0, 1, 1), (1, 1, 1)], None), &y, &r(1, 1)).unwrap_err(),
            Error::NonPositiveValuation(r(0, 1))
        );
        assert_eq!(
            substitute(&ser(&q, &[(1, 1, 2)], None), &y, &r(1, 1)).unwrap_err(),
            Error::NotMonic
        );
    }

    // Oracle: x^(-1/p^k) for x = t - t^2 is sum_{n>=0} t^((n-1)/p^k), which
    // contributes exactly 1 at t^0.
    #[test]
    fn char_p_divergence_family() {
        for p in [2i64, 3] {
            let ctx = make_field(&format!("F{p}")).unwrap();
            let x = ser(&ctx, &[(1, 1, 1), (2, 1, -1)], None);
            for k in 1..=4u32 {
                let pk = p.pow(k);
                let single = ser(&ctx, &[(-1, pk, 1)], None);
                let s = substitute(&x, &single, &r(1, 1)).unwrap().series;
                let want: Vec<(i64, i64, i64)> = (0..=pk).map(|n| (n - 1, pk, 1)).collect();
                assert_eq!(s, ser(&ctx, &want, Some(r(1, 1))), "p={p} k={k}");
            }
            for big_k in 1..=5u32 {
                let terms: Vec<(i64, i64, i64)> = (1..=big_k).map(|k| (-1, p.pow(k), 1)).collect();
                let y = ser(&ctx, &terms, None);
                let s = substitute(&x, &y, &r(1, 1)).unwrap();
                assert_eq!(s.series.coeff(&Rat::zero()).unwrap(), ctx.from_int(big_k as i64));
                assert_eq!(s.diagnostics.hypothesis_a_risk, big_k >= 2);
            }
        }
    }

    #[test]
    fn divergence_shrinks_cap_for_inexact_x() {
        let f2 = make_field("F2").unwrap();
        let x = ser(&f2, &[(1, 1, 1), (2, 1, 1)], Some(r(10, 1)));
        let mut last = None;
        for big_k in 1..=6u32 {
            let terms: Vec<(i64, i64, i64)> = (1..=big_k).map(|k| (-1, 2i64.pow(k), 1)).collect();
            let y = ser(&f2, &terms, None);
            let s = substitute(&x, &y, &r(100, 1)).unwrap();
            assert_eq!(s.achieved_cap, Cap::finite(r(8, 2i64.pow(big_k))));
            if let Some(prev) = last {
                assert!(s.achieved_cap < prev);
            }
            last = Some(s.achieved_cap);
        }
    }

    #[test]
    fn classify_examples() {
        let q = make_field("Q").unwrap();
        assert_eq!(classify_orbit(&ser(&q, &[(-1, 1, 1), (0, 1, 1)], None)).unwrap(), OrbitClass::SInfinity);
        assert_eq!(
            classify_orbit(&ser(&q, &[(0, 1, 5), (1, 3, 1)], None)).unwrap(),
            OrbitClass::SC(q.from_int(5))
        );
        assert_eq!(
            classify_orbit(&ser(&q, &[(1, 1, 1), (2, 1, -1)], None)).unwrap(),
            OrbitClass::SC(q.zero())
        );
        assert_eq!(classify_orbit(&ser(&q, &[(0, 1, 5)], None)), Err(Error::BareConstant));
        assert_eq!(classify_orbit(&Series::unknown(&q, r(2, 1))), Err(Error::Undecidable));
        assert_eq!(classify_orbit(&ser(&q, &[(0, 1, 5)], Some(r(1, 1)))), Err(Error::Undecidable));
    }

    fn check_witness(y: &Series, cap: Rat) {
        let t = orbit_transform(y, &cap).unwrap();
        let got = apply_transform(&t, &Series::t(y.ctx()), &cap).unwrap();
        assert!(got.agrees(y), "{y} vs {got}");
        assert!(got.joint_cap(y) > y.valuation_bound());
    }

    #[test]
    fn orbit_witnesses() {
        let q = make_field("Q").unwrap();
        let y = ser(&q, &[(1, 2, 1), (1, 1, 3)], None);
        let t = orbit_transform(&y, &r(4, 1)).unwrap();
        assert_eq!(t.steps, vec![Step::Substitute(y.clone())]);
        check_witness(&y, r(4, 1));
        let y = ser(&q, &[(0, 1, 7), (1, 3, 1), (1, 1, 1)], None);
        let t = orbit_transform(&y, &r(4, 1)).unwrap();
        assert_eq!(t.steps.last(), Some(&Step::Translate(q.from_int(7))));
        check_witness(&y, r(4, 1));
        check_witness(&ser(&q, &[(-1, 1, 1), (0, 1, 2), (1, 1, 1)], None), r(4, 1));
        check_witness(&ser(&q, &[(1, 1, 2), (2, 1, 1)], None), r(4, 1));
        check_witness(&ser(&q, &[(-2, 3, 4), (1, 1, 1)], None), r(4, 1));
        assert!(matches!(
            orbit_transform(&ser(&q, &[(2, 1, 2)], None), &r(4, 1)),
            Err(Error::UnreachableCoefficient(_))
        ));

        let f4 = make_field("F4").unwrap();
        let g = f4.generator().unwrap();
        let y = Series::new(&f4, [(r(1, 2), g.clone()), (r(1, 1), f4.one())], Cap::Infinite).unwrap();
        check_witness(&y, r(4, 1));
        let y = Series::new(&f4, [(r(-2, 1), g), (r(1, 1), f4.one())], Cap::Infinite).unwrap();
        check_witness(&y, r(4, 1));
    }

    #[test]
    fn apply_examples() {
        let q = make_field("Q").unwrap();
        let z = ser(&q, &[(1, 2, 3)], Some(r(2, 1)));
        assert_eq!(apply_transform(&Transform::default(), &z, &r(4, 1)).unwrap(), z);
        let c = q.from_int(5);
        let t = Transform {
            steps: vec![Step::Translate(c.clone()), Step::Translate(q.neg(&c))],
        };
        assert_eq!(apply_transform(&t, &z, &r(4, 1)).unwrap(), z);
        let x = ser(&q, &[(1, 1, 1), (2, 1, 1)], Some(r(5, 1)));
        let t = Transform {
            steps: vec![Step::Substitute(x.clone())],
        };
        let got = apply_transform(&t, &ser(&q, &[(2, 1, 1)], None), &r(10, 1)).unwrap();
        let want = x.mul(&x).unwrap();
        assert!(got.agrees(&want));
        assert_eq!(got.cap(), want.cap());
    }
}
