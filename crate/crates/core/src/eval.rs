//! Evaluation of parsed expressions as coefficients, polynomials and series.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::additive::AdditivePoly;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::field::{Coeff, FieldCtx};
use crate::morphisms::{classify_orbit, substitute, OrbitClass};
use crate::powers::{nth_root, pow_rat};
use crate::rat::{Cap, Rat};
use crate::series::Series;
use crate::solvers::{self, Sign};

fn eval_err(msg: impl Into<String>) -> Error {
    Error::Eval(msg.into())
}

/// Evaluate an expression built from integers, `g` and field operations.
pub fn constant(ctx: &FieldCtx, e: &Expr) -> Result<Coeff> {
    Ok(match e {
        Expr::Num(n) => ctx.from_bigint(n),
        Expr::G => generator(ctx)?,
        Expr::Neg(a) => ctx.neg(&constant(ctx, a)?),
        Expr::Add(a, b) => ctx.add(&constant(ctx, a)?, &constant(ctx, b)?),
        Expr::Sub(a, b) => ctx.sub(&constant(ctx, a)?, &constant(ctx, b)?),
        Expr::Mul(a, b) => ctx.mul(&constant(ctx, a)?, &constant(ctx, b)?),
        Expr::Div(a, b) => ctx.div(&constant(ctx, a)?, &constant(ctx, b)?)?,
        Expr::Pow(a, k) if k.is_integer() => ctx.pow(&constant(ctx, a)?, k.numer())?,
        other => return Err(eval_err(format!("`{other}` is not a constant"))),
    })
}

fn generator(ctx: &FieldCtx) -> Result<Coeff> {
    ctx.generator()
        .ok_or_else(|| eval_err(format!("`g` is only defined over extension fields, not {ctx}")))
}

/// Ascending integer coefficients of a polynomial in `var`.
pub fn integer_polynomial(e: &Expr, var: &str) -> Result<Vec<BigInt>> {
    fn add(a: Vec<BigInt>, b: Vec<BigInt>, sign: i32) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.into_iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.into_iter().enumerate() {
            if sign > 0 {
                out[i] += x;
            } else {
                out[i] -= x;
            }
        }
        out
    }
    fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    let mut out = match e {
        Expr::Num(n) => vec![n.clone()],
        Expr::Var(v) if v == var => vec![BigInt::zero(), BigInt::one()],
        Expr::Neg(a) => integer_polynomial(a, var)?.into_iter().map(|c| -c).collect(),
        Expr::Add(a, b) => add(integer_polynomial(a, var)?, integer_polynomial(b, var)?, 1),
        Expr::Sub(a, b) => add(integer_polynomial(a, var)?, integer_polynomial(b, var)?, -1),
        Expr::Mul(a, b) => mul(&integer_polynomial(a, var)?, &integer_polynomial(b, var)?),
        Expr::Pow(a, k) => {
            let k = k
                .to_i64()
                .filter(|k| (0..=64).contains(k))
                .ok_or_else(|| eval_err(format!("unsupported exponent {k} in a polynomial")))?;
            let base = integer_polynomial(a, var)?;
            let mut acc = vec![BigInt::one()];
            for _ in 0..k {
                acc = mul(&acc, &base);
            }
            acc
        }
        other => return Err(eval_err(format!("`{other}` is not a polynomial in {var}"))),
    };
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

type Sparse = BTreeMap<BigInt, Coeff>;

fn sparse_poly(ctx: &FieldCtx, e: &Expr, var: &str) -> Result<Sparse> {
    let single = |c: Coeff, d: BigInt| -> Sparse {
        if ctx.is_zero(&c) {
            Sparse::new()
        } else {
            Sparse::from([(d, c)])
        }
    };
    let combine = |mut a: Sparse, b: Sparse, negate: bool| -> Sparse {
        for (d, c) in b {
            let c = if negate { ctx.neg(&c) } else { c };
            let v = match a.get(&d) {
                Some(x) => ctx.add(x, &c),
                None => c,
            };
            if ctx.is_zero(&v) {
                a.remove(&d);
            } else {
                a.insert(d, v);
            }
        }
        a
    };
    let mul = |a: &Sparse, b: &Sparse| -> Sparse {
        let mut out = Sparse::new();
        for (da, ca) in a {
            for (db, cb) in b {
                out = combine(out, single(ctx.mul(ca, cb), da + db), false);
            }
        }
        out
    };
    Ok(match e {
        Expr::Num(_) | Expr::G => single(constant(ctx, e)?, BigInt::zero()),
        Expr::Var(v) if v == var => single(ctx.one(), BigInt::one()),
        Expr::Neg(a) => combine(Sparse::new(), sparse_poly(ctx, a, var)?, true),
        Expr::Add(a, b) => combine(sparse_poly(ctx, a, var)?, sparse_poly(ctx, b, var)?, false),
        Expr::Sub(a, b) => combine(sparse_poly(ctx, a, var)?, sparse_poly(ctx, b, var)?, true),
        Expr::Mul(a, b) => mul(&sparse_poly(ctx, a, var)?, &sparse_poly(ctx, b, var)?),
        Expr::Div(a, b) => {
            let inv = ctx.inv(&constant(ctx, b)?)?;
            sparse_poly(ctx, a, var)?
                .into_iter()
                .map(|(d, c)| (d, ctx.mul(&c, &inv)))
                .collect()
        }
        Expr::Pow(a, k) => {
            if !k.is_integer() || k.is_negative() {
                return Err(eval_err(format!("unsupported exponent {k} in a polynomial")));
            }
            let base = sparse_poly(ctx, a, var)?;
            let k = k.numer().clone();
            if base.len() == 1 {
                let (d, c) = base.into_iter().next().unwrap();
                single(ctx.pow(&c, &k)?, d * k)
            } else {
                let k = k
                    .to_u32()
                    .filter(|&k| k <= 64)
                    .ok_or_else(|| eval_err("exponent too large for a polynomial with several terms"))?;
                let mut acc = single(ctx.one(), BigInt::zero());
                for _ in 0..k {
                    acc = mul(&acc, &base);
                }
                acc
            }
        }
        other => return Err(eval_err(format!("`{other}` is not a polynomial in {var}"))),
    })
}

/// Read `sum a_i x^(p^i)` from an expression in `x`.
pub fn additive_poly(ctx: &FieldCtx, e: &Expr) -> Result<AdditivePoly> {
    let not_additive = || Error::NotAdditive(e.to_string());
    let sparse = sparse_poly(ctx, e, "x")?;
    let p = ctx.characteristic();
    let mut coeffs: Vec<Coeff> = Vec::new();
    for (d, c) in sparse {
        let i = if p == 0 {
            if !d.is_one() {
                return Err(if d > BigInt::one() {
                    Error::NonlinearInCharZero
                } else {
                    not_additive()
                });
            }
            0
        } else {
            let mut d = d;
            let mut i = 0usize;
            let pb = BigInt::from(p);
            if d < BigInt::one() {
                return Err(not_additive());
            }
            while (&d % &pb).is_zero() {
                d /= &pb;
                i += 1;
            }
            if !d.is_one() {
                return Err(not_additive());
            }
            i
        };
        if coeffs.len() <= i {
            coeffs.resize(i + 1, ctx.zero());
        }
        coeffs[i] = c;
    }
    AdditivePoly::new(ctx, coeffs)
}

pub fn parse_additive(ctx: &FieldCtx, text: &str) -> Result<AdditivePoly> {
    additive_poly(ctx, &expr::parse(text)?)
}

/// Parse and evaluate a series expression at the given cap.
pub fn parse_series(ctx: &FieldCtx, text: &str, cap: &Rat) -> Result<Series> {
    Evaluator::new(ctx, cap.clone()).eval_series(&expr::parse(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Series(Series),
    Class(OrbitClass, FieldCtx),
    Sign(Sign),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Series(s) => write!(f, "{s}"),
            Value::Class(c, ctx) => write!(f, "{}", c.describe(ctx)),
            Value::Sign(Sign::Positive) => write!(f, "positive"),
            Value::Sign(Sign::Negative) => write!(f, "negative"),
        }
    }
}

/// Evaluates series expressions over a fixed field. Literals are exact;
/// operations that need truncation (inverses, fractional powers,
/// substitution) aim for `cap`.
pub struct Evaluator {
    ctx: FieldCtx,
    cap: Rat,
    vars: HashMap<String, Series>,
}

impl Evaluator {
    pub fn new(ctx: &FieldCtx, cap: Rat) -> Self {
        Evaluator {
            ctx: ctx.clone(),
            cap,
            vars: HashMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str, value: Series) {
        self.vars.insert(name.to_string(), value);
    }

    pub fn eval_series(&self, e: &Expr) -> Result<Series> {
        match self.eval(e)? {
            Value::Series(s) => Ok(s),
            other => Err(eval_err(format!("expected a series, got `{other}`"))),
        }
    }

    fn arity(name: &str, args: &[Expr], n: usize) -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(eval_err(format!("{name} takes {n} argument(s), got {}", args.len())))
        }
    }

    fn small_int(e: &Expr, what: &str) -> Result<u64> {
        match e {
            Expr::Num(n) => n.to_u64().filter(|&n| n > 0),
            _ => None,
        }
        .ok_or_else(|| eval_err(format!("{what} must be a positive integer literal")))
    }

    fn invert(&self, x: &Series, numerator_val: Option<&Rat>) -> Result<Series> {
        let req = match numerator_val {
            Some(v) => &self.cap - v,
            None => self.cap.clone(),
        };
        x.invert(&req)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        let ctx = &self.ctx;
        let s = |x: Series| Ok(Value::Series(x));
        match e {
            Expr::Num(n) => s(Series::constant(ctx, ctx.from_bigint(n))),
            Expr::G => s(Series::constant(ctx, generator(ctx)?)),
            Expr::T => s(Series::t(ctx)),
            Expr::Var(v) => match self.vars.get(v) {
                Some(x) => s(x.clone()),
                None => Err(eval_err(format!("unbound variable `{v}`"))),
            },
            Expr::Str(_) => Err(eval_err("a string is not a series")),
            Expr::Neg(a) => s(self.eval_series(a)?.neg()),
            Expr::Add(a, b) => s(self.eval_series(a)?.add(&self.eval_series(b)?)?),
            Expr::Sub(a, b) => s(self.eval_series(a)?.sub(&self.eval_series(b)?)?),
            Expr::Mul(a, b) => s(self.eval_series(a)?.mul(&self.eval_series(b)?)?),
            Expr::Div(a, b) => {
                let a = self.eval_series(a)?;
                let b = self.eval_series(b)?;
                let va = a.leading_term().map(|(v, _)| v.clone());
                s(a.mul(&self.invert(&b, va.as_ref())?)?)
            }
            Expr::Pow(a, k) => s(self.power(&self.eval_series(a)?, k)?),
            Expr::Call(name, args) => self.call(name, args),
        }
    }

    fn power(&self, x: &Series, k: &Rat) -> Result<Series> {
        let ctx = &self.ctx;
        if k.is_integer() {
            let n = k
                .numer()
                .abs()
                .to_u64()
                .filter(|&n| n <= 1 << 20)
                .ok_or_else(|| eval_err(format!("exponent {k} is too large")))?;
            let p = x.pow_u64(n);
            return if k.is_negative() { self.invert(&p, None) } else { Ok(p) };
        }
        if let Some(c) = x.as_constant() {
            let n = k.denom().to_u64().ok_or_else(|| eval_err("exponent too large"))?;
            let root = match ctx.nth_roots(&c, n) {
                Ok(r) => r.into_iter().next(),
                Err(Error::IrrationalRoot(_)) => None,
                Err(e) => return Err(e),
            }
            .ok_or_else(|| eval_err(format!("{} has no {n}-th root", ctx.format_coeff(&c))))?;
            return Ok(Series::constant(ctx, ctx.pow(&root, k.numer())?));
        }
        pow_rat(x, k, &self.cap)
    }

    fn call(&self, name: &str, args: &[Expr]) -> Result<Value> {
        let ctx = &self.ctx;
        let s = |x: Series| Ok(Value::Series(x));
        match name {
            "inv" => {
                Self::arity(name, args, 1)?;
                s(self.invert(&self.eval_series(&args[0])?, None)?)
            }
            "root" => {
                Self::arity(name, args, 2)?;
                let n = Self::small_int(&args[1], "root order")?;
                s(nth_root(&self.eval_series(&args[0])?, n, &self.cap)?)
            }
            "trace" => {
                Self::arity(name, args, 1)?;
                s(Series::constant(ctx, solvers::trace(&self.eval_series(&args[0])?)?))
            }
            "norm" => {
                Self::arity(name, args, 1)?;
                s(Series::constant(ctx, solvers::norm_leading(&self.eval_series(&args[0])?)?))
            }
            "subst" => {
                Self::arity(name, args, 2)?;
                let x = self.eval_series(&args[0])?;
                let y = self.eval_series(&args[1])?;
                s(substitute(&x, &y, &self.cap)?.series)
            }
            "classify" => {
                Self::arity(name, args, 1)?;
                Ok(Value::Class(classify_orbit(&self.eval_series(&args[0])?)?, ctx.clone()))
            }
            "sign" => {
                Self::arity(name, args, 1)?;
                Ok(Value::Sign(solvers::valuation_sign_via_trace(&self.eval_series(&args[0])?)?))
            }
            "solve" => {
                Self::arity(name, args, 2)?;
                let b = self.eval_series(&args[0])?;
                let p = match &args[1] {
                    Expr::Str(text) => parse_additive(ctx, text)?,
                    other => additive_poly(ctx, other)?,
                };
                let target = solvers::default_target(&b, &self.cap);
                s(solvers::solve_additive(&p, &b, &target)?)
            }
            "h" => {
                Self::arity(name, args, 2)?;
                let x = self.eval_series(&args[0])?;
                let n = Self::small_int(&args[1], "n")?;
                let n = u32::try_from(n).map_err(|_| eval_err("n is too large"))?;
                let target = solvers::default_target(&x, &self.cap);
                s(solvers::artin_schreier_h(&x, n, &target)?)
            }
            "O" => {
                Self::arity(name, args, 1)?;
                let k = match &args[0] {
                    Expr::T => Rat::one(),
                    Expr::Num(n) if n.is_one() => Rat::zero(),
                    Expr::Pow(b, k) if **b == Expr::T => k.clone(),
                    other => return Err(eval_err(format!("O(...) expects a power of t, got `{other}`"))),
                };
                s(Series::unknown(ctx, k))
            }
            _ => Err(eval_err(format!("unknown function `{name}`"))),
        }
    }
}

impl Series {
    /// Parse the text form, including an optional `O(t^k)` term.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Series> {
        parse_series(ctx, text, &Rat::zero())
    }
}

/// Caps that parse back from the text form.
pub fn cap_from_text(text: &str) -> Result<Cap> {
    if text.trim() == "inf" {
        return Ok(Cap::Infinite);
    }
    Ok(Cap::Finite(text.parse()?))
}
