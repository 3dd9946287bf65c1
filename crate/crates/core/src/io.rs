//! JSON forms of series and transforms.
//!
//! Series: `{"field": "F9:x^2+1", "terms": [[num, den, "coeff"], ...],
//! "cap": [num, den] | "inf"}`. Transforms: a list of steps, applied left to
//! right, each one of `{"translate": "c"}`, `"invert"`,
//! `{"rescale": [[d, "u_d"], ...]}`, `{"scale_exp": [num, den]}` or
//! `{"substitute": series}`. An empty rescale list is the trivial map.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{make_field, FieldCtx};
use crate::morphisms::{ExpHom, Step, Transform};
use crate::rat::{Cap, Rat};
use crate::series::Series;

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn int_from(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad(format!("expected an integer, got {n}"))),
        Value::String(s) => s.parse().map_err(|_| bad(format!("expected an integer, got {s:?}"))),
        other => Err(bad(format!("expected an integer, got {other}"))),
    }
}

fn rat_json(r: &Rat) -> Value {
    json!([int_json(r.numer()), int_json(r.denom())])
}

fn rat_from(v: &Value) -> Result<Rat> {
    match v.as_array().map(Vec::as_slice) {
        Some([n, d]) => {
            let d = int_from(d)?;
            if d == BigInt::from(0) {
                return Err(bad("zero denominator"));
            }
            Ok(Rat::new(int_from(n)?, d))
        }
        _ => Err(bad(format!("expected [num, den], got {v}"))),
    }
}

pub fn series_to_json(s: &Series) -> Value {
    let ctx = s.ctx();
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, c)| json!([int_json(e.numer()), int_json(e.denom()), ctx.format_coeff(c)]))
        .collect();
    let cap = match s.cap() {
        Cap::Infinite => json!("inf"),
        Cap::Finite(k) => rat_json(k),
    };
    json!({ "field": ctx.to_string(), "terms": terms, "cap": cap })
}

pub fn series_from_json(v: &Value) -> Result<Series> {
    let obj = v.as_object().ok_or_else(|| bad("series must be an object"))?;
    let field = obj
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing \"field\""))?;
    let ctx = make_field(field)?;
    series_from_json_in(&ctx, v)
}

/// Like [`series_from_json`], but the series must live over `ctx`.
pub fn series_from_json_in(ctx: &FieldCtx, v: &Value) -> Result<Series> {
    let obj = v.as_object().ok_or_else(|| bad("series must be an object"))?;
    if let Some(f) = obj.get("field").and_then(Value::as_str) {
        if &make_field(f)? != ctx {
            return Err(Error::FieldMismatch);
        }
    }
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"terms\""))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        match t.as_array().map(Vec::as_slice) {
            Some([n, d, Value::String(c)]) => {
                let e = rat_from(&json!([n, d]))?;
                parsed.push((e, ctx.parse_coeff(c)?));
            }
            _ => return Err(bad(format!("bad term {t}"))),
        }
    }
    let cap = match obj.get("cap") {
        Some(Value::String(s)) if s == "inf" => Cap::Infinite,
        Some(c) => Cap::Finite(rat_from(c)?),
        None => return Err(bad("missing \"cap\"")),
    };
    Series::new(ctx, parsed, cap)
}

pub fn transform_to_json(ctx: &FieldCtx, t: &Transform) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| match s {
            Step::Translate(c) => json!({ "translate": ctx.format_coeff(c) }),
            Step::Invert => json!("invert"),
            Step::Rescale(l) => {
                let pairs: Vec<Value> = l
                    .pairs()
                    .iter()
                    .map(|(d, u)| json!([d, ctx.format_coeff(u)]))
                    .collect();
                json!({ "rescale": pairs })
            }
            Step::ScaleExp(r) => json!({ "scale_exp": rat_json(r) }),
            Step::Substitute(x) => json!({ "substitute": series_to_json(x) }),
        })
        .collect();
    Value::Array(steps)
}

pub fn transform_from_json(ctx: &FieldCtx, v: &Value) -> Result<Transform> {
    let arr = v.as_array().ok_or_else(|| bad("transform must be a list"))?;
    let mut steps = Vec::with_capacity(arr.len());
    for s in arr {
        let step = match s {
            Value::String(k) if k == "invert" => Step::Invert,
            Value::Object(o) if o.len() == 1 => {
                let (k, body) = o.iter().next().unwrap();
                match k.as_str() {
                    "translate" => {
                        let c = body.as_str().ok_or_else(|| bad("translate takes a string"))?;
                        Step::Translate(ctx.parse_coeff(c)?)
                    }
                    "rescale" => {
                        let pairs = body.as_array().ok_or_else(|| bad("rescale takes a list"))?;
                        if pairs.is_empty() {
                            Step::Rescale(ExpHom::trivial(ctx))
                        } else {
                            let mut out = Vec::with_capacity(pairs.len());
                            for p in pairs {
                                match p.as_array().map(Vec::as_slice) {
                                    Some([d, Value::String(u)]) => {
                                        let d = int_from(d)?
                                            .to_u64()
                                            .filter(|&d| d > 0)
                                            .ok_or_else(|| bad("denominator must be positive"))?;
                                        out.push((d, ctx.parse_coeff(u)?));
                                    }
                                    _ => return Err(bad(format!("bad rescale pair {p}"))),
                                }
                            }
                            Step::Rescale(ExpHom::new(ctx, out)?)
                        }
                    }
                    "scale_exp" => Step::ScaleExp(rat_from(body)?),
                    "substitute" => Step::Substitute(series_from_json_in(ctx, body)?),
                    other => return Err(bad(format!("unknown step {other:?}"))),
                }
            }
            other => return Err(bad(format!("bad step {other}"))),
        };
        steps.push(step);
    }
    Ok(Transform { steps })
}
