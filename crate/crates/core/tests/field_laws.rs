use hahn::{make_field, AdditivePoly, Coeff, FieldCtx};
use num_bigint::BigInt;

const SMALL: [&str; 13] = [
    "F2", "F3", "F4", "F5", "F7", "F8", "F9", "F16", "F25", "F27", "F32", "F49", "F64",
];

fn all(ctx: &FieldCtx) -> Vec<Coeff> {
    ctx.elements().unwrap().collect()
}

#[test]
fn axioms_exhaustive() {
    for spec in SMALL {
        let ctx = make_field(spec).unwrap();
        let els = all(&ctx);
        assert_eq!(els.len() as u64, ctx.order().unwrap(), "{spec}");
        let zero = ctx.zero();
        let one = ctx.one();
        for a in &els {
            assert_eq!(ctx.add(a, &zero), *a);
            assert_eq!(ctx.mul(a, &one), *a);
            assert!(ctx.is_zero(&ctx.add(a, &ctx.neg(a))));
            if !ctx.is_zero(a) {
                assert!(ctx.is_one(&ctx.mul(a, &ctx.inv(a).unwrap())), "{spec}");
            }
            for b in &els {
                assert_eq!(ctx.add(a, b), ctx.add(b, a));
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
            }
        }
        // associativity and distributivity on a stride through the triples
        let step = (els.len() / 8).max(1);
        for a in els.iter().step_by(step) {
            for b in &els {
                for c in els.iter().step_by(step) {
                    assert_eq!(ctx.mul(&ctx.mul(a, b), c), ctx.mul(a, &ctx.mul(b, c)));
                    assert_eq!(ctx.add(&ctx.add(a, b), c), ctx.add(a, &ctx.add(b, c)));
                    assert_eq!(
                        ctx.mul(a, &ctx.add(b, c)),
                        ctx.add(&ctx.mul(a, b), &ctx.mul(a, c))
                    );
                }
            }
        }
        assert!(ctx.inv(&zero).is_err());
    }
}

#[test]
fn multiplicative_group_order() {
    for spec in SMALL {
        let ctx = make_field(spec).unwrap();
        let q = ctx.order().unwrap();
        for a in all(&ctx).iter().filter(|a| !ctx.is_zero(a)) {
            assert!(ctx.is_one(&ctx.pow(a, &BigInt::from(q - 1)).unwrap()), "{spec}");
        }
        if let Some(g) = ctx.generator() {
            assert!(ctx.contains(&g));
        }
    }
}

#[test]
fn frobenius_round_trip() {
    for spec in SMALL {
        let ctx = make_field(spec).unwrap();
        let p = ctx.characteristic();
        let e = ctx.degree() as i64;
        for a in all(&ctx) {
            let fa = ctx.frobenius(&a, 1).unwrap();
            assert_eq!(fa, ctx.pow(&a, &BigInt::from(p)).unwrap());
            for b in -3i64..=3 {
                assert_eq!(ctx.frobenius(&ctx.frobenius(&a, b).unwrap(), -b).unwrap(), a);
            }
            assert_eq!(ctx.frobenius(&a, e).unwrap(), a);
        }
    }
}

#[test]
fn additive_polynomials_are_additive() {
    for spec in ["F2", "F3", "F4", "F8", "F9", "F25"] {
        let ctx = make_field(spec).unwrap();
        let els = all(&ctx);
        let g = ctx.generator().unwrap_or_else(|| ctx.one());
        let p = AdditivePoly::new(&ctx, vec![g.clone(), ctx.one(), g]).unwrap();
        for a in &els {
            for b in &els {
                let lhs = p.eval(&ctx.add(a, b)).unwrap();
                let rhs = ctx.add(&p.eval(a).unwrap(), &p.eval(b).unwrap());
                assert_eq!(lhs, rhs, "{spec}");
            }
        }
    }
}

#[test]
fn roots_are_roots() {
    for spec in ["F4", "F9", "F16", "F27", "Q"] {
        let ctx = make_field(spec).unwrap();
        let c = ctx.from_int(-1);
        for n in 1..=6u64 {
            if let Ok(roots) = ctx.nth_roots(&c, n) {
                for r in roots {
                    assert_eq!(ctx.pow(&r, &BigInt::from(n)).unwrap(), c, "{spec} n={n}");
                }
            }
        }
    }
}

#[test]
fn format_parse_round_trip() {
    for spec in SMALL {
        let ctx = make_field(spec).unwrap();
        for a in all(&ctx) {
            assert_eq!(ctx.parse_coeff(&ctx.format_coeff(&a)).unwrap(), a, "{spec}");
        }
    }
}

#[test]
fn bad_fields() {
    assert!(make_field("F6").is_err());
    assert!(make_field("F4:x^2+1").is_err());
    assert!(make_field("F9:x^2+2*x+2").is_ok());
}
