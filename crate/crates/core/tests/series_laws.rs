use hahn::sample::{self, SeriesShape};
use hahn::{make_field, pow_rat, Cap, FieldCtx, Rat, Series};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: [&str; 5] = ["F2", "F3", "F4", "F9", "Q"];

fn setup(seed: u64, field: usize) -> (FieldCtx, ChaCha8Rng) {
    (make_field(FIELDS[field]).unwrap(), ChaCha8Rng::seed_from_u64(seed))
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Truncation of an exact series at a random cap above its lowest term.
fn truncated(exact: &Series, rng: &mut ChaCha8Rng) -> Series {
    let lo = exact.leading_term().map(|(e, _)| e.clone()).unwrap_or_else(Rat::zero);
    exact.truncate(&Cap::Finite(lo + r(rng.gen_range(1..=8), 2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(seed in any::<u64>(), field in 0..FIELDS.len()) {
        let (ctx, mut rng) = setup(seed, field);
        let shape = SeriesShape::default();
        let a = sample::series(&ctx, &mut rng, &shape);
        let b = sample::series(&ctx, &mut rng, &shape);
        let c = sample::series(&ctx, &mut rng, &shape);
        prop_assert!(a.add(&b).unwrap().agrees(&b.add(&a).unwrap()));
        prop_assert!(a.mul(&b).unwrap().agrees(&b.mul(&a).unwrap()));
        prop_assert!(a.add(&b).unwrap().add(&c).unwrap().agrees(&a.add(&b.add(&c).unwrap()).unwrap()));
        prop_assert!(a.mul(&b).unwrap().mul(&c).unwrap().agrees(&a.mul(&b.mul(&c).unwrap()).unwrap()));
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.agrees(&rhs));
        prop_assert!(a.sub(&a).unwrap().terms().next().is_none());
        prop_assert_eq!(a.mul(&Series::one(&ctx)).unwrap(), a.clone());
    }

    #[test]
    fn times_inverse_is_one(seed in any::<u64>(), field in 0..FIELDS.len()) {
        let (ctx, mut rng) = setup(seed, field);
        let x = sample::series(&ctx, &mut rng, &SeriesShape::default());
        let inv = x.invert(&r(4, 1)).unwrap();
        let prod = x.mul(&inv).unwrap();
        prop_assert!(prod.agrees(&Series::one(&ctx)), "{} * {} = {}", x, inv, prod);
        if x.is_exact() {
            prop_assert!(prod.cap() >= &Cap::finite(r(4, 1) + x.valuation_bound().as_finite().unwrap().clone()));
        }
    }

    #[test]
    fn pow_laws(seed in any::<u64>(), field in 0..FIELDS.len()) {
        let (ctx, mut rng) = setup(seed, field);
        let x = sample::monic_positive(&ctx, &mut rng, 0.5);
        let a = sample::exponent(&mut rng, -2, 2);
        let b = sample::exponent(&mut rng, -2, 2);
        let req = r(4, 1);
        let xa = pow_rat(&x, &a, &req).unwrap();
        let xb = pow_rat(&x, &b, &req).unwrap();
        let xab = pow_rat(&x, &(&a + &b), &req).unwrap();
        prop_assert!(xa.mul(&xb).unwrap().agrees(&xab));
        let nested = pow_rat(&xa, &b, &req).unwrap();
        prop_assert!(nested.agrees(&pow_rat(&x, &(&a * &b), &req).unwrap()));
        if !a.is_zero() {
            prop_assert!(pow_rat(&xa, &a.recip(), &req).unwrap().agrees(&x));
        }
        prop_assert!(xa.mul(&pow_rat(&x, &-&a, &req).unwrap()).unwrap().agrees(&Series::one(&ctx)));
    }

    /// Coefficients certified from a truncated input match the exact input.
    #[test]
    fn caps_are_sound(seed in any::<u64>(), field in 0..FIELDS.len()) {
        let (ctx, mut rng) = setup(seed, field);
        let exact_shape = SeriesShape { capped: 0.0, ..SeriesShape::default() };
        let a = sample::series(&ctx, &mut rng, &exact_shape);
        let b = sample::series(&ctx, &mut rng, &exact_shape);
        let (ta, tb) = (truncated(&a, &mut rng), truncated(&b, &mut rng));
        let req = r(5, 1);
        let check = |lo: Series, hi: Series| lo.agrees_below(&hi, lo.cap());
        prop_assert!(check(ta.add(&tb).unwrap(), a.add(&b).unwrap()));
        prop_assert!(check(ta.mul(&tb).unwrap(), a.mul(&b).unwrap()));
        if ta.leading_term().is_some() {
            prop_assert!(check(ta.invert(&req).unwrap(), a.invert(&r(12, 1)).unwrap()));
        }
        let x = sample::monic_positive(&ctx, &mut rng, 0.0);
        let tx = truncated(&x, &mut rng);
        let i = sample::exponent(&mut rng, -2, 2);
        prop_assert!(check(pow_rat(&tx, &i, &req).unwrap(), pow_rat(&x, &i, &r(12, 1)).unwrap()));
    }
}

#[test]
fn frobenius_is_a_ring_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in ["F2", "F3", "F4", "F9"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..50 {
            let a = sample::series(&ctx, &mut rng, &SeriesShape::default());
            let b = sample::series(&ctx, &mut rng, &SeriesShape::default());
            let f = |s: &Series| s.frobenius(1).unwrap();
            assert!(f(&a.mul(&b).unwrap()).agrees(&f(&a).mul(&f(&b)).unwrap()));
            assert!(f(&a.add(&b).unwrap()).agrees(&f(&a).add(&f(&b)).unwrap()));
            assert_eq!(f(&a).frobenius(-1).unwrap(), a);
            let p = ctx.characteristic();
            assert!(f(&a).agrees(&a.pow_u64(p)));
        }
    }
}

#[test]
fn text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in FIELDS {
        let ctx = make_field(spec).unwrap();
        for _ in 0..100 {
            let s = sample::series(&ctx, &mut rng, &SeriesShape::default());
            assert_eq!(Series::parse(&ctx, &s.to_string()).unwrap(), s, "{s}");
        }
    }
}
