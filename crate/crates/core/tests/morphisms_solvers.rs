use hahn::sample::{self, SeriesShape};
use hahn::series::Valuation;
use hahn::solvers::solve_additive_parts;
use hahn::{
    apply_transform, classify_orbit, make_field, orbit_transform, psi_lambda, solve_additive,
    substitute, thm2_map, trace, valuation_sign_via_trace, AdditivePoly, Rat, Series, Sign,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[test]
fn maps_are_homomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in ["F2", "F3", "F4", "F9", "Q"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..30 {
            let a = sample::series(&ctx, &mut rng, &SeriesShape::default());
            let b = sample::series(&ctx, &mut rng, &SeriesShape::default());
            let l = sample::exp_hom(&ctx, &mut rng);
            let scale = sample::exponent(&mut rng, 1, 3);
            let x = sample::monic_positive(&ctx, &mut rng, 0.3);
            let maps: Vec<Box<dyn Fn(&Series) -> Series>> = vec![
                Box::new(|s| psi_lambda(&l, s).unwrap()),
                Box::new(|s| thm2_map(&l, &scale, s).unwrap()),
                Box::new(|s| substitute(&x, s, &r(4, 1)).unwrap().series),
            ];
            for f in &maps {
                let sum = a.add(&b).unwrap();
                assert!(f(&sum).agrees(&f(&a).add(&f(&b)).unwrap()), "{spec}: {a} ; {b}");
                let prod = a.mul(&b).unwrap();
                assert!(f(&prod).agrees(&f(&a).mul(&f(&b)).unwrap()), "{spec}: {a} ; {b}");
            }
            let inv = l.inverse().unwrap();
            assert_eq!(psi_lambda(&inv, &psi_lambda(&l, &a).unwrap()).unwrap(), a);
        }
    }
}

#[test]
fn substitution_valuation_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in ["F2", "F3", "F9", "Q"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..40 {
            let x = sample::monic_positive(&ctx, &mut rng, 0.5);
            let y = sample::series(&ctx, &mut rng, &SeriesShape::default());
            let z = substitute(&x, &y, &r(6, 1)).unwrap().series;
            if let (Valuation::Finite(vx), Valuation::Finite(vy)) = (x.valuation(), y.valuation()) {
                if let Valuation::Finite(vz) = z.valuation() {
                    assert_eq!(vz, &vx * &vy);
                }
            }
            assert_eq!(substitute(&x, &Series::t(&ctx), &r(6, 1)).unwrap().series, x);
        }
    }
}

#[test]
fn orbit_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for spec in ["F2", "F3", "F4", "F9", "Q"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..40 {
            let y = sample::series(&ctx, &mut rng, &SeriesShape::default());
            if classify_orbit(&y).is_err() {
                continue;
            }
            let Ok(tr) = orbit_transform(&y, &r(6, 1)) else { continue };
            let img = apply_transform(&tr, &Series::t(&ctx), &r(6, 1)).unwrap();
            assert!(img.agrees(&y), "{spec}: {y} -> {img}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn solver_back_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for spec in ["F2", "F3", "F4", "F9"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..40 {
            let p = sample::additive_poly(&ctx, &mut rng, 2);
            let b = sample::trace_zero(&ctx, &mut rng);
            let parts = solve_additive_parts(&p, &b, &r(-1, 8), &r(6, 1)).unwrap();
            let (neg, _, pos) = b.split_by_sign();
            let p_neg = p.eval_series(&parts.negative).unwrap();
            let p_pos = p.eval_series(&parts.positive).unwrap();
            assert!(p_neg.agrees(&neg) || neg.is_empty(), "{spec} P={p}: {b}");
            assert!(p_pos.agrees(&pos), "{spec} P={p}: {b}");
            assert!(ctx.is_zero(&parts.constant));
        }
    }
}

#[test]
fn solve_positive_only_is_certified() {
    let f2 = make_field("F2").unwrap();
    let p = AdditivePoly::canonical(&f2).unwrap();
    let b = Series::t(&f2);
    let x = solve_additive(&p, &b, &r(16, 1)).unwrap();
    assert_eq!(trace(&x).unwrap(), f2.zero());
    assert!(p.eval_series(&x).unwrap().agrees(&b));
}

#[test]
fn sign_matches_valuation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in ["F2", "F3", "F4"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..100 {
            let x = sample::trace_zero(&ctx, &mut rng);
            let (v, _) = x.leading_term().unwrap();
            let expected = if v.is_negative() { Sign::Negative } else { Sign::Positive };
            assert_eq!(valuation_sign_via_trace(&x).unwrap(), expected, "{spec}: {x}");
        }
    }
}
