use std::sync::Arc;

use cherednik::parse::parse_expression;
use cherednik::pbw::{AlgebraContext, FiltrationKind};
use cherednik::scalars::{rat, CycloNumber};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn context(name: &str) -> Arc<AlgebraContext> {
    match name {
        "cyclic:3" => AlgebraContext::named(name, &[
            CycloNumber::from_rational(rat(1, 3), 3),
            CycloNumber::from_rational(rat(-2, 5), 3),
        ])
        .unwrap(),
        "cyclic:4" => AlgebraContext::named(name, &[CycloNumber::from_rational(rat(2, 7), 4)]).unwrap(),
        "s3-reflection" => AlgebraContext::named(name, &[CycloNumber::from_rational(rat(1, 4), 1)]).unwrap(),
        "minus-id:2" => AlgebraContext::named(name, &[]).unwrap(),
        _ => AlgebraContext::named(name, &[CycloNumber::from_rational(rat(1, 3), 2)]).unwrap(),
    }
}

fn family() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["cyclic:2", "cyclic:3", "cyclic:4", "minus-id:2", "s3-reflection"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative_and_bilinear(name in family(), seed in any::<u64>()) {
        let ctx = context(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ctx.random_element(&mut rng, 2, 2);
        let b = ctx.random_element(&mut rng, 2, 2);
        let c = ctx.random_element(&mut rng, 2, 2);
        prop_assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
        prop_assert_eq!(ctx.mul(&a, &(&b + &c)), &ctx.mul(&a, &b) + &ctx.mul(&a, &c));
        let k = ctx.scalar(3);
        prop_assert_eq!(ctx.mul(&a.scale(&k), &b), ctx.mul(&a, &b).scale(&k));
    }

    #[test]
    fn filtration_degrees_are_subadditive(name in family(), seed in any::<u64>()) {
        let ctx = context(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ctx.random_element(&mut rng, 3, 3);
        let b = ctx.random_element(&mut rng, 3, 3);
        let ab = ctx.mul(&a, &b);
        for kind in [FiltrationKind::Bernstein, FiltrationKind::Geometric] {
            if let (Some(da), Some(db), Some(dab)) = (a.filtration_degree(kind), b.filtration_degree(kind), ab.filtration_degree(kind)) {
                prop_assert!(dab <= da + db);
            }
        }
    }

    #[test]
    fn fourier_is_a_homomorphism_and_opposite_an_anti_homomorphism(name in family(), seed in any::<u64>()) {
        let ctx = context(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ctx.random_element(&mut rng, 2, 2);
        let b = ctx.random_element(&mut rng, 2, 2);
        let (dual, fab) = ctx.fourier_image(&ctx.mul(&a, &b)).unwrap();
        let (_, fa) = ctx.fourier_image(&a).unwrap();
        let (_, fb) = ctx.fourier_image(&b).unwrap();
        prop_assert_eq!(fab, dual.mul(&fa, &fb));
        let (opp, oab) = ctx.opposite_image(&ctx.mul(&a, &b)).unwrap();
        let (_, oa) = ctx.opposite_image(&a).unwrap();
        let (_, ob) = ctx.opposite_image(&b).unwrap();
        prop_assert_eq!(oab, opp.mul(&ob, &oa));
    }

    #[test]
    fn serialized_elements_read_back(name in family(), seed in any::<u64>()) {
        let ctx = context(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = ctx.random_element(&mut rng, 4, 3);
        let text = ctx.format_element(&e);
        prop_assert_eq!(ctx.format_element(&parse_expression(&text, &ctx).unwrap()), text);
        prop_assert_eq!(ctx.element_from_records(&e.to_records()).unwrap(), e);
    }
}

#[test]
fn literal_fourier_squares_to_the_antipode() {
    let ctx = context("cyclic:3");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let e = ctx.random_element(&mut rng, 3, 3);
        let (dual, once) = ctx.fourier_image_literal(&e).unwrap();
        let (_, twice) = dual.fourier_image_literal(&once).unwrap();
        assert_eq!(twice, e.antipode());
    }
}

#[test]
fn zero_parameter_gives_the_weyl_algebra_smash_product() {
    for name in ["cyclic:3", "s3-reflection"] {
        let n = if name == "s3-reflection" { 1 } else { 3 };
        let ctx = AlgebraContext::named(name, &[CycloNumber::zero(n)]).unwrap();
        for i in 0..ctx.rank() {
            for j in 0..ctx.rank() {
                let comm = &ctx.mul(&ctx.y(i), &ctx.x(j)) - &ctx.mul(&ctx.x(j), &ctx.y(i));
                assert_eq!(comm.is_zero(), i != j);
                if i == j {
                    assert_eq!(comm, ctx.one());
                }
            }
        }
    }
}

#[test]
fn expression_examples() {
    let ctx = context("cyclic:2");
    assert_eq!(ctx.format_element(&parse_expression("y1*x1", &ctx).unwrap()), "y1*x1");
    assert_eq!(ctx.format_element(&parse_expression("x1*y1", &ctx).unwrap()), "-1 + y1*x1 + 2/3*g1");
    assert_eq!(parse_expression("s*s", &ctx).unwrap(), ctx.one());
    let err = parse_expression("x1*(", &ctx).unwrap_err();
    assert!(err.to_string().contains("column 4"));
    assert!(parse_expression("x2", &ctx).is_err());
}
