use cherednik::params::{is_regular_by_degrees, regularity_of_context, regularity_probe, Regularity};
use cherednik::pbw::AlgebraContext;
use cherednik::scalars::{rat, CycloNumber};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn probe_verdicts_are_monotone_in_the_bound(k in -7i64..=7, b in 2u32..=8) {
        let ctx = AlgebraContext::named("cyclic:2", &[CycloNumber::from_rational(rat(k, 2), 2)]).unwrap();
        let small = regularity_probe(&ctx, b).unwrap();
        let large = regularity_probe(&ctx, b + 6).unwrap();
        if small.regularity == Regularity::NotRegular {
            prop_assert_eq!(large.regularity, Regularity::NotRegular);
        }
        prop_assert_eq!(small.witnesses.is_empty(), small.is_regular());
    }
}

#[test]
fn degree_criterion_for_s3() {
    for (n, d, regular) in [(1, 2, false), (1, 3, false), (2, 3, false), (1, 5, true), (3, 1, true), (1, 6, true)] {
        assert_eq!(is_regular_by_degrees(&[2, 3], &rat(n, d)).is_regular(), regular, "c = {n}/{d}");
    }
    let ctx = AlgebraContext::named("s3-reflection", &[CycloNumber::from_rational(rat(1, 3), 1)]).unwrap();
    assert_eq!(regularity_of_context(&ctx).regularity, Regularity::NotRegular);
}

#[test]
fn unequal_cyclic_parameters_use_the_probe() {
    let ctx = AlgebraContext::named("cyclic:3", &[
        CycloNumber::from_rational(rat(1, 7), 3),
        CycloNumber::from_rational(rat(1, 11), 3),
    ])
    .unwrap();
    let v = regularity_of_context(&ctx);
    assert_eq!(v.regularity, Regularity::RegularUpToBound);
    assert_eq!(v.bound, Some(20));
}
