use meandist_core::extremal::bound_constants;
use meandist_core::profiles::{functional_i, rearrange, AffineProfileParams, Profile};
use meandist_core::sampling::{sample_point, RngStream};
use meandist_core::ConvexBody;
use proptest::prelude::*;

fn unit(v: Vec<f64>) -> Option<Vec<f64>> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 1e-3).then(|| v.iter().map(|x| x / n).collect())
}

fn direction(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d).prop_filter_map("zero vector", unit)
}

fn body3() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        (0.1f64..3.0).prop_map(|r| ConvexBody::ball(vec![0.5, -0.2, 1.0], r).unwrap()),
        prop::collection::vec(0.1f64..2.0, 3).prop_map(|a| ConvexBody::ellipsoid(vec![0.0; 3], a).unwrap()),
        prop::collection::vec(0.1f64..2.0, 3)
            .prop_map(|w| ConvexBody::cuboid(vec![-0.3; 3], w.iter().map(|x| x - 0.3).collect()).unwrap()),
        (0.05f64..1.0).prop_map(|d| meandist_core::extremal::k_delta(3, d).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn width_is_even_and_support_is_homogeneous(body in body3(), u in direction(3), lambda in 0.1f64..5.0) {
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        let w = body.width(&u).unwrap();
        prop_assert!((w - body.width(&neg).unwrap()).abs() <= 1e-12 * (1.0 + w));
        let scaled = body.scaled(lambda).unwrap();
        let h = body.support(&u).unwrap();
        prop_assert!((scaled.support(&u).unwrap() - lambda * h).abs() <= 1e-12 * (1.0 + lambda * h.abs()));
    }

    #[test]
    fn chord_through_interior_is_bounded_by_diameter(body in body3(), u in direction(3), seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        let x = sample_point(&body, &mut rng).unwrap();
        prop_assert!(body.contains(&x).unwrap());
        let c = body.chord_length(&x, &u).unwrap();
        prop_assert!(c > 0.0);
        prop_assert!(c <= body.diameter() * (1.0 + 1e-12));
        prop_assert!(c <= body.width(&u).unwrap() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn random_profiles_satisfy_the_bounds(seed in any::<u64>(), d in 2usize..7, m in 3usize..20, even in any::<bool>()) {
        let mut rng = RngStream::new(seed, 0);
        let p = Profile::random(d, m, even, &mut rng).unwrap();
        prop_assert!(p.validate().all_passed());
        let i = functional_i(&p).unwrap();
        let lower = bound_constants(d).unwrap().lower;
        prop_assert!(i >= lower - 1e-12, "I = {i} below {lower}");
        prop_assert!(i <= 1.0 / 3.0 + 1e-12);
        let r = rearrange(&p).unwrap();
        prop_assert!(functional_i(&r).unwrap() <= i + 1e-12);
        prop_assert!(rearrange(&r).unwrap().l1_distance(&r) < 1e-10);
        // I is invariant under reflection.
        prop_assert!((functional_i(&p.reflected()).unwrap() - i).abs() < 1e-13);
    }

    #[test]
    fn affine_family_stays_between_ramp_and_uniform(d in 2usize..9, a in 0.0f64..10.0, gap in 1e-6f64..10.0) {
        let prm = AffineProfileParams::new(d, a, a + gap).unwrap();
        let i = meandist_core::profiles::affine_i(&prm);
        let df = d as f64;
        prop_assert!(i <= 1.0 / 3.0 + 1e-15);
        prop_assert!(i >= 2.0 * df / ((df + 1.0) * (2.0 * df + 1.0)) - 1e-15);
        let q = functional_i(&prm.profile().unwrap()).unwrap();
        prop_assert!((q - i).abs() < 1e-10);
    }
}
