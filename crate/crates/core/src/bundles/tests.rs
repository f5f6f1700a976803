use super::*;
use crate::dim2::{dual_system_2d, System2D};
use crate::sample;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn path(base: Base, pts: &[(i64, i64, i64)]) -> ClassPath {
    // (t numerator over `d`, value numerator over `d`, d)
    let pairs: Vec<_> = pts.iter().map(|&(t, v, d)| (q(t, d), q(v, d))).collect();
    ClassPath::from_pairs(base, &pairs).unwrap()
}

fn all_transverse(a: &TransverseAtlas) -> bool {
    a.charts()
        .iter()
        .all(|c| c.points().all(|(_, th, thh)| transverse_locus(th, thh)))
}

#[test]
fn heisenberg_winding() {
    let h = heisenberg_descriptor();
    assert_eq!(winding_number(&h.theta), Ok(1));
    assert_eq!(winding_number(&h.theta.reversed()), Ok(-1));
    assert!(pointwise_commutative(&h.theta_hat));
}

#[test]
fn constant_path_winds_zero() {
    let p = path(Base::Circle, &[(0, 1, 3), (1, 1, 3), (3, 1, 3)]);
    assert_eq!(winding_number(&p), Ok(0));
    assert_eq!(commutative_origin_check(&p), Ok(true));
}

#[test]
fn path_validation() {
    let bad_end = ClassPath::from_pairs(Base::Circle, &[(int(0), int(0)), (int(1), q(1, 3))]);
    assert!(matches!(bad_end, Err(Error::InvalidPath(_))));
    let unordered = ClassPath::from_pairs(
        Base::Interval,
        &[(int(0), int(0)), (q(1, 2), int(0)), (q(1, 3), int(0)), (int(1), int(0))],
    );
    assert!(matches!(unordered, Err(Error::InvalidPath(_))));
    let half = ClassPath::from_pairs(Base::Interval, &[(int(0), int(0)), (int(1), q(1, 2))]);
    assert!(matches!(half, Err(Error::AmbiguousLift { .. })));
    let p = path(Base::Interval, &[(0, 0, 4), (4, 1, 4)]);
    assert!(matches!(winding_number(&p), Err(Error::InvalidPath(_))));
}

#[test]
fn json_round_trip() {
    let p = twisted_heisenberg_path(8).unwrap();
    let s = serde_json::to_string(&p).unwrap();
    assert!(s.contains("\"base\":\"circle\""));
    let back: ClassPath = serde_json::from_str(&s).unwrap();
    assert_eq!(back, p);
    assert_eq!(back.thickening(), Some((q(1, 2), int(1))));
    let a = twisted_heisenberg_atlas_with(8).unwrap();
    let back: TransverseAtlas = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
    let bad = r#"{"base":"circle","samples":[{"t":"0","value":"0"},{"t":"1","value":"1/4"}]}"#;
    assert!(serde_json::from_str::<ClassPath>(bad).is_err());
}

#[test]
fn coverage() {
    let a = |s: (i64, i64), e: (i64, i64)| Arc::new(q(s.0, s.1), q(e.0, e.1));
    assert!(arcs_cover(Base::Circle, &[a((0, 1), (3, 4)), a((1, 2), (5, 4))]));
    // 0 itself is missed
    assert!(!arcs_cover(Base::Circle, &[a((0, 1), (3, 4)), a((1, 2), (1, 1))]));
    assert!(arcs_cover(Base::Interval, &[a((0, 1), (1, 2)), a((1, 4), (1, 1))]));
    assert!(!arcs_cover(Base::Interval, &[a((0, 1), (1, 2)), a((1, 2), (1, 1))]));
}

#[test]
fn chart_rejects_nontransverse_sample() {
    let r = Chart::new("x", Arc::new(int(0), int(1)), vec![(int(0), int(1), int(1))]);
    assert!(matches!(r, Err(Error::InvalidAtlas(_))));
}

#[test]
fn twisted_atlas_shape() {
    let a = twisted_heisenberg_atlas();
    assert_eq!(a.charts().len(), 2);
    for c in a.charts() {
        for (_, th, thh) in c.points() {
            assert_eq!(th * thh, int(2));
            assert!(*th >= int(1) && *th <= int(2));
        }
    }
    let torus = a.torus_path().unwrap();
    assert_eq!(torus.samples(), twisted_heisenberg_path(1000).unwrap().samples());
    assert_eq!(winding_number(&torus), Ok(1));
    assert_eq!(commutative_origin_check(&torus), Ok(false));
    let mackey = a.mackey_path().unwrap();
    assert!(!pointwise_commutative(&mackey));
    // 2/(1+s) at s = 1/2
    let at = mackey.samples().iter().find(|s| s.t == q(1, 4)).unwrap();
    assert_eq!(at.value, q(1, 3));
}

#[test]
fn twisted_dual_matches_predual_parameters() {
    let d = dualize_atlas(&twisted_heisenberg_atlas_with(40).unwrap()).unwrap();
    let (u, v) = (&d.charts()[0], &d.charts()[1]);
    for (t, th, thh) in u.points() {
        let s = if *t <= q(1, 2) { int(2) * t } else { int(1) };
        assert_eq!(*th, -int(2) / (int(1) + &s));
        assert_eq!(*thh, -(int(1) + &s));
    }
    for (t, th, thh) in v.points() {
        let s = if *t <= int(1) { int(0) } else { int(2) * (t - int(1)) };
        assert_eq!(*th, -int(2) / (int(1) + &s));
        assert_eq!(*thh, -(int(1) + &s));
    }
}

#[test]
fn heisenberg_commutative_side_dualises_to_theta0() {
    let h = heisenberg_descriptor();
    let d = dualize_atlas(&h.commutative_atlas).unwrap();
    assert_eq!(d.torus_path().unwrap(), h.theta);
    assert!(pointwise_commutative(&d.mackey_path().unwrap()));
}

#[test]
fn hyperbola_lift_reproduces_twisted_atlas() {
    let p = twisted_heisenberg_path(40).unwrap();
    let a = build_transverse_atlas(&p, LiftStrategy::HyperbolaLift).unwrap();
    assert!(all_transverse(&a));
    for c in a.charts() {
        for (_, th, thh) in c.points() {
            assert_eq!(th * thh, int(2));
        }
    }
    assert_eq!(a.torus_path().unwrap(), twisted_heisenberg_atlas_with(40).unwrap().torus_path().unwrap());
}

#[test]
fn hyperbola_lift_needs_the_thickening() {
    let h = heisenberg_descriptor();
    assert!(matches!(
        build_transverse_atlas(&h.theta, LiftStrategy::HyperbolaLift),
        Err(Error::NoLift { .. })
    ));
    assert!(build_transverse_atlas(&twisted_heisenberg_path(8).unwrap(), LiftStrategy::HyperbolaLift).is_ok());
}

#[test]
fn hyperbola_lift_fails_on_oscillation() {
    let pts: Vec<(i64, i64, i64)> = (0..=10)
        .map(|j| (j, if j % 2 == 0 { 9 } else { 1 }, 10))
        .collect();
    let p = path(Base::Interval, &pts);
    assert!(matches!(
        build_transverse_atlas(&p, LiftStrategy::HyperbolaLift),
        Err(Error::NoLift { .. })
    ));
    let a = build_transverse_atlas(&p, LiftStrategy::AxisLift).unwrap();
    assert!(a.charts().iter().all(|c| c.omega_hat().iter().all(|s| s.value.is_zero())));
}

#[test]
fn short_circle_paths_are_subdivided() {
    let p = path(Base::Circle, &[(0, 0, 3), (1, 1, 3), (2, 2, 3), (3, 0, 3)]);
    let a = build_transverse_atlas(&p, LiftStrategy::AxisLift).unwrap();
    assert!(a.charts().len() >= 2);
    assert_eq!(winding_number(&a.torus_path().unwrap()), Ok(1));
}

#[test]
fn monodromy_powers() {
    assert_eq!(k_monodromy(1).m, [[1, 1], [0, 1]]);
    assert!(k_monodromy(0).is_identity());
    assert_eq!(k_monodromy(2).m, [[1, 2], [0, 1]]);
    assert_eq!(k_monodromy(-3).m, [[1, -3], [0, 1]]);
    for w in -3..=3 {
        assert_eq!(k_monodromy(w).is_identity(), w == 0);
        assert!(k_monodromy(w).mul(&k_monodromy(-w)).is_identity());
    }
    assert!(MonodromyMatrix::new([[2, 0], [0, 1]]).is_err());
}

#[test]
fn example_bundle_shapes() {
    let e = example_bundles();
    let (a0, a1) = e.a2.endpoint_values();
    assert_eq!((a0, a1), (int(0), q(1, 2)));
    assert_eq!(e.a2.chart("V").unwrap().pieces, vec![Arc::new(q(1, 8), q(7, 8))]);
    assert_eq!(
        e.a2.chart("U").unwrap().pieces,
        vec![Arc::new(int(0), q(1, 4)), Arc::new(q(3, 4), int(1))]
    );
    assert!(matches!(e.a2.gluing, Gluing::StableIsomorphism { .. }));
    let (b0, b1) = e.a1.endpoint_values();
    assert_eq!(b0, b1);
    assert!(e.a1.locally_omega_trivial && !e.a1.globally_omega_trivial);
    assert_eq!(winding_number(&e.a1.path), Ok(1));
    assert!(all_transverse(&e.a1.atlas) && all_transverse(&e.a2.atlas));
}

#[test]
fn dimension_guard() {
    assert!(check_dimension(2).is_ok());
    assert_eq!(check_dimension(4), Err(Error::UnsupportedDimension(4)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn winding_additive_and_reversal(seed in any::<u64>(), w1 in -3i64..=3, w2 in -3i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1 = sample::circle_path(&mut rng, w1);
        let p2 = sample::circle_path(&mut rng, w2);
        prop_assert_eq!(winding_number(&p1), Ok(w1));
        prop_assert_eq!(winding_number(&p1.concat(&p2).unwrap()), Ok(w1 + w2));
        prop_assert_eq!(winding_number(&p1.reversed()), Ok(-w1));
    }

    #[test]
    fn origin_check_matches_monodromy(seed in any::<u64>(), w in -3i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample::circle_path(&mut rng, w);
        let wn = winding_number(&p).unwrap();
        prop_assert_eq!(commutative_origin_check(&p).unwrap(), k_monodromy(wn).is_identity());
    }

    #[test]
    fn built_atlases_transverse_and_dualisable(seed in any::<u64>(), w in -2i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample::circle_path(&mut rng, w);
        for strategy in [LiftStrategy::AxisLift, LiftStrategy::HyperbolaLift] {
            let a = match build_transverse_atlas(&p, strategy) {
                Ok(a) => a,
                Err(Error::NoLift { .. }) if strategy == LiftStrategy::HyperbolaLift => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!(all_transverse(&a));
            prop_assert_eq!(a.torus_path().unwrap(), p.clone());
            let d = dualize_atlas(&a).unwrap();
            prop_assert!(all_transverse(&d));
            let dd = dualize_atlas(&d).unwrap();
            prop_assert_eq!(&dd, &a);
            // sample-wise agreement with the closed form
            for (c, dc) in a.charts().iter().zip(d.charts()) {
                for ((_, th, thh), (_, nth, nthh)) in c.points().zip(dc.points()) {
                    let sys = dual_system_2d(&System2D::new(frac(th), thh.clone()), th).unwrap();
                    prop_assert_eq!(sys.torus_class(), &frac(nth));
                    prop_assert_eq!(sys.mackey(), nthh);
                }
            }
        }
    }
}

#[test]
fn chart_lifts_must_share_samples() {
    let ls = |t: Rational, v: Rational| LiftSample { t, value: v };
    let r = Chart::from_lifts(
        "x",
        Arc::new(int(0), int(1)),
        vec![ls(int(0), int(0)), ls(int(1), int(0))],
        vec![ls(int(0), int(0)), ls(q(1, 2), int(0))],
    );
    assert!(matches!(r, Err(Error::InvalidAtlas(_))));
}
