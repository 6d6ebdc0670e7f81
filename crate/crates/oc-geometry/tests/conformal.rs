mod common;

use common::{hpoint, point_in_shell, random_point, rel, unit_imag, unit_imaginary};
use oc_geometry::conformal::*;
use oc_geometry::heisenberg::{gauge_norm, h_inv, h_mul};
use oc_geometry::{GeometryError, HPoint, Octonion};
use proptest::prelude::*;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kernel_residual(w: &GroupWord, xi: &HPoint, eta: &HPoint) -> f64 {
    let (gx, lx) = apply_word(w, xi).unwrap();
    let (gy, ly) = apply_word(w, eta).unwrap();
    let lhs = gauge_norm(&h_mul(&h_inv(&gx), &gy)).powi(2);
    let rhs = lx * ly * gauge_norm(&h_mul(&h_inv(xi), eta)).powi(2);
    rel(lhs, rhs)
}

fn random_gen<R: Rng>(rng: &mut R) -> GroupGen {
    match rng.random_range(0..4) {
        0 => GroupGen::Dilation(rng.random_range(0.3..3.0)),
        1 => GroupGen::Translation(random_point(rng, 1.0)),
        2 => GroupGen::Rotation(unit_imaginary(rng)),
        _ => GroupGen::Inversion,
    }
}

#[test]
fn generator_examples() {
    let p = HPoint::from_parts([0.5, 1.0, 0.0, -0.2, 0.0, 0.0, 0.3, 0.0], [0.1, 0.0, 0.2, 0.0, -0.4, 0.0, 0.0]);
    let d = apply_gen(&GroupGen::Dilation(0.5), &p).unwrap();
    assert_eq!(d, HPoint { x: p.x.scale(0.5), t: p.t.scale(0.25) });
    assert!(rel(gauge_norm(&d), 0.5 * gauge_norm(&p)) < 1e-15);
    let r = apply_gen(&GroupGen::Inversion, &HPoint::new(Octonion::ONE, Octonion::ZERO)).unwrap();
    assert_eq!(r, HPoint::new(-Octonion::ONE, Octonion::ZERO));
    assert_eq!(conf_factor(&GroupGen::Dilation(0.7), &p).unwrap(), 0.7);
    assert_eq!(conf_factor(&GroupGen::Translation(p), &p).unwrap(), 1.0);
    assert_eq!(conf_factor(&GroupGen::Rotation(Octonion::basis(4)), &p).unwrap(), 1.0);
    assert!(rel(conf_factor(&GroupGen::Inversion, &p).unwrap(), gauge_norm(&p).powi(-2)) < 1e-15);
}

#[test]
fn word_examples() {
    let p = HPoint::from_parts([0.5, 1.0, 0.0, -0.2, 0.0, 0.0, 0.3, 0.0], [0.1, 0.0, 0.2, 0.0, -0.4, 0.0, 0.0]);
    assert_eq!(apply_word(&GroupWord::default(), &p).unwrap(), (p, 1.0));
    let (q, l) = apply_word(&GroupWord(vec![GroupGen::Inversion, GroupGen::Inversion]), &p).unwrap();
    assert!(q.max_abs_diff(&p) < 1e-14 && (l - 1.0).abs() < 1e-14);
    let (q, l) = apply_word(&GroupWord(vec![GroupGen::Dilation(0.3), GroupGen::Dilation(1.0 / 0.3)]), &p).unwrap();
    assert!(q.max_abs_diff(&p) < 1e-15 && (l - 1.0).abs() < 1e-15);
    assert!(matches!(apply_gen(&GroupGen::Inversion, &HPoint::IDENTITY), Err(GeometryError::Pole { .. })));
}

#[test]
fn words_invert() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let w = GroupWord((0..5).map(|_| random_gen(&mut rng)).collect());
        let p = point_in_shell(&mut rng, 0.5, 2.0);
        let Ok((q, l)) = apply_word(&w, &p) else { continue };
        let (back, l2) = apply_word(&w.inverse(), &q).unwrap();
        assert!(back.max_abs_diff(&p) < 1e-9 * (1.0 + gauge_norm(&p)));
        assert!((l * l2 - 1.0).abs() < 1e-10);
    }
}

#[test]
fn kernel_identity_per_generator_and_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let families: [fn(&mut ChaCha8Rng) -> GroupGen; 4] = [
        |r| GroupGen::Dilation(r.random_range(0.2..5.0)),
        |r| GroupGen::Translation(random_point(r, 1.5)),
        |r| GroupGen::Rotation(unit_imaginary(r)),
        |_| GroupGen::Inversion,
    ];
    for family in families {
        for _ in 0..100 {
            let w = GroupWord(vec![family(&mut rng)]);
            let xi = point_in_shell(&mut rng, 0.2, 3.0);
            let eta = point_in_shell(&mut rng, 0.2, 3.0);
            assert!(kernel_residual(&w, &xi, &eta) <= 1e-10);
        }
    }
    for _ in 0..100 {
        let w = GroupWord((0..4).map(|_| random_gen(&mut rng)).collect());
        let xi = point_in_shell(&mut rng, 0.2, 3.0);
        let eta = point_in_shell(&mut rng, 0.2, 3.0);
        if apply_word(&w, &xi).is_ok() && apply_word(&w, &eta).is_ok() {
            assert!(kernel_residual(&w, &xi, &eta) <= 1e-10);
        }
    }
}

#[test]
fn glue_map_examples() {
    let p = HPoint::new(Octonion::ONE.scale(1.0 / 2f64.sqrt()), Octonion::ZERO);
    let q = glue_map(0.25, &GroupWord::default(), &p).unwrap();
    assert!((gauge_norm(&q) - 0.25 / gauge_norm(&p)).abs() < 1e-15);
    assert!((gauge_norm(&q) - 0.353_553_390_593_273_7).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let t = rng.random_range(0.1..0.9);
        let a = GroupWord(vec![GroupGen::Rotation(unit_imaginary(&mut rng)), GroupGen::Rotation(unit_imaginary(&mut rng))]);
        let p = point_in_shell(&mut rng, t + 1e-3, 1.0 - 1e-3);
        let q = glue_map(t, &a, &p).unwrap();
        assert!(rel(gauge_norm(&q), t / gauge_norm(&p)) < 1e-12);
        let s = point_in_shell(&mut rng, t.sqrt(), t.sqrt() + 1e-12);
        assert!((gauge_norm(&glue_map(t, &a, &s).unwrap()) - t.sqrt()).abs() < 1e-10);
    }
    assert!(glue_map(0.5, &GroupWord(vec![GroupGen::Inversion]), &p).is_err());
}

#[test]
fn json_records() {
    let w: GroupWord = serde_json::from_str(
        r#"[{"kind":"dilation","delta":0.5},{"kind":"rotation","mu":[0,1,0,0,0,0,0,0]},{"kind":"inversion"},
            {"kind":"translation","x":[1,0,0,0,0,0,0,0],"t":[0,0,0,0,0,0,1]}]"#,
    )
    .unwrap();
    assert_eq!(w.0[0], GroupGen::Dilation(0.5));
    assert_eq!(w.0[1], GroupGen::Rotation(Octonion::basis(1)));
    assert_eq!(w.0[2], GroupGen::Inversion);
    let back: GroupWord = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
    assert_eq!(back, w);
    assert!(serde_json::from_str::<GroupWord>(r#"[{"kind":"rotation","mu":[1,0,0,0,0,0,0,0]}]"#).is_err());
    assert!(serde_json::from_str::<GroupWord>(r#"[{"kind":"dilation","delta":0}]"#).is_err());
}

proptest! {
    #[test]
    fn inversion_is_an_involution(p in hpoint(2.0)) {
        prop_assume!(gauge_norm(&p) > 0.05);
        let q = apply_gen(&GroupGen::Inversion, &apply_gen(&GroupGen::Inversion, &p).unwrap()).unwrap();
        prop_assert!(q.max_abs_diff(&p) <= 1e-10 * gauge_norm(&p).max(1.0));
        let r = apply_gen(&GroupGen::Inversion, &p).unwrap();
        prop_assert!(rel(gauge_norm(&r), 1.0 / gauge_norm(&p)) <= 1e-12);
    }

    #[test]
    fn rotations_are_isometries(p in hpoint(2.0), mu in unit_imag()) {
        let g = GroupGen::Rotation(mu);
        let q = apply_gen(&g, &p).unwrap();
        prop_assert!(rel(gauge_norm(&q), gauge_norm(&p)) <= 1e-14);
        prop_assert_eq!(conf_factor(&g, &p).unwrap(), 1.0);
        let back = apply_gen(&g.inverse(), &q).unwrap();
        prop_assert!(back.max_abs_diff(&p) <= 1e-13);
    }

    #[test]
    fn cylinder_metric_is_preserved(p in hpoint(2.0), mu in unit_imag()) {
        prop_assume!(gauge_norm(&p) > 0.05);
        for g in [GroupGen::Inversion, GroupGen::Rotation(mu)] {
            let l = conf_factor(&g, &p).unwrap();
            let q = apply_gen(&g, &p).unwrap();
            prop_assert!(rel(l * gauge_norm(&p), gauge_norm(&q)) <= 1e-12);
        }
    }

    #[test]
    fn dilation_homogeneity(p in hpoint(2.0), d in 0.1f64..10.0) {
        let q = apply_gen(&GroupGen::Dilation(d), &p).unwrap();
        prop_assert!(rel(gauge_norm(&q), d * gauge_norm(&p)) <= 1e-14);
    }
}
