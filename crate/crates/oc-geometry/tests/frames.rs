use nalgebra::{DMatrix, SVector};
use oc_geometry::octonion::EPS4;
use oc_geometry::spin_frames::{build_e, build_n, e, project_so7, unit_product, Matrix8, Vector8};
use oc_geometry::verify::verify_algebra;
use oc_geometry::octonion::{MulTable, MUL};
use oc_geometry::{GeometryError, Octonion};
use proptest::prelude::*;

#[test]
fn top_row_of_e1() {
    assert_eq!(e(1)[(0, 1)], -1.0);
    assert_eq!(e(1)[(1, 0)], 1.0);
}

#[test]
fn frames_are_integer_antisymmetric_square_roots_of_minus_one() {
    for b in 1..8 {
        let m = build_e(b).unwrap();
        assert_eq!(m, -m.transpose());
        assert!(m.iter().all(|v| [-1.0, 0.0, 1.0].contains(v)));
        assert_eq!(m * m, -Matrix8::identity());
    }
    assert!(matches!(build_e(0), Err(GeometryError::Index { .. })));
    assert!(matches!(build_e(8), Err(GeometryError::Index { .. })));
}

#[test]
fn frames_anticommute() {
    for a in 1..8 {
        for b in 1..8 {
            if a != b {
                assert_eq!(e(a) * e(b), -(e(b) * e(a)));
            }
        }
    }
}

#[test]
fn products_of_frames_split_through_the_associator_matrices() {
    for a in 1..8 {
        for b in 1..8 {
            if a == b {
                continue;
            }
            let (sign, beta) = unit_product(a, b).unwrap();
            let n = build_n(a, b).unwrap();
            assert_eq!(e(a) * e(b), e(beta) * f64::from(sign) - n, "a={a} b={b}");
        }
    }
    assert_eq!(e(1) * e(2) - e(3), -build_n(1, 2).unwrap());
    assert!(matches!(build_n(3, 3), Err(GeometryError::Degenerate(_))));
    assert!(matches!(build_n(0, 3), Err(GeometryError::Index { .. })));
}

#[test]
fn associator_matrices_follow_the_quadruples() {
    for a in 1..8 {
        for b in 1..8 {
            if a == b {
                continue;
            }
            let n = build_n(a, b).unwrap();
            assert_eq!(n, -n.transpose());
            assert_eq!(n.iter().filter(|v| **v != 0.0).count(), 4);
            for c in 0..8 {
                for d in 0..8 {
                    assert_eq!(n[(d, c)], 2.0 * f64::from(EPS4.get(a, b, c, d)));
                }
            }
        }
    }
    // (5, 4, 6, 7): columns 6 and 7 carry the pair.
    let n = build_n(5, 4).unwrap();
    assert_eq!(n[(7, 6)], 2.0);
    assert_eq!(n[(6, 7)], -2.0);
}

#[test]
fn frame_projection_examples() {
    for g in 1..8 {
        let d = project_so7(e(g)).unwrap();
        for a in 0..7 {
            assert_eq!(d.r7_coeffs[a], if a + 1 == g { 1.0 } else { 0.0 });
        }
        assert_eq!(d.so7_part, Matrix8::zeros());
    }
    for a in 1..8 {
        for b in 1..8 {
            if a != b {
                let d = project_so7(&(e(a) * e(b))).unwrap();
                assert!(d.r7_coeffs.iter().all(|c| c.abs() < 1e-15), "a={a} b={b}");
                // So the associator matrix carries the whole E^(ab) component.
                let (sign, beta) = unit_product(a, b).unwrap();
                let n = project_so7(&build_n(a, b).unwrap()).unwrap();
                for g in 1..8 {
                    let want = if g == beta { f64::from(sign) } else { 0.0 };
                    assert_eq!(n.r7_coeffs[g - 1], want);
                }
            }
        }
    }
    let z = project_so7(&Matrix8::zeros()).unwrap();
    assert_eq!(z.r7_coeffs, [0.0; 7]);
    assert_eq!(z.so7_part, Matrix8::zeros());
    assert!(matches!(project_so7(&Matrix8::identity()), Err(GeometryError::NotAntisymmetric { .. })));
}

#[test]
fn associator_parts_span_the_complement() {
    // The 21 products E^a E^b together with the 7 frames span so(8).
    let mut cols = Vec::new();
    let flat = |m: &Matrix8| -> Vec<f64> {
        let mut v = Vec::new();
        for i in 0..8 {
            for j in (i + 1)..8 {
                v.push(m[(i, j)]);
            }
        }
        v
    };
    for a in 1..8 {
        for b in (a + 1)..8 {
            cols.push(flat(&(e(a) * e(b))));
        }
    }
    let span21 = DMatrix::from_fn(28, 21, |i, j| cols[j][i]);
    assert_eq!(span21.rank(1e-9), 21);
    for g in 1..8 {
        cols.push(flat(e(g)));
    }
    let all = DMatrix::from_fn(28, 28, |i, j| cols[j][i]);
    assert_eq!(all.rank(1e-9), 28);
}

#[test]
fn algebra_suite_passes_and_catches_a_flipped_triple() {
    let r = verify_algebra(&MUL, 1000, 11);
    assert!(r.passed, "{:?}", r.failed());
    assert!(r.max_residual() <= 1e-12);
    assert_eq!(r.checks[0].cases, 512);
    let bad = verify_algebra(&MulTable::with_flipped_triple(0), 100, 11);
    assert!(!bad.passed);
    assert!(bad.failed().contains(&"E^beta is left multiplication"));
}

fn oct() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(-2.0f64..2.0).prop_map(Octonion)
}

proptest! {
    #[test]
    fn frames_are_left_multiplication(x in oct(), b in 1usize..8) {
        let v = e(b) * SVector::<f64, 8>::from(x.0);
        let want = Octonion::basis(b) * x;
        for i in 0..8 {
            prop_assert!((v[i] - want[i]).abs() <= 1e-15);
        }
    }

    #[test]
    fn projection_reassembles(entries in prop::collection::vec(-3.0f64..3.0, 28)) {
        let mut d = Matrix8::zeros();
        let mut k = 0;
        for i in 0..8 {
            for j in (i + 1)..8 {
                d[(i, j)] = entries[k];
                d[(j, i)] = -entries[k];
                k += 1;
            }
        }
        let s = project_so7(&d).unwrap();
        prop_assert!((s.reassemble() - d).abs().max() <= 1e-13);
        // The remainder is trace-orthogonal to every frame.
        for g in 1..8 {
            prop_assert!(s.so7_part.component_mul(e(g)).sum().abs() <= 1e-12);
        }
    }

    #[test]
    fn wedge_is_antisymmetric(u in prop::array::uniform8(-1.0f64..1.0), v in prop::array::uniform8(-1.0f64..1.0)) {
        let w = oc_geometry::spin_frames::wedge(&Vector8::from(u), &Vector8::from(v));
        prop_assert!((w + w.transpose()).abs().max() == 0.0);
    }
}
