use bowmonad::monadcore::{Curve, DivisorClass};
use bowmonad::numkit::eigen::poly_roots;
use bowmonad::numkit::pencil::normalize_phase;
use bowmonad::numkit::poly::poly_det;
use bowmonad::numkit::scalar::rationalize;
use bowmonad::numkit::{rank, rank_kernel, Matrix, Poly2, Scalar, ToleranceContext, C64, CQ};
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx() -> ToleranceContext {
    ToleranceContext::default()
}

fn int_matrix(rows: usize, cols: usize, v: &[i64]) -> Matrix<CQ> {
    Matrix::from_fn(rows, cols, |i, j| CQ::from_i64(v[i * cols + j]))
}

#[test]
fn boundary_hexagon_intersections() {
    for a in Curve::ALL {
        assert_eq!(a.class().self_intersection(), -1, "{}", a.name());
        for b in Curve::ALL {
            if a == b {
                continue;
            }
            let gap = (a.index() as i64 - b.index() as i64).rem_euclid(6);
            let expect = if gap == 1 || gap == 5 { 1 } else { 0 };
            assert_eq!(a.class().dot(&b.class()), expect, "{} · {}", a.name(), b.name());
        }
    }
    let anti = Curve::ALL.iter().fold(DivisorClass::ZERO, |s, c| s + c.class());
    assert_eq!(anti, DivisorClass::new(2, 2, -1, -1));
    assert_eq!(anti.self_intersection(), 6);
}

#[test]
fn known_roots() {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    // (x − 1)(x − 2i)(x + 3), lowest degree first.
    let p = [6.0 * i, -3.0 * one - 4.0 * i, 2.0 * one - 2.0 * i, one, C64::new(0.0, 0.0)];
    let mut roots = poly_roots(&p, 1e-12);
    roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let want = [C64::new(-3.0, 0.0), C64::new(0.0, 2.0), one];
    assert_eq!(roots.len(), 3);
    for (r, w) in roots.iter().zip(want) {
        assert!((r - w).norm() < 1e-12, "{r} vs {w}");
    }
}

#[test]
fn rationalize_small_denominators() {
    assert_eq!(rationalize(0.375, 100, 1e-12), Some(BigRational::new(3.into(), 8.into())));
    assert_eq!(rationalize(-7.0, 1, 1e-12), Some(BigRational::from_integer((-7).into())));
    assert_eq!(rationalize(std::f64::consts::PI, 50, 1e-12), None);
    assert_eq!(rationalize(f64::NAN, 50, 1e-12), None);
}

#[test]
fn float_rank_ignores_roundoff_but_not_signal() {
    let x = int_matrix(4, 2, &[1, 2, 0, 1, 3, -1, 2, 2]).to_c64();
    let y = int_matrix(2, 4, &[1, 0, 2, 1, -1, 1, 0, 3]).to_c64();
    let mut m = &x * &y;
    assert_eq!(rank(&m, &ctx()).unwrap(), 2);
    m[(0, 0)] += C64::new(1e-15, 0.0);
    assert_eq!(rank(&m, &ctx()).unwrap(), 2);
    m[(3, 3)] += C64::new(0.5, 0.0);
    assert_eq!(rank(&m, &ctx()).unwrap(), 3);
}

#[test]
fn polynomial_determinant_matches_pointwise() {
    let a = int_matrix(3, 3, &[1, 2, 0, -1, 0, 3, 2, 2, 1]);
    let b = int_matrix(3, 3, &[0, 1, 1, 1, 0, -2, 0, 4, 1]);
    let pm = Matrix::from_fn(3, 3, |i, j| Poly2::constant(a[(i, j)].clone()) + Poly2::monomial(b[(i, j)].clone(), 1, 0));
    let det = poly_det(&pm);
    for u in [-2, 0, 1, 5] {
        let uq = CQ::from_i64(u);
        let direct = (&a + &b.scale(&uq)).det();
        assert_eq!(det.eval(&uq, &CQ::from_i64(7)), direct, "u = {u}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cayley_hamilton(v in prop::collection::vec(-5i64..=5, 9)) {
        let a = int_matrix(3, 3, &v);
        let cp = a.char_poly();
        let mut acc = Matrix::<CQ>::zeros(3, 3);
        for (k, c) in cp.iter().enumerate() {
            acc = &acc + &a.pow(k).scale(c);
        }
        prop_assert!(acc.is_zero());
        prop_assert_eq!(cp[0].clone(), -a.det());
    }

    #[test]
    fn inverse_and_multiplicative_det(u in prop::collection::vec(-4i64..=4, 9), w in prop::collection::vec(-4i64..=4, 9)) {
        let a = int_matrix(3, 3, &u);
        let b = int_matrix(3, 3, &w);
        prop_assert_eq!((&a * &b).det(), a.det() * b.det());
        match a.inverse() {
            Some(inv) => prop_assert_eq!(&a * &inv, Matrix::identity(3)),
            None => prop_assert_eq!(a.det(), CQ::from_i64(0)),
        }
    }

    #[test]
    fn exact_rank_nullity(x in prop::collection::vec(-3i64..=3, 8), y in prop::collection::vec(-3i64..=3, 10)) {
        // A 4×5 matrix of rank at most 2.
        let m = &int_matrix(4, 2, &x) * &int_matrix(2, 5, &y);
        let rk = rank_kernel(&m, &ctx()).unwrap();
        prop_assert!(rk.rank <= 2);
        prop_assert_eq!(rk.rank + rk.kernel.cols(), 5);
        prop_assert_eq!(rk.rank + rk.cokernel.cols(), 4);
        prop_assert!((&m * &rk.kernel).is_zero());
        prop_assert!((&rk.cokernel.transpose() * &m).is_zero());
        let rf = rank_kernel(&m.to_c64(), &ctx()).unwrap();
        prop_assert_eq!(rf.rank, rk.rank);
    }

    #[test]
    fn phase_normalization_is_phase_blind(
        re in prop::collection::vec(-2.0f64..2.0, 3),
        im in prop::collection::vec(-2.0f64..2.0, 3),
        theta in 0.0f64..6.28,
    ) {
        let v: Vec<C64> = re.iter().zip(&im).map(|(a, b)| C64::new(*a, *b)).collect();
        prop_assume!(v.iter().any(|z| z.norm() > 1e-3));
        let rot: Vec<C64> = v.iter().map(|z| z * C64::from_polar(1.0, theta)).collect();
        let a = normalize_phase(v);
        let b = normalize_phase(rot);
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-9);
        }
    }
}
