use bowmonad::monadcore::{fiber, ChartPoint};
use bowmonad::nahmbow::flow::{default_zetas, rk4_step};
use bowmonad::nahmbow::solution::{euler_top, euler_top_segment};
use bowmonad::nahmbow::spectral::{common_root_counts, curve_of_segment, curve_of_triple};
use bowmonad::nahmbow::su2::{casimir, commutant_dim, commutation_residual, irrep_equivalence_residual};
use bowmonad::nahmbow::*;
use bowmonad::numkit::{Matrix, ToleranceContext, C64};
use bowmonad::taubnut::generate::{generate_taubnut, generate_taubnut_m0, worked_example, worked_example_m0};
use bowmonad::taubnut::monads::{big_monad_m0_raw, big_monad_raw};
use bowmonad::taubnut::{TaubNutData, TaubNutDataM0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx() -> ToleranceContext {
    ToleranceContext::default()
}

fn rep(k: usize, m: usize) -> BowRepresentation {
    BowRepresentation::new(2.0, 0.5, k, m).unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_point(rng: &mut ChaCha8Rng) -> (C64, C64) {
    (c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)), c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)))
}

#[test]
fn su2_casimir_and_relations() {
    for (m, cas) in [(1, 0.0), (2, 0.75), (3, 2.0), (4, 3.75)] {
        let r = su2_irrep(m);
        let expect = Matrix::<C64>::identity(m).scale(&c(cas, 0.0));
        assert!((&casimir(&r) - &expect).max_abs() < 1e-14);
        assert!(commutation_residual(&r) < 1e-14);
        assert_eq!(commutant_dim(&r), 1);
        assert!(irrep_equivalence_residual(&r) < 1e-12);
    }
}

#[test]
fn pole_ansatz_is_fourth_order() {
    let rho = su2_irrep(2);
    let mut errs = vec![];
    for step in [0.01, 0.005] {
        let mut t = euler_top(2, 0.0, 0.1);
        let n = (0.9f64 / step).round() as usize;
        let mut worst = 0.0f64;
        for j in 1..=n {
            t = rk4_step(&t, step);
            let s = 0.1 + step * j as f64;
            for a in 0..3 {
                let exact = rho[a].scale(&c(1.0 / s, 0.0));
                worst = worst.max((&t[a] - &exact).max_abs() / exact.max_abs());
            }
        }
        errs.push(worst);
    }
    let order = (errs[0] / errs[1]).log2();
    assert!(order > 3.7 && order < 4.4, "observed order {order}, errors {errs:?}");
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Matrix<C64> {
    let a = Matrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + &a.adjoint()).scale(&c(0.5, 0.0))
}

#[test]
fn k2_flow_is_isospectral_and_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let init = [random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2)];
    let seg = flow(&init, 0.0, 1.0, &FlowOptions::new(1e-3)).unwrap();
    assert!(seg.isospectral_drift(&default_zetas()) < 1e-8);
    assert!(seg.hermiticity_defect() < 1e-10);
    let moved = (&seg.t.last().unwrap()[0] - &init[0]).max_abs();
    assert!(moved > 1e-2, "flow should be non-trivial");
}

#[test]
fn flow_errors() {
    let init = [Matrix::scalar(c(1.0, 0.0)), Matrix::scalar(c(0.0, 0.0)), Matrix::scalar(c(0.0, 0.0))];
    let mut o = FlowOptions::new(1e-2);
    o.singular_points = vec![0.5];
    assert!(matches!(flow(&init, 0.0, 1.0, &o), Err(FlowError::PoleProximity { .. })));
    assert_eq!(flow(&init, 0.0, 1.0, &FlowOptions::new(0.0)).unwrap_err(), FlowError::BadStep);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let big = [random_hermitian(&mut rng, 3), random_hermitian(&mut rng, 3), random_hermitian(&mut rng, 3)]
        .map(|m| m.scale(&c(20.0, 0.0)));
    let coarse = flow(&big, 0.0, 1.0, &FlowOptions::new(0.2));
    assert!(matches!(coarse, Err(FlowError::StepTooCoarse { .. })), "{coarse:?}");
}

#[test]
fn k1_flow_is_stationary() {
    let init = [Matrix::scalar(c(0.3, 0.0)), Matrix::scalar(c(-1.0, 0.0)), Matrix::scalar(c(2.0, 0.0))];
    let seg = flow(&init, 0.0, 1.0, &FlowOptions::new(1e-2)).unwrap();
    assert_eq!(seg.isospectral_drift(&default_zetas()), 0.0);
}

#[test]
fn diagonal_k2_curve_is_product_of_lines() {
    let sol = diagonal_nahm(rep(2, 0), &[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
    assert!(check_boundary(&sol).all_pass(), "{}", check_boundary(&sol));
    let curve = spectral_curve(&sol, Which::S0, 9).unwrap();
    // (η − 1 + ζ²)(η + 2ζ) = η² + (−1 + 2ζ + ζ²)η − 2ζ + 2ζ³
    let expect = [vec![0.0, -2.0, 0.0, 2.0, 0.0], vec![-1.0, 2.0, 1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0, 0.0]];
    for i in 0..3 {
        for j in 0..5 {
            assert!((curve.coeffs[i][j] - c(expect[i][j], 0.0)).norm() < 1e-12, "c[{i}][{j}] = {}", curve.coeffs[i][j]);
        }
    }
    assert!(curve.grading_residual < 1e-12 && curve.reality_residual < 1e-12 && curve.s_variation < 1e-12);
    assert!(matches!(spectral_curve(&sol, Which::S0, 4), Err(SpectralError::InterpolationIllConditioned { .. })));
}

#[test]
fn curve_of_origin_point() {
    let z = [Matrix::scalar(c(0.0, 0.0)), Matrix::scalar(c(0.0, 0.0)), Matrix::scalar(c(0.0, 0.0))];
    let cv = curve_of_triple(&z, 3).unwrap();
    assert!((cv.coeffs[1][0] - c(1.0, 0.0)).norm() < 1e-15);
    assert!(cv.coeffs[0].iter().all(|x| x.norm() < 1e-15));
}

#[test]
fn curves_of_hermitian_data_are_graded_and_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        let t = [random_hermitian(&mut rng, n), random_hermitian(&mut rng, n), random_hermitian(&mut rng, n)];
        let seg = flow(&t, 0.0, 0.5, &FlowOptions::new(1e-3)).unwrap();
        let cv = curve_of_segment(&seg, 2 * n + 3).unwrap();
        assert!(cv.grading_residual < 1e-12, "{}", cv.grading_residual);
        assert!(cv.reality_residual < 1e-10, "{}", cv.reality_residual);
        assert!(cv.s_variation < 1e-8);
    }
}

#[test]
fn bifundamental_end_example() {
    // B_th = B_ht = 1 forces A(ζ, ℓ/2) = 1 − ζ².
    let sol = k1_constant_m0(rep(1, 0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).unwrap();
    let end = sol.right.at(1.0);
    assert_eq!(end[0][(0, 0)], c(1.0, 0.0));
    assert_eq!(end[1][(0, 0)], c(0.0, 0.0));
    assert_eq!(end[2][(0, 0)], c(0.0, 0.0));
    let a = lax(&end, c(0.3, 0.2));
    assert!((a[(0, 0)] - (c(1.0, 0.0) - c(0.3, 0.2) * c(0.3, 0.2))).norm() < 1e-15);
    assert!(check_boundary(&sol).all_pass());
}

#[test]
fn broken_edge_fails_boundary_check() {
    let mut sol = k1_constant_m0(rep(1, 0), c(1.0, 0.5), c(2.0, 0.0), c(-1.0, 1.0)).unwrap();
    assert!(check_boundary(&sol).all_pass());
    sol.b_th = Matrix::scalar(c(3.0, 0.0));
    let r = check_boundary(&sol);
    assert!(!r.passed("bifundamental_h") && !r.passed("bifundamental_t"));
}

#[test]
fn fundamental_jump_example() {
    // I₋ = (1,0)ᵀ, J₋ = (0,1): the ζ⁰ jump is rank one.
    let i = Matrix::column(vec![c(1.0, 0.0), c(0.0, 0.0)]);
    let j = Matrix::row(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    let p = &i * &j;
    assert_eq!(bowmonad::numkit::rank(&p, &ctx()).unwrap(), 1);
    let mid = &(&i * &i.adjoint()) - &(&j.adjoint() * &j);
    assert_eq!(mid, Matrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]));
}

#[test]
fn m2_pole_fit_recovers_irrep() {
    let eps = 1e-3 * 2.0;
    for a in [0.0, 0.7] {
        let seg = euler_top_segment(2, a, 0.0, eps, 1.0, 200, eps);
        let (res, _) = fit_pole(&seg, 0.0, eps, 1.0);
        let r = irrep_equivalence_residual(&res);
        assert!(r < 1e-6, "a = {a}: residual {r}");
    }
}

#[test]
fn m1_lift_passes_boundary_checks() {
    let d: TaubNutData<C64> = worked_example::<bowmonad::numkit::CQ>().to_c64();
    let sol = lift_taubnut_m1(rep(1, 1), &d).unwrap();
    let r = check_boundary(&sol);
    assert!(r.all_pass(), "{r}");
}

#[test]
fn k1_m0_reduction_has_rank_two() {
    let sol = k1_constant_m0(rep(1, 0), c(0.8, 0.3), c(1.1, -0.4), c(2.0, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let (xi, psi) = random_point(&mut rng);
        let mp = reduce_to_finite_monad(&sol, xi, psi, &ctx()).unwrap();
        assert!(mp.residual < 1e-10, "βα residual {}", mp.residual);
        assert_eq!(fiber(&mp, &ctx()).unwrap().dim, 2);
    }
}

#[test]
fn matched_pairs_agree_with_big_monad() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d0: TaubNutDataM0<C64> = worked_example_m0::<bowmonad::numkit::CQ>().to_c64();
    let g0: TaubNutDataM0<C64> = generate_taubnut_m0(&mut rng, 1).to_c64();
    let d1: TaubNutData<C64> = worked_example::<bowmonad::numkit::CQ>().to_c64();
    let g1: TaubNutData<C64> = generate_taubnut(&mut rng, 1, 1).to_c64();
    let mut cases = vec![];
    for d in [d0, g0] {
        cases.push((lift_taubnut_m0(rep(1, 0), &d).unwrap(), big_monad_m0_raw(&d).unwrap()));
    }
    for d in [d1, g1] {
        cases.push((lift_taubnut_m1(rep(1, 1), &d).unwrap(), big_monad_raw(&d)));
    }
    for (sol, pm) in &cases {
        for _ in 0..10 {
            let (xi, psi) = random_point(&mut rng);
            let red = reduce_to_finite_monad(sol, xi, psi, &ctx()).unwrap();
            let alg = pm.evaluate(&ChartPoint::xi_psi(xi, psi)).unwrap();
            assert_eq!(fiber(&red, &ctx()).unwrap().dim, fiber(&alg, &ctx()).unwrap().dim);
            assert_eq!(fiber(&red, &ctx()).unwrap().dim, 2);
        }
    }
}

#[test]
fn reduction_on_jumping_line() {
    // For k = 1 the jumping line over η = B₀ meets the point ξψ = B₀.
    let d: TaubNutDataM0<C64> = worked_example_m0::<bowmonad::numkit::CQ>().to_c64();
    let sol = lift_taubnut_m0(rep(1, 0), &d).unwrap();
    let b0 = d.b0()[(0, 0)];
    let xi = c(1.5, 0.0);
    let mp = reduce_to_finite_monad(&sol, xi, b0 / xi, &ctx()).unwrap();
    assert_eq!(fiber(&mp, &ctx()).unwrap().dim, 2);
}

#[test]
fn common_roots_are_recorded() {
    let d: TaubNutData<C64> = worked_example::<bowmonad::numkit::CQ>().to_c64();
    let sol = lift_taubnut_m1(rep(1, 1), &d).unwrap();
    let s0 = spectral_curve(&sol, Which::S0, 5).unwrap();
    let s1 = spectral_curve(&sol, Which::S1, 5).unwrap();
    let counts = common_root_counts(&s0, &s1, 20, 1e-8);
    assert_eq!(counts.len(), 20);
    // The diagonal lift contains the short component, so every S₀ root is an S₁ root.
    assert!(counts.iter().all(|&n| n == 1));
}

#[test]
fn gauge_fixing_removes_t0() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let init = [random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2), random_hermitian(&mut rng, 2)];
    let seg = flow(&init, 0.0, 0.5, &FlowOptions::new(1e-3)).unwrap();
    let t0: Vec<Matrix<C64>> = seg.s.iter().map(|_| random_hermitian(&mut ChaCha8Rng::seed_from_u64(1), 2)).collect();
    let fixed = bowmonad::nahmbow::flow::gauge_fix_t0(&seg, &t0);
    // Spectra are gauge invariant.
    let z = default_zetas();
    let f0 = bowmonad::nahmbow::flow::fingerprint(&seg.t[100], &z);
    let f1 = bowmonad::nahmbow::flow::fingerprint(&fixed.t[100], &z);
    assert!(f0.iter().zip(&f1).all(|(a, b)| (a - b).norm() < 1e-8));
}

