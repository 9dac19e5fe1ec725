use bowmonad::diraclattice::*;
use bowmonad::nahmbow::*;
use bowmonad::numkit::{ToleranceContext, C64};
use bowmonad::taubnut::generate::{worked_example, worked_example_m0};
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
    let mut z = || c(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
    (z(), z())
}
fn sol_m0() -> NahmSolution {
    k1_constant_m0(rep(1, 0), c(0.8, 0.3), c(1.1, -0.4), c(2.0, 1.0)).unwrap()
}
fn sol_m1() -> NahmSolution {
    k1_constant_m1(rep(1, 1), c(0.8, 0.3), c(1.1, -0.4), c(2.0, 1.0)).unwrap()
}

#[test]
fn shapes_follow_rank_bookkeeping() {
    // ℓ = 2, λ = 0.5 at grid 256: short pieces of 64 cells, long piece of 128.
    let dl = assemble(&sol_m0(), c(0.3, 0.1), c(0.2, -0.5), 256).unwrap();
    let s = dl.shape();
    assert_eq!((s.a, s.c, s.w, s.edge), (257, 257, 2, 2));
    assert_eq!(s.b, 2 * 256 + 2 + 2);
    assert_eq!(dl.lambda_nodes, [64, 192]);

    let dl = assemble(&sol_m1(), c(0.3, 0.1), c(0.2, -0.5), 256).unwrap();
    let s = dl.shape();
    // 257 nodes, the 127 strictly inside the long piece carry 2 components.
    assert_eq!((s.a, s.w), (257 + 127, 0));
    assert_eq!(s.b, 2 * (256 + 128) + 2);
    assert_eq!(dl.node_rank[64], 1);
    assert_eq!(dl.node_rank[65], 2);
    assert_eq!(dl.cell_rank[64], 2);
    assert_eq!(dl.cell_rank[63], 1);
}

#[test]
fn zero_data_at_unit_point_gives_z_minus_one() {
    let sol = k1_constant_m1(rep(1, 1), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
    let dl = assemble(&sol, c(1.0, 0.0), c(1.0, 0.0), 16).unwrap();
    assert_eq!(dl.t, c(1.0, 0.0));
    assert_eq!(dl.t3, 0.0);
    // Row of −Z f in cell 0 (rank 1): −½ Z on both nodes, Z = −1.
    let nc: usize = dl.cell_rank.iter().sum();
    assert!((dl.delta0[(nc, 0)] - c(0.5, 0.0)).norm() < 1e-14);
    assert!((dl.delta0[(nc, 1)] - c(0.5, 0.0)).norm() < 1e-14);
}

#[test]
fn misaligned_grid_and_large_poles_are_rejected() {
    let sol = sol_m0();
    assert!(matches!(assemble(&sol, c(1.0, 0.0), c(1.0, 0.0), 6), Err(DiracError::Misaligned { .. })));
    let mut big = sol_m1();
    big.rep.m = 2;
    assert!(matches!(assemble(&big, c(1.0, 0.0), c(1.0, 0.0), 16), Err(DiracError::Unsupported(_))));
}

#[test]
fn complex_closes_and_kernel_is_rank_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for sol in [sol_m0(), sol_m1()] {
        for _ in 0..5 {
            let (xi, psi) = random_point(&mut rng);
            let dl = assemble(&sol, xi, psi, 64).unwrap();
            assert!(dl.closure_residual() < 1e-14);
            let k = kernel(&dl, &ctx()).unwrap();
            assert_eq!(k.dim, 2);
            assert!(k.gap > 1e3);
            assert!(positivity(&dl) > 0.0);
            assert!(reality_residual(&dl) < 1e-12);
        }
    }
}

#[test]
fn kernel_vectors_are_annihilated() {
    let dl = assemble(&sol_m1(), c(0.4, -0.2), c(0.9, 0.3), 32).unwrap();
    let k = kernel(&dl, &ctx()).unwrap();
    let y = dl.dirac_adjoint();
    let r = (&y * &k.basis).norm_fro() / y.norm_fro();
    assert!(r < 1e-12, "{r}");
}

#[test]
fn refinement_keeps_dimension_and_converges_angles() {
    let sol = sol_m0();
    let (xi, psi) = (c(0.3, 0.2), c(-0.5, 0.4));
    let runs: Vec<_> = [32, 64, 128]
        .iter()
        .map(|&g| {
            let dl = assemble(&sol, xi, psi, g).unwrap();
            let k = kernel(&dl, &ctx()).unwrap();
            (dl, k)
        })
        .collect();
    assert!(runs.iter().all(|(_, k)| k.dim == 2));
    let coarse = kernel_angle((&runs[0].0, &runs[0].1), (&runs[2].0, &runs[2].1));
    let fine = kernel_angle((&runs[1].0, &runs[1].1), (&runs[2].0, &runs[2].1));
    assert!(fine < coarse, "{coarse} {fine}");
    assert!(fine < 1e-3);
}

#[test]
fn broken_edge_data_fails_reality() {
    let mut sol = sol_m0();
    sol.b_th = sol.b_th.scale(&c(1.7, 0.0));
    let res: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&g| reality_residual(&assemble(&sol, c(0.3, 0.2), c(-0.5, 0.4), g).unwrap()))
        .collect();
    assert!(res.iter().all(|&r| r > 1e-4), "{res:?}");
    let rep = compare_with_monad(None, &sol, c(0.3, 0.2), c(-0.5, 0.4), 32, &ctx());
    assert!(!rep.passed("reality"));
}

#[test]
fn min_eig_vanishes_approaching_singular_point() {
    // The diagonal m = 1 lift is reducible: at (ξ, ψ) = (−B_ht, −B_th) the
    // constant section in the continuing component is annihilated by δ₀.
    let (bht, bth) = (c(0.8, 0.3), c(1.1, -0.4));
    let sol = k1_constant_m1(rep(1, 1), bht, bth, c(2.0, 1.0)).unwrap();
    let mut prev = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3] {
        let f = -(1.0 + eps);
        let e = positivity(&assemble(&sol, bht * f, bth * f, 32).unwrap());
        assert!(e < prev * 0.5, "{e} after {prev}");
        prev = e;
    }
    let at = positivity(&assemble(&sol, -bht, -bth, 32).unwrap());
    assert!(at < 1e-20, "{at}");
}

#[test]
fn matched_pairs_compare_with_monads() {
    let d0: TaubNutDataM0<C64> = worked_example_m0::<bowmonad::numkit::CQ>().to_c64();
    let d1: TaubNutData<C64> = worked_example::<bowmonad::numkit::CQ>().to_c64();
    let pm0 = big_monad_m0_raw(&d0).unwrap();
    let pm1 = big_monad_raw(&d1);
    let s0 = lift_taubnut_m0(rep(1, 0), &d0).unwrap();
    let s1 = lift_taubnut_m1(rep(1, 1), &d1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let (xi, psi) = random_point(&mut rng);
        for (pm, s) in [(&pm0, &s0), (&pm1, &s1)] {
            let r = compare_with_monad(Some(pm), s, xi, psi, 32, &ctx());
            assert!(r.all_pass(), "{:?}", r.failures());
        }
    }
    // Jumping line ξψ = B₀ for k = 1.
    let b0 = d0.b0()[(0, 0)];
    let r = compare_with_monad(Some(&pm0), &s0, c(1.5, 0.0), b0 / c(1.5, 0.0), 32, &ctx());
    assert!(r.all_pass(), "{:?}", r.failures());
}
