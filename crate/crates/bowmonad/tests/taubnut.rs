use bowmonad::monadcore::{fiber, splitting_type, ChartPoint, Line};
use bowmonad::numkit::{Matrix, Ring, Scalar, ToleranceContext, C64, CQ};
use bowmonad::taubnut::generate::{generate_taubnut, generate_taubnut_m0, worked_example, worked_example_m0};
use bowmonad::taubnut::monads::{big_monad_m0_raw, big_monad_raw};
use bowmonad::taubnut::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx() -> ToleranceContext {
    ToleranceContext::default()
}

#[test]
fn worked_example_validates() {
    let d: TaubNutData<CQ> = worked_example();
    let r = d.validate(&ctx());
    assert!(r.all_pass(), "{r}");
    assert_eq!(d.b0(), Matrix::from_i64_rows(&[vec![6]]));
    assert_eq!(d.b1(), d.b0());
}

#[test]
fn relation2_residual_without_bprime() {
    let mut d: TaubNutData<CQ> = worked_example();
    d.bprime = Matrix::zeros(1, 1);
    let r = d.validate(&ctx());
    assert!(!r.passed("relation2"));
    assert_eq!(r.get("relation2").unwrap().residual, Some(21.0));
}

#[test]
fn worked_example_m0_validates() {
    let d: TaubNutDataM0<CQ> = worked_example_m0();
    let r = d.validate(&ctx());
    assert!(r.all_pass(), "{r}");
    let bc = to_bow_complex_m0(&d).unwrap();
    assert_eq!(bc.beta_minus_end, Matrix::from_i64_rows(&[vec![6]]));
    assert_eq!(bc.beta_plus_end, Matrix::from_i64_rows(&[vec![6]]));
    assert_eq!(from_bow_complex_m0(&bc).unwrap(), d);
}

#[test]
fn monad_identity_exact() {
    let d: TaubNutData<CQ> = worked_example();
    let pm = big_monad_raw(&d);
    assert!(pm.composite().is_zero());
    let ev = pm.evaluate(&ChartPoint::xi_psi(CQ::one(), CQ::one())).unwrap();
    assert!(ev.residual == 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (k, m) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
        let d = generate_taubnut(&mut rng, k, m);
        assert!(big_monad_raw(&d).composite().is_zero(), "k={k} m={m}");
        assert!(d.jumping_lines_ok());
    }
    for k in 1..=3 {
        let d = generate_taubnut_m0(&mut rng, k);
        assert!(big_monad_m0_raw(&d).unwrap().composite().is_zero(), "m0 k={k}");
    }
}

trait JumpOk {
    fn jumping_lines_ok(&self) -> bool;
}
impl JumpOk for TaubNutData<CQ> {
    fn jumping_lines_ok(&self) -> bool {
        let j = jumping_lines(self);
        j.charpoly_match && j.b0_spectrum.len() == self.k && j.z01_roots.len() == self.k + self.m
    }
}

#[test]
fn fiber_dim_two_exact_sweep() {
    let d: TaubNutData<CQ> = worked_example();
    let pm = big_monad_raw(&d);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let xi = CQ::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4));
        let psi = CQ::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4));
        let ev = pm.evaluate(&ChartPoint::xi_psi(xi, psi)).unwrap();
        assert_eq!(fiber(&ev, &ctx()).unwrap().dim, 2);
    }
}

#[test]
fn pushdown_psi_matches_fused() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let d = generate_taubnut(&mut rng, 2, 1).to_c64();
    let blocks = TnBlocks::from_data(&d);
    for _ in 0..10 {
        let xi = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let psi = C64::new(rng.random_range(0.2..2.0), rng.random_range(-2.0..2.0));
        assert_eq!(compare_pushdown_psi(&blocks, xi, psi, &ctx()).unwrap(), 2);
    }
}

#[test]
fn splitting_on_jumping_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for k in 1..=2 {
        let d = generate_taubnut(&mut rng, k, 1);
        let pm = big_monad_raw(&d.to_c64());
        let jl = jumping_lines(&d);
        for ev in jl.b0_spectrum {
            let st = splitting_type(&pm, &Line::Eta(ev), &ctx()).unwrap();
            assert_eq!(st, (1, -1), "k={k} eta={ev}");
        }
        let st = splitting_type(&big_monad_raw(&d), &Line::Eta(CQ::from_i64(97)), &ctx()).unwrap();
        assert_eq!(st, (0, 0));
    }
}

#[test]
fn bow_round_trip_exact() {
    let d: TaubNutData<CQ> = worked_example();
    let bc = to_bow_complex(&d).unwrap();
    assert_eq!(bc.edge_residuals(), (0.0, 0.0));
    assert_eq!(bc.long.conjugation_residual(), Some(0.0));
    assert_eq!(from_bow_complex(&bc).unwrap(), d);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let d = generate_taubnut(&mut rng, 2, 2);
    let bc = to_bow_complex(&d).unwrap();
    assert_eq!(bc.long.conjugation_residual(), Some(0.0));
    let back = from_bow_complex(&bc).unwrap();
    assert_eq!(to_bow_complex(&back).unwrap().invariants(), bc.invariants());
}

#[test]
fn nilpotent_edge() {
    let mut d: TaubNutData<CQ> = worked_example();
    d.bht = Matrix::zeros(1, 1);
    let j = jumping_lines(&d);
    assert_eq!(j.b0_spectrum, vec![C64::new(0.0, 0.0)]);
    assert!(j.charpoly_match);
    let split = eta_zero_split(&d.bht, &d.bth, &ctx()).unwrap();
    assert_eq!(split, EtaZeroSplit { ker_bht: 1, ker_bth: 0 });
}
