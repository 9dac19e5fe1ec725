use bowmonad::caloron::generate::{generate_caloron, generate_caloron_m0, small_example, worked_example};
use bowmonad::caloron::monads::{big_monad_m0_raw, big_monad_raw, small_monad_raw};
use bowmonad::caloron::nahm::{from_nahm_complex, to_nahm_complex};
use bowmonad::caloron::CaloronData;
use bowmonad::monadcore::{fiber, splitting_type, ChartPoint, Line};
use bowmonad::numkit::{Matrix, Scalar, ToleranceContext, C64, CQ};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx() -> ToleranceContext {
    ToleranceContext::default()
}

#[test]
fn worked_example_validates() {
    let d: CaloronData<CQ> = worked_example();
    let r = d.validate(&ctx());
    assert!(r.all_pass(), "{r}");
    assert_eq!(d.ntilde(), Matrix::from_i64_rows(&[vec![2, -3], vec![3, 0]]));
}

#[test]
fn worked_example_relation2_violation() {
    let mut d: CaloronData<CQ> = worked_example();
    d.cprime = Matrix::zeros(1, 2);
    let r = d.validate(&ctx());
    assert!(!r.passed("relation2"));
    assert_eq!(r.get("relation2").unwrap().residual, Some(3.0));
}

#[test]
fn zero_d_fails_gencon1() {
    let mut d: CaloronData<CQ> = worked_example();
    d.d2row = Matrix::zeros(1, 1);
    d.aprime = Matrix::zeros(1, 1);
    let r = d.validate(&ctx());
    assert!(!r.passed("gencon1"), "{r}");
}

#[test]
fn big_monad_exact_identity_worked() {
    let d: CaloronData<CQ> = worked_example();
    let pm = big_monad_raw(&d);
    assert!(pm.composite().is_zero());
}

#[test]
fn generated_big_monads_anticommute() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (k, m) in [(1, 1), (2, 1), (2, 2), (3, 1), (1, 2)] {
        let d = generate_caloron(&mut rng, k, m);
        assert!(big_monad_raw(&d).composite().is_zero(), "k={k} m={m}");
        assert!(small_monad_raw(&d.a, &d.b, &d.c, &d.d()).composite().is_zero());
        let nc = to_nahm_complex(&d).unwrap();
        assert!(nc.conjugation_residual().unwrap() == 0.0);
        let back = from_nahm_complex(&nc).unwrap();
        assert_eq!(back, d);
    }
    for k in 1..=3 {
        let d = generate_caloron_m0(&mut rng, k);
        assert!(big_monad_m0_raw(&d).unwrap().composite().is_zero(), "m0 k={k}");
    }
}

#[test]
fn fiber_dims_and_splitting() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = generate_caloron(&mut rng, 2, 1);
    let pm = big_monad_raw(&d);
    let pmf = big_monad_raw(&d.to_c64());
    for (x, e) in [(1, 2), (-3, 5), (7, 1)] {
        let p = ChartPoint::xi_eta(CQ::from_i64(x), CQ::from_i64(e));
        assert_eq!(fiber(&pm.evaluate(&p).unwrap(), &ctx()).unwrap().dim, 2);
        let pf = ChartPoint::xi_eta(C64::new(x as f64, 0.3), C64::new(e as f64, -0.2));
        assert_eq!(fiber(&pmf.evaluate(&pf).unwrap(), &ctx()).unwrap().dim, 2);
    }
    let st = splitting_type(&pm, &Line::Eta(CQ::from_i64(100)), &ctx()).unwrap();
    assert_eq!(st, (0, 0));
    for ev in bowmonad::caloron::data::spectrum(&d.b) {
        let st = splitting_type(&pmf, &Line::Eta(ev), &ctx()).unwrap();
        assert_eq!(st, (1, -1), "eigenvalue {ev}");
    }
}

#[test]
fn small_example_jumps_at_zero() {
    let d = small_example::<CQ>();
    let pm = small_monad_raw(&d.a, &d.b0, &d.c, &d.d);
    assert_eq!(splitting_type(&pm, &Line::Eta(CQ::from_i64(0)), &ctx()).unwrap(), (1, -1));
    assert_eq!(splitting_type(&pm, &Line::Eta(CQ::from_i64(2)), &ctx()).unwrap(), (0, 0));
    let pm = big_monad_m0_raw(&d).unwrap();
    assert_eq!(splitting_type(&pm, &Line::Eta(CQ::from_i64(0)), &ctx()).unwrap(), (1, -1));
    assert_eq!(splitting_type(&pm, &Line::Eta(CQ::from_i64(2)), &ctx()).unwrap(), (0, 0));
}
