//! Seeded Taub-NUT data built from caloron data by splitting `B` across
//! the edge: with `B_th` invertible, `B_ht = B B_th⁻¹`, `A = B_th Ã`,
//! `C = B_th C̃` and `B′ = B̃′ B_th⁻¹` satisfy the Taub-NUT relations
//! whenever `(Ã, B, C̃, B̃′, …)` satisfies the caloron ones.

use super::data::{TaubNutData, TaubNutDataM0};
use crate::caloron::generate::{generate_caloron, generate_caloron_m0, nonzero, unimodular};
use crate::numkit::linalg::ToleranceContext;
use crate::numkit::{Matrix, Scalar, CQ};
use rand_chacha::ChaCha8Rng;

fn edge_split(rng: &mut ChaCha8Rng, k: usize) -> (Matrix<CQ>, Matrix<CQ>) {
    let (p, pinv) = unimodular(rng, k);
    let s = nonzero(rng, -3, 3);
    (p.scale(&CQ::from_i64(s)), pinv.scale(&CQ::from_ratio(1, s)))
}

pub fn generate_taubnut(rng: &mut ChaCha8Rng, k: usize, m: usize) -> TaubNutData<CQ> {
    let ctx = ToleranceContext::default();
    for _ in 0..100 {
        let cal = generate_caloron(rng, k, m);
        let (bth, bth_inv) = edge_split(rng, k);
        let d = TaubNutData {
            k,
            m,
            a: &bth * &cal.a,
            bht: &cal.b * &bth_inv,
            bth: bth.clone(),
            c: &bth * &cal.c,
            d2row: cal.d2row,
            aprime: cal.aprime,
            bprime: &cal.bprime * &bth_inv,
            cprime: cal.cprime,
        };
        if d.validate(&ctx).all_pass() {
            return d;
        }
    }
    panic!("no valid taubnut data found for k={k}, m={m}");
}

pub fn generate_taubnut_m0(rng: &mut ChaCha8Rng, k: usize) -> TaubNutDataM0<CQ> {
    let ctx = ToleranceContext::default();
    for _ in 0..100 {
        let cal = generate_caloron_m0(rng, k);
        let (bth, bth_inv) = edge_split(rng, k);
        let d = TaubNutDataM0 { k, a: &bth * &cal.a, bht: &cal.b0 * &bth_inv, bth: bth.clone(), c: &bth * &cal.c, d: cal.d };
        if d.validate(&ctx).all_pass() {
            return d;
        }
    }
    panic!("no valid m=0 taubnut data found for k={k}");
}

/// The hand-checked `k = 1, m = 1` tuple: `B_ht = 2, B_th = 3, A = 1,
/// A′ = 3, D₂ = 1, C = (1, −3), B′ = 21, C′ = (1, 0)`.
pub fn worked_example<T: Scalar>() -> TaubNutData<T> {
    let s = |x: i64| Matrix::scalar(T::from_i64(x));
    TaubNutData {
        k: 1,
        m: 1,
        a: s(1),
        bht: s(2),
        bth: s(3),
        c: Matrix::from_rows(&[vec![T::from_i64(1), T::from_i64(-3)]]),
        d2row: s(1),
        aprime: s(3),
        bprime: s(21),
        cprime: Matrix::from_rows(&[vec![T::one(), T::zero()]]),
    }
}

/// A `k = 1, m = 0` tuple with `B_ht = 2, B_th = 3`, `A = 1`,
/// `C = (1, 1)`, `D = (1; −1)`.
pub fn worked_example_m0<T: Scalar>() -> TaubNutDataM0<T> {
    let s = |x: i64| Matrix::scalar(T::from_i64(x));
    TaubNutDataM0 {
        k: 1,
        a: s(1),
        bht: s(2),
        bth: s(3),
        c: Matrix::from_rows(&[vec![T::one(), T::one()]]),
        d: Matrix::from_rows(&[vec![T::one()], vec![T::from_i64(-1)]]),
    }
}
