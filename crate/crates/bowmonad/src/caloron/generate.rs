//! Seeded generators of exact, validated caloron data.
//!
//! Construction for `k ≥ 1`: take `A` diagonal with distinct nonzero integer
//! entries and pick `D` freely. Choosing `C₂` so that `CD` has zero diagonal
//! makes `[A, B] = −CD` solvable entrywise, with the diagonal of `B` free.
//! The rows of `A′` then follow from relation 2 read bottom-up, `B′` from
//! its first row, and a random unimodular change of basis hides the
//! diagonal structure.

use super::data::{CaloronData, CaloronDataM0};
use crate::numkit::linalg::ToleranceContext;
use crate::numkit::{Matrix, Scalar, CQ};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn q(n: i64) -> CQ {
    CQ::from_i64(n)
}

pub(crate) fn nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let x = rng.random_range(lo..=hi);
        if x != 0 {
            return x;
        }
    }
}

fn distinct_nonzero(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    while out.len() < k {
        let x = nonzero(rng, -5, 5);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub(crate) fn int_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: i64, hi: i64) -> Matrix<CQ> {
    Matrix::from_fn(r, c, |_, _| q(rng.random_range(lo..=hi)))
}

/// A random integer matrix with determinant 1, and its inverse.
pub(crate) fn unimodular(rng: &mut ChaCha8Rng, k: usize) -> (Matrix<CQ>, Matrix<CQ>) {
    let l = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            q(1)
        } else if i > j {
            q(rng.random_range(-1..=1))
        } else {
            q(0)
        }
    });
    let u = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            q(1)
        } else if i < j {
            q(rng.random_range(-1..=1))
        } else {
            q(0)
        }
    });
    let p = &l * &u;
    let pinv = p.inverse().expect("unimodular");
    (p, pinv)
}

/// `(A, B, C, D)` with `[A, B] + CD = 0`, `A` diagonal and invertible.
fn adhm_core(rng: &mut ChaCha8Rng, k: usize) -> (Matrix<CQ>, Matrix<CQ>, Matrix<CQ>, Matrix<CQ>) {
    let a_diag = distinct_nonzero(rng, k);
    let d1: Vec<i64> = (0..k).map(|_| nonzero(rng, -3, 3)).collect();
    let d2: Vec<i64> = (0..k).map(|_| nonzero(rng, -3, 3)).collect();
    let c1: Vec<i64> = (0..k).map(|_| nonzero(rng, -3, 3)).collect();
    let a = Matrix::diag(&a_diag.iter().map(|&x| q(x)).collect::<Vec<_>>());
    let d = Matrix::from_fn(2, k, |i, j| q(if i == 0 { d1[j] } else { d2[j] }));
    let c = Matrix::from_fn(k, 2, |i, j| {
        if j == 0 {
            q(c1[i])
        } else {
            CQ::from_ratio(-c1[i] * d1[i], d2[i])
        }
    });
    let cd = &c * &d;
    let b = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            q(rng.random_range(-4..=4))
        } else {
            -(cd[(i, j)].clone() / q(a_diag[i] - a_diag[j]))
        }
    });
    (a, b, c, d)
}

/// One attempt at `m > 0` data; not yet validated.
pub fn caloron_candidate(rng: &mut ChaCha8Rng, k: usize, m: usize) -> CaloronData<CQ> {
    assert!(m >= 1);
    let (a, b, c, d) = adhm_core(rng, k);
    let cprime = int_matrix(rng, m, 2, -2, 2);
    // A′ rows from the bottom: A′_m = D₁, A′_{j−1} = A′_j B + C′_j D.
    let mut rows = vec![d.select_rows(&[0])];
    for j in (1..m).rev() {
        let next = &(&rows[0] * &b) + &(&cprime.select_rows(&[j]) * &d);
        rows.insert(0, next);
    }
    let refs: Vec<&Matrix<CQ>> = rows.iter().collect();
    let aprime = Matrix::vstack(&refs);
    let ainv = a.inverse().unwrap();
    let bprime = &(&(&aprime.select_rows(&[0]) * &b) + &(&cprime.select_rows(&[0]) * &d)) * &ainv;
    let (p, pinv) = unimodular(rng, k);
    CaloronData {
        k,
        m,
        a: &(&p * &a) * &pinv,
        b: &(&p * &b) * &pinv,
        c: &p * &c,
        d2row: &d.select_rows(&[1]) * &pinv,
        aprime: &aprime * &pinv,
        bprime: &bprime * &pinv,
        cprime,
    }
}

pub fn caloron_m0_candidate(rng: &mut ChaCha8Rng, k: usize) -> CaloronDataM0<CQ> {
    let (a, b, c, d) = adhm_core(rng, k);
    let (p, pinv) = unimodular(rng, k);
    CaloronDataM0 { k, a: &(&p * &a) * &pinv, b0: &(&p * &b) * &pinv, c: &p * &c, d: &d * &pinv }
}

/// Validated `m > 0` data; retries with fresh randomness until all
/// conditions pass.
pub fn generate_caloron(rng: &mut ChaCha8Rng, k: usize, m: usize) -> CaloronData<CQ> {
    let ctx = ToleranceContext::default();
    for _ in 0..1000 {
        let d = caloron_candidate(rng, k, m);
        if d.validate(&ctx).all_pass() {
            return d;
        }
    }
    panic!("no valid caloron data found for k={k}, m={m}");
}

pub fn generate_caloron_m0(rng: &mut ChaCha8Rng, k: usize) -> CaloronDataM0<CQ> {
    let ctx = ToleranceContext::default();
    for _ in 0..1000 {
        let d = caloron_m0_candidate(rng, k);
        if d.validate(&ctx).all_pass() && !d.c1().is_zero() {
            return d;
        }
    }
    panic!("no valid m=0 caloron data found for k={k}");
}

/// The hand-checked `k = 1, m = 1` tuple: `A = 2, B = 5, A′ = 3, B′ = 9,
/// C = (1, −3), D₂ = 1, C′ = (1, 0)`.
pub fn worked_example<T: Scalar>() -> CaloronData<T> {
    let s = |x: i64| Matrix::scalar(T::from_i64(x));
    CaloronData {
        k: 1,
        m: 1,
        a: s(2),
        b: s(5),
        c: Matrix::from_rows(&[vec![T::from_i64(1), T::from_i64(-3)]]),
        d2row: s(1),
        aprime: s(3),
        bprime: s(9),
        cprime: Matrix::from_rows(&[vec![T::from_i64(1), T::zero()]]),
    }
}

/// The `k = 1` small-monad example `A = 1, B = 0, C = (1, 0), D = (0; 1)`.
pub fn small_example<T: Scalar>() -> CaloronDataM0<T> {
    CaloronDataM0 {
        k: 1,
        a: Matrix::scalar(T::one()),
        b0: Matrix::scalar(T::zero()),
        c: Matrix::from_rows(&[vec![T::one(), T::zero()]]),
        d: Matrix::from_rows(&[vec![T::zero()], vec![T::one()]]),
    }
}
