//! Holomorphic bow complexes for Taub-NUT data.
//!
//! The bow has one edge joining the ends `ℓ/2` and `−ℓ/2` of the interval.
//! On the two short pieces β is constant, equal to `B_ht B_th` on the piece
//! ending at `−ℓ/2` and to `B_th B_ht` on the piece ending at `ℓ/2`. The
//! long piece is stored as a [`NahmComplexCircle`]: for `m > 0` its left
//! normal form sits at the λ-point next to the `B_th B_ht` piece and its
//! right normal form next to the `B_ht B_th` piece, with `Ñ` transporting
//! one to the other. For `m = 0` it carries `B_mid`, the transport `A` and
//! the rank-one jumps.

use super::data::{TaubNutData, TaubNutDataM0};
use crate::caloron::nahm::{from_nahm_complex, from_nahm_complex_m0, right_normal, NahmComplexCircle, NormalFormError};
use crate::numkit::{Matrix, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BowComplex<T> {
    pub k: usize,
    pub m: usize,
    pub b_ht: Matrix<T>,
    pub b_th: Matrix<T>,
    /// β at `−ℓ/2`, equal to `B_ht B_th`.
    pub beta_minus_end: Matrix<T>,
    /// β at `ℓ/2`, equal to `B_th B_ht`.
    pub beta_plus_end: Matrix<T>,
    pub long: NahmComplexCircle<T>,
}

impl<T: Scalar> BowComplex<T> {
    /// Residuals of the two end factorizations.
    pub fn edge_residuals(&self) -> (f64, f64) {
        (
            (&self.beta_minus_end - &(&self.b_ht * &self.b_th)).max_abs(),
            (&self.beta_plus_end - &(&self.b_th * &self.b_ht)).max_abs(),
        )
    }

    /// Char polys of `B₀`, `B₁` and the long-interval transport.
    pub fn invariants(&self) -> Vec<Vec<T>> {
        vec![self.beta_minus_end.char_poly(), self.beta_plus_end.char_poly(), self.long.monodromy.char_poly()]
    }
}

fn bad(s: &str) -> NormalFormError {
    NormalFormError::NotInNormalForm(s.to_string())
}

pub fn to_bow_complex<T: Scalar>(d: &TaubNutData<T>) -> Result<BowComplex<T>, NormalFormError> {
    let cal = d.caloron_shape();
    let mut right = right_normal(&cal).ok_or_else(|| bad("Ñ is singular"))?;
    right.set_block(0, 0, &-&d.b0());
    let long = NahmComplexCircle {
        k: d.k,
        m: d.m,
        beta_small: d.b0(),
        beta_left: -&cal.mmat(),
        beta_right: right,
        monodromy: cal.ntilde(),
        jumps: vec![],
    };
    Ok(BowComplex { k: d.k, m: d.m, b_ht: d.bht.clone(), b_th: d.bth.clone(), beta_minus_end: d.b0(), beta_plus_end: d.b1(), long })
}

fn close<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    let r = (a - b).max_abs();
    if T::EXACT {
        r == 0.0
    } else {
        r <= 1e-9 * a.max_abs().max(b.max_abs()).max(1.0)
    }
}

pub fn from_bow_complex<T: Scalar>(bc: &BowComplex<T>) -> Result<TaubNutData<T>, NormalFormError> {
    if bc.m == 0 {
        return Err(bad("m = 0 complexes convert to TaubNutDataM0"));
    }
    let b0 = &bc.b_ht * &bc.b_th;
    let b1 = &bc.b_th * &bc.b_ht;
    if !close(&b0, &bc.beta_minus_end) || !close(&b1, &bc.beta_plus_end) {
        return Err(bad("edge factorizations do not match the end values"));
    }
    let k = bc.k;
    if bc.long.beta_right.rows() < k || !close(&-&bc.long.beta_right.submatrix(0, 0, k, k), &b0) {
        return Err(bad("right normal form does not continue B_ht B_th"));
    }
    let cal = from_nahm_complex(&bc.long)?;
    if !close(&cal.b, &b1) {
        return Err(bad("left normal form does not continue B_th B_ht"));
    }
    Ok(TaubNutData {
        k,
        m: bc.m,
        a: cal.a,
        bht: bc.b_ht.clone(),
        bth: bc.b_th.clone(),
        c: cal.c,
        d2row: cal.d2row,
        aprime: cal.aprime,
        bprime: cal.bprime,
        cprime: cal.cprime,
    })
}

/// Rescale a rank-one factorization `I·J` so that the first nonzero entry
/// of `I` is 1.
pub fn normalize_jump<T: Scalar>(i: &Matrix<T>, j: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let tol = if T::EXACT { 0.0 } else { 1e-12 * i.max_abs() };
    let pivot = i.data().iter().find(|x| x.abs() > tol).cloned();
    match pivot {
        Some(c) => {
            let inv = T::one() / c.clone();
            (i.scale(&inv), j.scale(&c))
        }
        None => (i.clone(), j.clone()),
    }
}

pub fn to_bow_complex_m0<T: Scalar>(d: &TaubNutDataM0<T>) -> Result<BowComplex<T>, NormalFormError> {
    let ainv = d.a.inverse().ok_or_else(|| bad("A is singular"))?;
    let bmid = d.b_mid().ok_or_else(|| bad("A is singular"))?;
    let minus = normalize_jump(&d.c1(), &(&d.d1() * &ainv));
    let plus = normalize_jump(&(&ainv * &d.c2()), &d.d2());
    let long = NahmComplexCircle {
        k: d.k,
        m: 0,
        beta_small: d.b0(),
        beta_left: bmid.clone(),
        beta_right: bmid,
        monodromy: d.a.clone(),
        jumps: vec![minus, plus],
    };
    Ok(BowComplex { k: d.k, m: 0, b_ht: d.bht.clone(), b_th: d.bth.clone(), beta_minus_end: d.b0(), beta_plus_end: d.b1(), long })
}

pub fn from_bow_complex_m0<T: Scalar>(bc: &BowComplex<T>) -> Result<TaubNutDataM0<T>, NormalFormError> {
    if bc.m != 0 {
        return Err(bad("expected m = 0"));
    }
    let b0 = &bc.b_ht * &bc.b_th;
    let b1 = &bc.b_th * &bc.b_ht;
    if !close(&b0, &bc.beta_minus_end) || !close(&b1, &bc.beta_plus_end) || !close(&b0, &bc.long.beta_small) {
        return Err(bad("edge factorizations do not match the end values"));
    }
    let cal = from_nahm_complex_m0(&bc.long)?;
    let (i, j) = &bc.long.jumps[0];
    if !close(&(&bc.long.beta_left + &(i * j)), &b1) {
        return Err(bad("jump at λ₋ does not connect B_mid to B_th B_ht"));
    }
    Ok(TaubNutDataM0 { k: bc.k, a: cal.a, bht: bc.b_ht.clone(), bth: bc.b_th.clone(), c: cal.c, d: cal.d })
}
