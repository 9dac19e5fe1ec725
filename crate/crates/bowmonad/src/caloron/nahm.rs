//! Nahm complexes on the circle in normal form, and the passage to and from
//! caloron matrix data.
//!
//! For `m > 0` the circle carries rank `k` on the small interval and rank
//! `k + m` on the large one. In normal form β is constant `B` on the small
//! interval; on the large interval it equals the left-normal form `L` near
//! `λ₋` and the right-normal form `R` near `λ₊`, related by the parallel
//! transport `Ñ` through `Ñ⁻¹ L Ñ = R`.
//!
//! For `m = 0` both intervals have rank `k`, β is `B₀` and `B₁`, the
//! transport across the large interval is `A`, and β jumps by rank-one
//! matrices `I·J` at the two λ-points.

use super::data::{col, e_minus_t, e_plus, row, zhe, CaloronData, CaloronDataM0};
use crate::numkit::{Matrix, Scalar};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("not in normal form: {0}")]
    NotInNormalForm(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NahmComplexCircle<T> {
    pub k: usize,
    pub m: usize,
    /// β on the small interval.
    pub beta_small: Matrix<T>,
    /// Left-normal form on the large interval (`m > 0`), or `B₁` (`m = 0`).
    pub beta_left: Matrix<T>,
    /// Right-normal form (`m > 0`), or `B₁` again (`m = 0`).
    pub beta_right: Matrix<T>,
    /// Parallel transport across the large interval.
    pub monodromy: Matrix<T>,
    /// Rank-one jumps `(I, J)` at `λ₋` then `λ₊` (`m = 0` only).
    pub jumps: Vec<(Matrix<T>, Matrix<T>)>,
}

impl<T: Scalar> NahmComplexCircle<T> {
    /// `‖Ñ⁻¹ L Ñ − R‖`, or `None` if the monodromy is singular.
    pub fn conjugation_residual(&self) -> Option<f64> {
        let ninv = self.monodromy.inverse()?;
        let conj = &(&ninv * &self.beta_left) * &self.monodromy;
        Some((&conj - &self.beta_right).max_abs())
    }

    /// Invariants compared by round trips: char polys of the β's and of
    /// the monodromy.
    pub fn invariants(&self) -> Vec<Vec<T>> {
        vec![self.beta_small.char_poly(), self.beta_left.char_poly(), self.monodromy.char_poly()]
    }
}

/// Left-normal form `L = −M = [[−B, C₁e₊], [−e₋ᵀB′, −Ж + C′₁e₊]]`.
pub fn left_normal<T: Scalar>(d: &CaloronData<T>) -> Matrix<T> {
    -&d.mmat()
}

/// Right-normal form `[[−B, C̃₁e₊], [−e₋ᵀD₂, −Ж + C̃′₁e₊]]` with
/// `(C̃₁; C̃′₁) = −Ñ⁻¹ Mᵐ v`.
pub fn right_normal<T: Scalar>(d: &CaloronData<T>) -> Option<Matrix<T>> {
    let (k, m) = (d.k, d.m);
    let ninv = d.ntilde().inverse()?;
    let ct = -&(&ninv * &(&d.mmat().pow(m) * &d.v()));
    let ep = e_plus::<T>(m);
    let mut r = Matrix::zeros(k + m, k + m);
    r.set_block(0, 0, &-&d.b);
    r.set_block(0, k, &(&ct.submatrix(0, 0, k, 1) * &ep));
    r.set_block(k, 0, &-&(&e_minus_t::<T>(m) * &d.d2row));
    r.set_block(k, k, &(&-&zhe::<T>(m) + &(&ct.submatrix(k, 0, m, 1) * &ep)));
    Some(r)
}

pub fn to_nahm_complex<T: Scalar>(d: &CaloronData<T>) -> Result<NahmComplexCircle<T>, NormalFormError> {
    let right = right_normal(d).ok_or_else(|| NormalFormError::NotInNormalForm("Ñ is singular".into()))?;
    Ok(NahmComplexCircle {
        k: d.k,
        m: d.m,
        beta_small: d.b.clone(),
        beta_left: left_normal(d),
        beta_right: right,
        monodromy: d.ntilde(),
        jumps: vec![],
    })
}

pub fn from_nahm_complex<T: Scalar>(nc: &NahmComplexCircle<T>) -> Result<CaloronData<T>, NormalFormError> {
    let (k, m) = (nc.k, nc.m);
    let n = k + m;
    let bad = |s: &str| NormalFormError::NotInNormalForm(s.to_string());
    if m == 0 {
        return Err(bad("m = 0 complexes convert to CaloronDataM0"));
    }
    for (name, mat) in [("left", &nc.beta_left), ("right", &nc.beta_right), ("monodromy", &nc.monodromy)] {
        if mat.shape() != (n, n) {
            return Err(bad(&format!("{name} has wrong shape")));
        }
    }
    let l = &nc.beta_left;
    let b = -&l.submatrix(0, 0, k, k);
    // Columns of the top-right block other than the last must vanish, and
    // the lower-right block must be −Ж plus a last-column correction.
    let tr = l.submatrix(0, k, k, m);
    let br = l.submatrix(k, k, m, m);
    let lower_left = l.submatrix(k, 0, m, k);
    let z = zhe::<T>(m);
    let mut shape_ok = tr.submatrix(0, 0, k, m - 1).max_abs() <= tolerance::<T>(l);
    shape_ok &= (&br + &z).submatrix(0, 0, m, m - 1).max_abs() <= tolerance::<T>(l);
    shape_ok &= lower_left.submatrix(1, 0, m - 1, k).max_abs() <= tolerance::<T>(l);
    if !shape_ok {
        return Err(bad("left-normal form pattern violated"));
    }
    let c1 = col(&tr, m - 1);
    let cp1 = col(&(&br + &z), m - 1);
    let bprime = -&row(&lower_left, 0);
    let d2row = -&nc.beta_right.submatrix(k, 0, 1, k);
    let nt = &nc.monodromy;
    let a = nt.submatrix(0, 0, k, k);
    let aprime = nt.submatrix(k, 0, m, k);
    let c2 = nt.submatrix(0, k, k, 1);
    let cp2 = nt.submatrix(k, k, m, 1);
    Ok(CaloronData {
        k,
        m,
        a,
        b,
        c: Matrix::hstack(&[&c1, &c2]),
        d2row,
        aprime,
        bprime,
        cprime: Matrix::hstack(&[&cp1, &cp2]),
    })
}

fn tolerance<T: Scalar>(l: &Matrix<T>) -> f64 {
    if T::EXACT {
        0.0
    } else {
        1e-9 * l.max_abs().max(1.0)
    }
}

/// `m = 0`: β is `B₀` on the small interval and `B₁` on the large one,
/// transport `A`, jumps `B₀ − B₁ = C₁(D₁A⁻¹)` at `λ₋` and
/// `A⁻¹B₁A − B₀ = (A⁻¹C₂)D₂` at `λ₊`.
pub fn to_nahm_complex_m0<T: Scalar>(d: &CaloronDataM0<T>) -> Result<NahmComplexCircle<T>, NormalFormError> {
    let ainv = d.a.inverse().ok_or_else(|| NormalFormError::NotInNormalForm("A is singular".into()))?;
    let b1 = d.b1().unwrap();
    Ok(NahmComplexCircle {
        k: d.k,
        m: 0,
        beta_small: d.b0.clone(),
        beta_left: b1.clone(),
        beta_right: b1,
        monodromy: d.a.clone(),
        jumps: vec![(d.c1(), &d.d1() * &ainv), (&ainv * &d.c2(), d.d2())],
    })
}

pub fn from_nahm_complex_m0<T: Scalar>(nc: &NahmComplexCircle<T>) -> Result<CaloronDataM0<T>, NormalFormError> {
    if nc.m != 0 || nc.jumps.len() != 2 {
        return Err(NormalFormError::NotInNormalForm("expected m = 0 with two rank-one jumps".into()));
    }
    let a = nc.monodromy.clone();
    let (im, jm) = &nc.jumps[0];
    let (ip, jp) = &nc.jumps[1];
    let c1 = im.clone();
    let d1 = jm * &a;
    let c2 = &a * ip;
    let d2 = jp.clone();
    Ok(CaloronDataM0 {
        k: nc.k,
        a,
        b0: nc.beta_small.clone(),
        c: Matrix::hstack(&[&c1, &c2]),
        d: Matrix::vstack(&[&d1, &d2]),
    })
}

/// Jump matrices at `λ₋` and `λ₊` as full matrices.
pub fn jump_matrices<T: Scalar>(nc: &NahmComplexCircle<T>) -> Vec<Matrix<T>> {
    nc.jumps.iter().map(|(i, j)| i * j).collect()
}
