//! Float eigenvalue helpers built on nalgebra's complex Schur form.

use super::linalg::singular_values;
use super::matrix::Matrix;
use super::scalar::{Ring, C64};
use nalgebra::DMatrix;

/// Relative tolerance used to group numerically repeated eigenvalues and to
/// cut eigenspaces. Defective eigenvalues split at roughly the square root
/// of machine precision, hence the loose value.
pub const EIG_TOL: f64 = 1e-6;

pub fn eigenvalues(m: &Matrix<C64>) -> Vec<C64> {
    let n = m.rows();
    if n == 0 {
        return vec![];
    }
    let (_, t) = m.to_nalgebra().schur().unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Eigenvalues grouped by proximity, with algebraic multiplicities.
pub fn clustered_eigenvalues(m: &Matrix<C64>) -> Vec<(C64, usize)> {
    let scale = m.max_abs().max(1.0);
    cluster(&eigenvalues(m), EIG_TOL.sqrt() * scale)
}

pub fn cluster(vals: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut groups: Vec<(C64, Vec<C64>)> = Vec::new();
    for &v in vals {
        match groups.iter_mut().find(|(c, _)| (c - v).norm() <= tol) {
            Some((c, members)) => {
                members.push(v);
                let n = members.len() as f64;
                *c = members.iter().sum::<C64>() / n;
            }
            None => groups.push((v, vec![v])),
        }
    }
    groups.into_iter().map(|(c, m)| (c, m.len())).collect()
}

/// Orthonormal basis of the numerical kernel of `m`, cutting singular values
/// below `EIG_TOL` relative to `scale`.
pub fn loose_kernel(m: &Matrix<C64>, scale: f64) -> Matrix<C64> {
    let cols = m.cols();
    if m.rows() == 0 {
        return Matrix::identity(cols);
    }
    let sv = singular_values(m);
    let cut = EIG_TOL * scale.max(1.0);
    let rank = sv.iter().filter(|&&s| s > cut).count();
    super::linalg::right_null_space(m, rank)
}

/// Basis of the (geometric) eigenspace of `m` for eigenvalue `lambda`.
pub fn eigenspace(m: &Matrix<C64>, lambda: C64) -> Matrix<C64> {
    let n = m.rows();
    let shifted = m - &Matrix::<C64>::identity(n).scale(&lambda);
    loose_kernel(&shifted, m.max_abs())
}

/// Roots of a univariate polynomial given lowest degree first. Leading
/// coefficients below `tol` relative to the largest are dropped first.
pub fn poly_roots(coeffs: &[C64], tol: f64) -> Vec<C64> {
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return vec![];
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() <= tol * big {
        deg -= 1;
    }
    if deg == 0 {
        return vec![];
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = C64::one();
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    eigenvalues(&Matrix::from_nalgebra(&comp))
}

/// Smallest singular value relative to the largest (0 for a zero matrix).
pub fn relative_min_singular(m: &Matrix<C64>) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => b / a,
        _ => 0.0,
    }
}
