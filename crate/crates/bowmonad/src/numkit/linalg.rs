//! Rank, kernel and cokernel with explicit tolerance handling.

use super::matrix::Matrix;
use super::scalar::{Ring, Scalar, C64, CQ};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::any::Any;
use thiserror::Error;

/// Tolerances for every floating-point rank decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceContext {
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Required ratio between the last kept and first dropped singular value.
    pub gap_factor: f64,
}

impl Default for ToleranceContext {
    fn default() -> Self {
        ToleranceContext { rank_tol: 1e-10, gap_factor: 1e3 }
    }
}

impl ToleranceContext {
    pub fn with_rank_tol(rank_tol: f64) -> Self {
        ToleranceContext { rank_tol, ..Default::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("ambiguous rank: singular value gap {ratio:.3e} below required {required:.1e} at cut {cut}")]
    GapTooSmall { cut: usize, ratio: f64, required: f64 },
    #[error("image not contained in kernel (residual {residual:.3e})")]
    ImageNotContained { residual: f64 },
    #[error("degenerate pencil: failure set is not finite")]
    DegeneratePencil,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("eigen decomposition failed")]
    EigenFailure,
}

/// Result of a rank computation.
#[derive(Clone, Debug)]
pub struct RankKernel<T> {
    pub rank: usize,
    /// Columns span the right kernel (M x = 0).
    pub kernel: Matrix<T>,
    /// Columns span the left kernel (y^T M = 0).
    pub cokernel: Matrix<T>,
    /// Achieved multiplicative gap at the cut (float backend only).
    pub gap: Option<f64>,
    /// Singular values in decreasing order (float backend only).
    pub singular_values: Vec<f64>,
}

pub(crate) fn downcast_ref<T: 'static, U: 'static>(x: &T) -> Option<&U> {
    (x as &dyn Any).downcast_ref::<U>()
}

pub(crate) fn downcast_owned<T: 'static, U: 'static>(x: T) -> Option<U> {
    let b: Box<dyn Any> = Box::new(x);
    b.downcast::<U>().ok().map(|b| *b)
}

/// Rank, kernel and cokernel of `m`.
///
/// The exact backend runs fraction-free (Bareiss) elimination on the matrix
/// scaled to Gaussian integers and never consults `ctx`. The float backend
/// uses the SVD and fails with [`NumError::GapTooSmall`] when the cut is
/// ambiguous.
pub fn rank_kernel<T: Scalar>(m: &Matrix<T>, ctx: &ToleranceContext) -> Result<RankKernel<T>, NumError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(RankKernel {
            rank: 0,
            kernel: Matrix::identity(m.cols()),
            cokernel: Matrix::identity(m.rows()),
            gap: None,
            singular_values: vec![],
        });
    }
    if T::EXACT {
        if let Some(q) = downcast_ref::<Matrix<T>, Matrix<CQ>>(m) {
            let rk = exact_rank_kernel(q);
            return Ok(RankKernel {
                rank: rk.rank,
                kernel: downcast_owned(rk.kernel).expect("backend"),
                cokernel: downcast_owned(rk.cokernel).expect("backend"),
                gap: None,
                singular_values: vec![],
            });
        }
    }
    let c = m.to_c64();
    let rk = float_rank_kernel(&c, ctx)?;
    Ok(RankKernel {
        rank: rk.rank,
        kernel: Matrix::from_c64(&rk.kernel),
        cokernel: Matrix::from_c64(&rk.cokernel),
        gap: rk.gap,
        singular_values: rk.singular_values,
    })
}

/// Right kernel only; skips the cokernel that [`rank_kernel`] also builds.
pub fn kernel<T: Scalar>(m: &Matrix<T>, ctx: &ToleranceContext) -> Result<Matrix<T>, NumError> {
    if T::EXACT && !m.is_empty() {
        if let Some(q) = downcast_ref::<Matrix<T>, Matrix<CQ>>(m) {
            return Ok(downcast_owned(exact_kernel(q).0).expect("backend"));
        }
    }
    Ok(rank_kernel(m, ctx)?.kernel)
}

/// Pivot columns of the exact row echelon form.
pub fn exact_pivots(m: &Matrix<CQ>) -> Vec<usize> {
    if m.is_empty() {
        return vec![];
    }
    bareiss_echelon(m).1
}

/// Just the rank.
pub fn rank<T: Scalar>(m: &Matrix<T>, ctx: &ToleranceContext) -> Result<usize, NumError> {
    if m.is_empty() {
        return Ok(0);
    }
    if T::EXACT {
        if let Some(q) = downcast_ref::<Matrix<T>, Matrix<CQ>>(m) {
            return Ok(bareiss_echelon(q).1.len());
        }
    }
    let sv = singular_values(&m.to_c64());
    decide_rank(&sv, ctx).map(|(r, _)| r)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &Matrix<C64>) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let svd = m.to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Apply the tolerance rule to sorted singular values.
pub fn decide_rank(sv: &[f64], ctx: &ToleranceContext) -> Result<(usize, Option<f64>), NumError> {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= f64::MIN_POSITIVE {
        return Ok((0, None));
    }
    let tau = ctx.rank_tol * smax;
    let r = sv.iter().filter(|&&s| s > tau).count();
    if r == sv.len() {
        return Ok((r, Some(sv[r - 1] / tau)));
    }
    let lo = sv[r];
    let ratio = if lo <= 0.0 { f64::INFINITY } else { sv[r - 1] / lo };
    if ratio < ctx.gap_factor {
        return Err(NumError::GapTooSmall { cut: r, ratio, required: ctx.gap_factor });
    }
    Ok((r, Some(ratio)))
}

fn float_rank_kernel(m: &Matrix<C64>, ctx: &ToleranceContext) -> Result<RankKernel<C64>, NumError> {
    let (rows, cols) = m.shape();
    let sv = singular_values(m);
    let (rank, gap) = decide_rank(&sv, ctx)?;
    let kernel = right_null_space(m, rank);
    let cokernel = right_null_space(&m.transpose(), rank);
    debug_assert_eq!(kernel.cols(), cols - rank);
    debug_assert_eq!(cokernel.cols(), rows - rank);
    Ok(RankKernel { rank, kernel, cokernel, gap, singular_values: sv })
}

/// Orthonormal basis (as columns) of the right null space, given the rank.
pub fn right_null_space(m: &Matrix<C64>, rank: usize) -> Matrix<C64> {
    let (rows, cols) = m.shape();
    let null = cols - rank;
    if null == 0 {
        return Matrix::zeros(cols, 0);
    }
    if rank == 0 {
        return Matrix::identity(cols);
    }
    let n = rows.max(cols);
    let mut a = DMatrix::<C64>::zeros(n, cols);
    for i in 0..rows {
        for j in 0..cols {
            a[(i, j)] = m[(i, j)];
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].partial_cmp(&svd.singular_values[x]).unwrap());
    let picks: Vec<usize> = order[rank..rank + null].to_vec();
    Matrix::from_fn(cols, null, |i, j| vt[(picks[j], i)].conj())
}

struct ExactRK {
    rank: usize,
    kernel: Matrix<CQ>,
    cokernel: Matrix<CQ>,
}

fn exact_rank_kernel(m: &Matrix<CQ>) -> ExactRK {
    let (kernel, rank) = exact_kernel(m);
    let (cokernel, _) = exact_kernel(&m.transpose());
    ExactRK { rank, kernel, cokernel }
}

type GInt = Complex<BigInt>;

fn lcm_denoms(row: &[CQ]) -> BigInt {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.re.denom());
        l = l.lcm(x.im.denom());
    }
    l
}

fn exact_div(a: &GInt, b: &GInt) -> GInt {
    let n = b.re.clone() * &b.re + b.im.clone() * &b.im;
    let num = a * b.conj();
    debug_assert!((&num.re % &n).is_zero() && (&num.im % &n).is_zero(), "Bareiss division not exact");
    Complex::new(num.re / &n, num.im / &n)
}

/// Fraction-free row echelon form over the Gaussian integers. Returns the
/// echelon matrix and the pivot columns.
fn bareiss_echelon(m: &Matrix<CQ>) -> (Vec<Vec<GInt>>, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<GInt>> = (0..rows)
        .map(|i| {
            let row = m.row_vec(i);
            let l = lcm_denoms(&row);
            row.iter()
                .map(|x| {
                    let re = (x.re.clone() * BigRational::from_integer(l.clone())).to_integer();
                    let im = (x.im.clone() * BigRational::from_integer(l.clone())).to_integer();
                    Complex::new(re, im)
                })
                .collect()
        })
        .collect();
    let mut prev = Complex::new(BigInt::one(), BigInt::zero());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = exact_div(&v, &prev);
            }
            a[i][c] = Complex::new(BigInt::zero(), BigInt::zero());
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Exact kernel basis (columns) and rank.
fn exact_kernel(m: &Matrix<CQ>) -> (Matrix<CQ>, usize) {
    let cols = m.cols();
    if m.rows() == 0 {
        return (Matrix::identity(cols), 0);
    }
    let (ech, pivots) = bareiss_echelon(m);
    let rank = pivots.len();
    let to_q = |g: &GInt| -> CQ {
        Complex::new(BigRational::from_integer(g.re.clone()), BigRational::from_integer(g.im.clone()))
    };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::<CQ>::zeros(cols, free.len());
    for (fi, &f) in free.iter().enumerate() {
        let mut x: Vec<CQ> = vec![<CQ as Ring>::zero(); cols];
        x[f] = <CQ as Ring>::one();
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let mut s = <CQ as Ring>::zero();
            for j in pc + 1..cols {
                if !ech[ri][j].is_zero() && !<CQ as Ring>::is_zero(&x[j]) {
                    s = s + to_q(&ech[ri][j]) * x[j].clone();
                }
            }
            x[pc] = -(s / to_q(&ech[ri][pc]));
        }
        for i in 0..cols {
            basis[(i, fi)] = x[i].clone();
        }
    }
    (basis, rank)
}

/// Convenience: does `m` have full column rank?
pub fn is_injective<T: Scalar>(m: &Matrix<T>, ctx: &ToleranceContext) -> Result<bool, NumError> {
    Ok(rank(m, ctx)? == m.cols())
}

/// Convenience: does `m` have full row rank?
pub fn is_surjective<T: Scalar>(m: &Matrix<T>, ctx: &ToleranceContext) -> Result<bool, NumError> {
    Ok(rank(m, ctx)? == m.rows())
}

/// Relative size of `m` compared to a reference scale.
pub fn relative_norm<T: Scalar>(m: &Matrix<T>, scale: f64) -> f64 {
    let n = m.norm_fro();
    if scale > 0.0 {
        n / scale
    } else {
        n
    }
}
