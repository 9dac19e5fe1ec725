//! Boundary conditions of a sampled bow solution.
//!
//! Every identity is checked coefficientwise in ζ on the three Lax
//! coefficients `(P, −2T₃, −Q)`. Jumps at λ-points are measured as the value
//! on the right minus the value on the left.

use super::solution::NahmSolution;
use super::su2::{irrep_equivalence_residual, Triple};
use crate::numkit::{Matrix, C64};
use crate::report::ValidationReport;

type Coeffs = [Matrix<C64>; 3];

fn lax_coeffs(t: &Triple) -> Coeffs {
    let i = C64::new(0.0, 1.0);
    let p = &t[0] + &t[1].scale(&i);
    let q = &t[0] - &t[1].scale(&i);
    [p, t[2].scale(&C64::new(-2.0, 0.0)), -&q]
}

/// Coefficients of `(X + ζY)(U + ζV)`.
fn product_coeffs(x: &Matrix<C64>, y: &Matrix<C64>, u: &Matrix<C64>, v: &Matrix<C64>) -> Coeffs {
    [x * u, &(x * v) + &(y * u), y * v]
}

fn coeff_residual(a: &Coeffs, b: &Coeffs) -> f64 {
    (0..3).map(|c| (&a[c] - &b[c]).max_abs()).fold(0.0, f64::max)
}

fn coeff_scale(a: &Coeffs) -> f64 {
    a.iter().map(|x| x.max_abs()).fold(1.0, f64::max)
}

/// `(B_ht − ζB_th†)(B_th + ζB_ht†)` at `−ℓ/2` and
/// `(B_th + ζB_ht†)(B_ht − ζB_th†)` at `ℓ/2`; returns both residuals.
pub fn bifundamental_residuals(sol: &NahmSolution) -> (f64, f64) {
    let h = sol.rep.ell / 2.0;
    let (bht, bth) = (&sol.b_ht, &sol.b_th);
    let at_h = product_coeffs(bht, &-&bth.adjoint(), bth, &bht.adjoint());
    let at_t = product_coeffs(bth, &bht.adjoint(), bht, &-&bth.adjoint());
    let lh = lax_coeffs(&sol.left.at(-h));
    let lt = lax_coeffs(&sol.right.at(h));
    (coeff_residual(&lh, &at_h) / coeff_scale(&at_h), coeff_residual(&lt, &at_t) / coeff_scale(&at_t))
}

/// `A(right) − A(left) − (I − J†ζ)(J + I†ζ)` at `λ₋` and `λ₊`.
pub fn fundamental_residuals(sol: &NahmSolution) -> Vec<f64> {
    let pts = [sol.rep.lambda_minus(), sol.rep.lambda_plus()];
    sol.fundamental
        .iter()
        .zip(pts)
        .map(|(f, s)| {
            let left = lax_coeffs(&sol.at(s, false));
            let right = lax_coeffs(&sol.at(s, true));
            let diff: Coeffs = [&right[0] - &left[0], &right[1] - &left[1], &right[2] - &left[2]];
            let prod = product_coeffs(&f.i, &-&f.j.adjoint(), &f.j, &f.i.adjoint());
            coeff_residual(&diff, &prod) / coeff_scale(&prod).max(coeff_scale(&diff))
        })
        .collect()
}

/// Fit `T(s) ≈ R/(s − at) + C₀ + C₁(s − at)` from the samples at signed
/// distances `side·{2ε, 4ε, 8ε}`. Returns `(R, C₀)`.
pub fn fit_pole(seg: &super::flow::Segment, at: f64, eps: f64, side: f64) -> (Triple, Triple) {
    let us: Vec<f64> = [2.0, 4.0, 8.0].iter().map(|f| side * f * eps).collect();
    let vals: Vec<Triple> = us.iter().map(|u| seg.at(at + u)).collect();
    // Solve the 3×3 system [1/u, 1, u] for each entry.
    let v = Matrix::<C64>::from_fn(3, 3, |r, c| C64::new([1.0 / us[r], 1.0, us[r]][c], 0.0));
    let vinv = v.inverse().expect("distinct fit points");
    let n = vals[0][0].rows();
    let mut res: Triple = std::array::from_fn(|_| Matrix::zeros(n, n));
    let mut c0: Triple = std::array::from_fn(|_| Matrix::zeros(n, n));
    for a in 0..3 {
        for i in 0..n {
            for j in 0..n {
                let rhs = Matrix::column(vals.iter().map(|t| t[a][(i, j)]).collect());
                let sol = &vinv * &rhs;
                res[a][(i, j)] = sol[(0, 0)];
                c0[a][(i, j)] = sol[(1, 0)];
            }
        }
    }
    (res, c0)
}

/// Pole-block equivalence residual and continuing-component mismatch at one
/// λ-point.
fn pole_check(sol: &NahmSolution, at: f64, side: f64) -> (f64, f64) {
    let (k, m) = (sol.rep.k, sol.rep.m);
    let (res, c0) = fit_pole(&sol.long, at, sol.rep.eps(), side);
    let block = |t: &Triple, r0: usize, c0_: usize, nr: usize, nc: usize| -> Triple {
        std::array::from_fn(|a| t[a].submatrix(r0, c0_, nr, nc))
    };
    let pole = block(&res, k, k, m, m);
    let mut off = 0.0f64;
    for a in 0..3 {
        off = off.max(res[a].submatrix(0, 0, k, k + m).max_abs());
        off = off.max(res[a].submatrix(k, 0, m, k).max_abs());
    }
    let equiv = irrep_equivalence_residual(&pole).max(off);
    let cont = block(&c0, 0, 0, k, k);
    let short = sol.at(at, side < 0.0);
    let mismatch = (0..3).map(|a| (&cont[a] - &short[a]).max_abs()).fold(0.0, f64::max);
    (equiv, mismatch)
}

pub fn check_boundary(sol: &NahmSolution) -> ValidationReport {
    let mut r = ValidationReport::new();
    r.residual("hermiticity", sol.hermiticity_defect(), 1e-10);
    let (bh, bt) = bifundamental_residuals(sol);
    r.residual("bifundamental_h", bh, 1e-10);
    r.residual("bifundamental_t", bt, 1e-10);
    let names = ["minus", "plus"];
    if sol.rep.m == 0 {
        let f = fundamental_residuals(sol);
        if f.len() != 2 {
            r.push("fundamental", false, None, Some(serde_json::json!({"error": "expected data at both λ-points"})));
        }
        for (name, x) in names.iter().zip(f) {
            r.residual(&format!("fundamental_{name}"), x, 1e-10);
        }
    } else {
        let pts = [(sol.rep.lambda_minus(), 1.0), (sol.rep.lambda_plus(), -1.0)];
        for (name, (at, side)) in names.iter().zip(pts) {
            let (equiv, cont) = pole_check(sol, at, side);
            r.residual(&format!("pole_{name}"), equiv, 1e-6);
            r.residual(&format!("continuing_{name}"), cont, 1e-6);
        }
    }
    r
}
