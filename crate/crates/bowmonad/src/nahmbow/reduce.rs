//! Finite-dimensional reduction of the bow Dolbeault complex at a point.
//!
//! At a Taub-NUT point with `t = ξψ`, `t₃ = (|ψ|² − |ξ|²)/2` the complex is
//! `H¹ → L² ⊕ L² ⊕ W ⊕ (edge) → H⁻¹` with `D = d/ds + T₃ − t₃` and
//! `Z = P − t`. Gauging the first L² component away leaves covariantly
//! constant sections, so the cohomology is that of a finite monad
//! `K → (W or pole slots) ⊕ N_h ⊕ N_t → N_t` built from transport operators
//! `g′ = −(T₃ − t₃)g` across the three pieces and the edge blocks.

use super::flow::Segment;
use super::solution::NahmSolution;
use crate::monadcore::{ChartPoint, MonadAtPoint};
use crate::numkit::linalg::{rank_kernel, ToleranceContext};
use crate::numkit::{Matrix, C64};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ReduceError {
    #[error("transport numerically singular (condition {cond:.3e})")]
    TransportSingular { cond: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("the Dolbeault complex does not close: ‖[T₃, P]‖ = {defect:.3e}")]
    ConventionMismatch { defect: f64 },
    #[error("numerics: {0}")]
    Num(String),
}

/// The parameters `(t, t₃)` of the point `(ξ, ψ)`.
pub fn point_data(xi: C64, psi: C64) -> (C64, f64) {
    (xi * psi, 0.5 * (psi.norm_sqr() - xi.norm_sqr()))
}

/// Transport of `g′ = −(T₃ − t₃)g` from the low to the high end of `seg`.
pub fn transport(seg: &Segment, t3: f64) -> Matrix<C64> {
    let n = seg.rank();
    let (a, b) = (seg.lo(), seg.hi());
    let steps = (((b - a) / 2e-3).ceil() as usize).max(8);
    let h = (b - a) / steps as f64;
    let gen = |s: f64| -> Matrix<C64> {
        let t = seg.at(s);
        -&(&t[2] - &Matrix::identity(n).scale(&C64::new(t3, 0.0)))
    };
    let mut g = Matrix::<C64>::identity(n);
    let c = |x: f64| C64::new(x, 0.0);
    for j in 0..steps {
        let s = a + h * j as f64;
        let (m0, m1, m2) = (gen(s), gen(s + h / 2.0), gen(s + h));
        let k1 = &m0 * &g;
        let k2 = &m1 * &(&g + &k1.scale(&c(h / 2.0)));
        let k3 = &m1 * &(&g + &k2.scale(&c(h / 2.0)));
        let k4 = &m2 * &(&g + &k3.scale(&c(h)));
        let sum = &(&k1 + &k2.scale(&c(2.0))) + &(&k3.scale(&c(2.0)) + &k4);
        g = &g + &sum.scale(&c(h / 6.0));
    }
    g
}

/// `∫ (T(σ)†T(σ))⁻¹ dσ` over `seg`, with `T` the transport from its low end.
fn gram_integral(seg: &Segment, t3: f64) -> Matrix<C64> {
    let n = seg.rank();
    let (a, b) = (seg.lo(), seg.hi());
    let pieces = (((b - a) / 2e-2).ceil() as usize).max(4);
    let h = (b - a) / pieces as f64;
    let mut acc = Matrix::<C64>::zeros(n, n);
    let mut prev: Option<Matrix<C64>> = None;
    let mut g = Matrix::<C64>::identity(n);
    let inv_gram = |g: &Matrix<C64>| (&g.adjoint() * g).inverse().expect("transport is invertible");
    for j in 0..pieces {
        let lo = a + h * j as f64;
        let sub = Segment { s: vec![lo, lo + h / 2.0, lo + h], t: vec![seg.at(lo), seg.at(lo + h / 2.0), seg.at(lo + h)] };
        let half = Segment { s: vec![lo, lo + h / 2.0], t: vec![sub.t[0].clone(), sub.t[1].clone()] };
        let f0 = prev.take().unwrap_or_else(|| inv_gram(&g));
        let gm = &transport(&half, t3) * &g;
        g = &transport(&sub, t3) * &g;
        let (fm, f1) = (inv_gram(&gm), inv_gram(&g));
        // Simpson on each piece.
        let w = C64::new(h / 6.0, 0.0);
        acc = &acc + &(&(&f0 + &fm.scale(&C64::new(4.0, 0.0))) + &f1).scale(&w);
        prev = Some(f1);
    }
    acc
}

/// Largest `‖[T₃, P]‖` over the samples of all pieces. The Dolbeault
/// complex with `D = d/ds + T₃ − t₃` closes only where this vanishes.
pub fn complex_defect(sol: &NahmSolution) -> f64 {
    let i = C64::new(0.0, 1.0);
    [&sol.left, &sol.long, &sol.right]
        .iter()
        .flat_map(|seg| seg.t.iter())
        .map(|t| t[2].commutator(&(&t[0] + &t[1].scale(&i))).max_abs())
        .fold(0.0, f64::max)
}

fn cond(m: &Matrix<C64>) -> f64 {
    let sv = crate::numkit::linalg::singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&a), Some(&b)) if b > 0.0 => a / b,
        _ => f64::INFINITY,
    }
}

pub fn reduce_to_finite_monad(
    sol: &NahmSolution,
    xi: C64,
    psi: C64,
    ctx: &ToleranceContext,
) -> Result<MonadAtPoint<C64>, ReduceError> {
    let (k, m) = (sol.rep.k, sol.rep.m);
    if m >= 2 {
        return Err(ReduceError::Unsupported("pole blocks of dimension ≥ 2".into()));
    }
    let defect = complex_defect(sol);
    if defect > 1e-8 {
        return Err(ReduceError::ConventionMismatch { defect });
    }
    let (t, t3) = point_data(xi, psi);
    let ta = transport(&sol.left, t3);
    let tl = transport(&sol.long, t3);
    let tb = transport(&sol.right, t3);
    for g in [&ta, &tl, &tb] {
        let c = cond(g);
        if c > 1e12 {
            return Err(ReduceError::TransportSingular { cond: c });
        }
    }
    let iota = Matrix::<C64>::vstack(&[&Matrix::identity(k), &Matrix::zeros(m, k)]);
    let pi = iota.adjoint();
    let ext = Matrix::<C64>::vstack(&[&Matrix::zeros(k, m), &Matrix::identity(m)]);
    let phi = &(&(&(&tb * &pi) * &tl) * &iota) * &ta;
    let id = Matrix::<C64>::identity(k);
    let sc = |x: C64| id.scale(&x);
    let (bht, bth) = (&sol.b_ht, &sol.b_th);

    let e1_beta = &phi.scale(&psi) + bth;
    let e2_beta = -&(&(&phi * bht) + &sc(xi));
    let e1_alpha = &sc(xi) + &(bht * &phi);
    let e2_alpha = bth + &phi.scale(&psi);

    let (alpha, beta) = if m == 0 {
        if sol.fundamental.len() != 2 {
            return Err(ReduceError::Unsupported("m = 0 needs fundamental data at both λ-points".into()));
        }
        let (fm, fp) = (&sol.fundamental[0], &sol.fundamental[1]);
        let beta = Matrix::hstack(&[&(&(&tb * &tl) * &fm.i), &(&tb * &fp.i), &e1_beta, &e2_beta]);
        let alpha = Matrix::vstack(&[&-&(&fm.j * &ta), &-&(&(&fp.j * &tl) * &ta), &e1_alpha, &e2_alpha]);
        (alpha, beta)
    } else {
        // Flat sections whose pole components vanish at λ₊.
        let constraint = &(&(&ext.adjoint() * &tl) * &iota) * &ta;
        let kb = rank_kernel(&constraint, ctx).map_err(|e| ReduceError::Num(e.to_string()))?.kernel;
        let z0 = {
            let tr = sol.long.at(sol.rep.lambda_minus());
            &(&tr[0] + &tr[1].scale(&C64::new(0.0, 1.0))) - &Matrix::identity(k + m).scale(&t)
        };
        // Cokernel of D on the long piece: y = (T†)⁻¹E·z with π y(λ₊) = 0.
        let tl_dual = tl.adjoint().inverse().ok_or(ReduceError::TransportSingular { cond: f64::INFINITY })?;
        let y_basis = rank_kernel(&(&(&pi * &tl_dual) * &ext), ctx).map_err(|e| ReduceError::Num(e.to_string()))?.kernel;
        let gram = gram_integral(&sol.long, t3);
        let c_beta = -&(&(&(&(&(&tb * &pi) * &tl) * &z0) * &gram) * &(&ext * &y_basis));
        let x_alpha = -&(&(&(&ext.adjoint() * &z0) * &iota) * &ta);
        let beta = Matrix::hstack(&[&c_beta, &(&(&tb * &pi) * &(&tl * &ext)), &e1_beta, &e2_beta]);
        let c_alpha = Matrix::zeros(y_basis.cols(), kb.cols());
        let alpha = Matrix::vstack(&[&c_alpha, &(&Matrix::vstack(&[&x_alpha, &e1_alpha, &e2_alpha]) * &kb)]);
        (alpha, beta)
    };
    let ba = &beta * &alpha;
    let denom = (beta.norm_fro() * alpha.norm_fro()).max(f64::MIN_POSITIVE);
    Ok(MonadAtPoint { residual: ba.norm_fro() / denom, alpha, beta, point: ChartPoint::xi_psi(xi, psi) })
}
