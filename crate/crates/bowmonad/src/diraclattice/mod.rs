//! Discretized bow Dirac operator at a Taub-NUT point.
//!
//! Nodes carry `H¹` test functions, cells carry `L²` functions. The
//! Dolbeault complex `A → B → C` is assembled with staggered differences:
//! `δ₀ f = (Df, −Zf, −J f(λ±), E₀(f_h, f_t))` maps nodes to cells and
//! `δ₁ = (Z, D, −I δ_λ, edge δ's)` maps cells back to node densities, each
//! delta a single junction row with weight `1/h`. In orthonormal
//! coordinates `D_t† = (−δ₀†; δ₁)` and `D_t† D_t` acts on `S ⊗ nodes` with
//! the two spinor components being the `A` and `C` copies.
//!
//! Edge blocks: `E₀(f_h, f_t) = (ξ f_h + B_ht f_t, B_th f_h + ψ f_t)`, with
//! `(−ψ e₁ + B_ht e₂)` inserted at `h` and `(−B_th e₁ + ξ e₂)` at `t`.

use crate::monadcore::{fiber, ChartPoint, ParamMonad};
use crate::nahmbow::reduce::{complex_defect, point_data, reduce_to_finite_monad};
use crate::nahmbow::NahmSolution;
use crate::numkit::linalg::{decide_rank, NumError, ToleranceContext};
use crate::numkit::{Matrix, C64};
use crate::report::ValidationReport;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DiracError {
    #[error("grid does not place the λ-points on nodes (offset {offset:.3e})")]
    Misaligned { offset: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular point: min eigenvalue {min_eig:.3e}")]
    SingularPoint { min_eig: f64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Debug)]
pub struct DiracLattice {
    pub grid: usize,
    pub h: f64,
    pub xi: C64,
    pub psi: C64,
    pub t: C64,
    pub t3: f64,
    pub node_s: Vec<f64>,
    pub node_rank: Vec<usize>,
    pub cell_rank: Vec<usize>,
    pub lambda_nodes: [usize; 2],
    /// Number of auxiliary W columns (2 when m = 0, else 0).
    pub n_w: usize,
    /// `δ₀: A → B` in orthonormal coordinates.
    pub delta0: Matrix<C64>,
    /// `δ₁: B → C` in orthonormal coordinates.
    pub delta1: Matrix<C64>,
    /// `max ‖[T₃, P]‖`; the complex closes only where this vanishes.
    pub complex_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Shape {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub w: usize,
    pub edge: usize,
}

fn offsets(ranks: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for r in ranks {
        out.push(out.last().unwrap() + r);
    }
    out
}

/// Node space → cell space: identity or the inclusion of continuing components.
fn embed(node_rank: usize, cell_rank: usize) -> Matrix<C64> {
    Matrix::vstack(&[&Matrix::identity(node_rank), &Matrix::zeros(cell_rank - node_rank, node_rank)])
}

pub fn assemble(sol: &NahmSolution, xi: C64, psi: C64, grid: usize) -> Result<DiracLattice, DiracError> {
    let rep = sol.rep;
    let (k, m) = (rep.k, rep.m);
    if m >= 2 {
        return Err(DiracError::Unsupported("pole blocks of dimension ≥ 2".into()));
    }
    let h = rep.ell / grid as f64;
    let xl = (rep.ell / 2.0 - rep.lambda) / h;
    let il = xl.round() as usize;
    if (xl - il as f64).abs() > 1e-9 * grid as f64 || il == 0 || 2 * il >= grid {
        return Err(DiracError::Misaligned { offset: (xl - il as f64).abs() * h });
    }
    let (im_, ip_) = (il, grid - il);
    let (t, t3) = point_data(xi, psi);
    let node_s: Vec<f64> = (0..=grid).map(|j| -rep.ell / 2.0 + h * j as f64).collect();
    let node_rank: Vec<usize> = (0..=grid).map(|j| if j > im_ && j < ip_ { k + m } else { k }).collect();
    let cell_rank: Vec<usize> = (0..grid).map(|c| if c >= im_ && c < ip_ { k + m } else { k }).collect();
    let no = offsets(&node_rank);
    let co = offsets(&cell_rank);
    let (na, nc) = (*no.last().unwrap(), *co.last().unwrap());
    let n_w = if m == 0 { 2 } else { 0 };
    let nb = 2 * nc + n_w + 2 * k;
    let (w0, e1o, e2o) = (2 * nc, 2 * nc + n_w, 2 * nc + n_w + k);

    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let inv_h = C64::new(1.0 / h, 0.0);
    let mut d0 = Matrix::<C64>::zeros(nb, na);
    let mut d1 = Matrix::<C64>::zeros(na, nb);
    for c in 0..grid {
        let mid = 0.5 * (node_s[c] + node_s[c + 1]);
        let tr = sol.at(mid, true);
        let r = cell_rank[c];
        let id = Matrix::<C64>::identity(r);
        let z = &(&tr[0] + &tr[1].scale(&i)) - &id.scale(&t);
        let tau = &tr[2] - &id.scale(&C64::new(t3, 0.0));
        for (side, j) in [(0usize, c), (1, c + 1)] {
            let e = embed(node_rank[j], r);
            let sign = if side == 0 { -1.0 } else { 1.0 };
            // δ₀: (Df)_c and −(Zf)_c.
            let df = &e.scale(&C64::new(sign / h, 0.0)) + &(&tau * &e).scale(&half);
            d0.add_block(co[c], no[j], &df);
            d0.add_block(nc + co[c], no[j], &(&z * &e).scale(&-half));
            // δ₁ at node j: ½ π Z g1_c, ±π g2_c / h + ½ π τ g2_c.
            let p = e.adjoint();
            d1.add_block(no[j], co[c], &(&p * &z).scale(&half));
            let dg = &p.scale(&C64::new(-sign / h, 0.0)) + &(&p * &tau).scale(&half);
            d1.add_block(no[j], nc + co[c], &dg);
        }
    }
    if m == 0 {
        for (a, &j) in [im_, ip_].iter().enumerate() {
            let f = &sol.fundamental[a];
            d0.add_block(w0 + a, no[j], &-&f.j);
            d1.add_block(no[j], w0 + a, &-&f.i.scale(&inv_h));
        }
    }
    let idk = Matrix::<C64>::identity(k);
    let (bht, bth) = (&sol.b_ht, &sol.b_th);
    let last = no[grid];
    d0.add_block(e1o, no[0], &idk.scale(&xi));
    d0.add_block(e1o, last, bht);
    d0.add_block(e2o, no[0], bth);
    d0.add_block(e2o, last, &idk.scale(&psi));
    d1.add_block(no[0], e1o, &idk.scale(&(-psi * inv_h)));
    d1.add_block(no[0], e2o, &bht.scale(&inv_h));
    d1.add_block(last, e1o, &-&bth.scale(&inv_h));
    d1.add_block(last, e2o, &idk.scale(&(xi * inv_h)));

    // Orthonormal coordinates: nodes and cells have weight h, W and edge slots 1.
    let sq = h.sqrt();
    let wb: Vec<f64> = (0..nb).map(|r| if r < 2 * nc { sq } else { 1.0 }).collect();
    let d0 = Matrix::from_fn(nb, na, |r, c| d0[(r, c)] * (wb[r] / sq));
    let d1 = Matrix::from_fn(na, nb, |r, c| d1[(r, c)] * (sq / wb[c]));
    Ok(DiracLattice {
        grid,
        h,
        xi,
        psi,
        t,
        t3,
        node_s,
        node_rank,
        cell_rank,
        lambda_nodes: [im_, ip_],
        n_w,
        delta0: d0,
        delta1: d1,
        complex_defect: complex_defect(sol),
    })
}

impl DiracLattice {
    pub fn shape(&self) -> Shape {
        let a = self.delta0.cols();
        let b = self.delta0.rows();
        let k = self.node_rank[0];
        Shape { a, b, c: self.delta1.rows(), w: self.n_w, edge: 2 * k }
    }

    /// `D_t† = (−δ₀†; δ₁)`: B → A ⊕ C.
    pub fn dirac_adjoint(&self) -> Matrix<C64> {
        Matrix::vstack(&[&-&self.delta0.adjoint(), &self.delta1])
    }

    /// `D_t† D_t` on `A ⊕ C`.
    pub fn laplacian(&self) -> Matrix<C64> {
        let l = laplacian_na(self);
        Matrix::from_fn(l.nrows(), l.ncols(), |r, c| l[(r, c)])
    }

    /// `‖δ₁δ₀‖ / (‖δ₁‖‖δ₀‖)`.
    pub fn closure_residual(&self) -> f64 {
        (&self.delta1 * &self.delta0).norm_fro() / (self.delta1.norm_fro() * self.delta0.norm_fro())
    }

    /// Slice of the B coordinates holding the W and edge slots.
    pub fn finite_slots(&self) -> std::ops::Range<usize> {
        let b = self.delta0.rows();
        let k = self.node_rank[0];
        b - self.n_w - 2 * k..b
    }
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub dim: usize,
    /// Orthonormal columns in B coordinates.
    pub basis: Matrix<C64>,
    pub gap: f64,
    pub singular_values: Vec<f64>,
}

/// Numerical kernel of `D_t†`. Singular values decide the rank. When
/// `D_t†` has full row rank its kernel is the orthogonal complement of the
/// range of `D_t`, read off from a thin QR; otherwise the right singular
/// vectors are used. In the full-rank case there is no computed singular
/// value past the cut and the gap is measured against the roundoff floor
/// `ε·n·σ_max`.
pub fn kernel(dl: &DiracLattice, ctx: &ToleranceContext) -> Result<Kernel, DiracError> {
    let y = dl.dirac_adjoint().to_nalgebra();
    let (rows, cols) = y.shape();
    let mut sv: Vec<f64> = y.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let (rank, _) = decide_rank(&sv, ctx)?;
    let null = cols - rank;
    let floor = f64::EPSILON * cols as f64 * sv.first().copied().unwrap_or(0.0);
    let gap = match (rank.checked_sub(1).map(|j| sv[j]), sv.get(rank)) {
        (Some(a), Some(&b)) => a / b.max(floor),
        (Some(a), None) => a / floor,
        _ => f64::INFINITY,
    };
    let range = if rank == rows {
        y.adjoint().qr().q()
    } else {
        let svd = y.svd(false, true);
        let vt = svd.v_t.expect("v_t requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&x, &z| svd.singular_values[z].partial_cmp(&svd.singular_values[x]).unwrap());
        DMatrix::from_fn(cols, rank, |r, c| vt[(order[c], r)].conj())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut block = DMatrix::<C64>::from_fn(cols, null, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    for _ in 0..2 {
        let coef = range.adjoint() * &block;
        block -= &range * coef;
    }
    let q = block.qr().q();
    let basis = Matrix::from_fn(cols, null, |r, c| q[(r, c)]);
    Ok(Kernel { dim: null, basis, gap, singular_values: sv })
}

/// `max_q ‖[D_t†D_t, q]‖ / ‖D_t†D_t‖` over the quaternion units
/// `q ∈ {diag(i, −i), (0 −1; 1 0), (0 i; i 0)}` acting on the spinor factor
/// `A ⊕ C`. With `L = (L₀₀ L₀₁; L₁₀ L₁₁)` the three commutators have blocks
/// built from `L₀₁ ± L₁₀` and `L₀₀ − L₁₁` only.
pub fn reality_residual(dl: &DiracLattice) -> f64 {
    let l = laplacian_na(dl);
    let n = dl.delta0.cols();
    let blk = |r: usize, c: usize| l.view((r * n, c * n), (n, n));
    let (l00, l01, l10, l11) = (blk(0, 0), blk(0, 1), blk(1, 0), blk(1, 1));
    let off = (l01.norm_squared() + l10.norm_squared()).sqrt();
    let sum = (&l01 + &l10).norm();
    let dif = (&l01 - &l10).norm();
    let diag = (&l00 - &l11).norm();
    let norm = l.norm();
    let qi = 2.0 * off;
    let qj = (2.0 * sum * sum + 2.0 * diag * diag).sqrt();
    let qk = (2.0 * dif * dif + 2.0 * diag * diag).sqrt();
    qi.max(qj).max(qk) / norm
}

fn laplacian_na(dl: &DiracLattice) -> DMatrix<C64> {
    let y = dl.dirac_adjoint().to_nalgebra();
    &y * y.adjoint()
}

/// Smallest eigenvalue of `D_t†D_t`, computed as `σ_min(D_t†)²`.
pub fn positivity(dl: &DiracLattice) -> f64 {
    let sv = dl.dirac_adjoint().to_nalgebra().singular_values();
    min_eig_from(sv.as_slice())
}

/// `σ_min²` from a list of singular values of `D_t†`.
pub fn min_eig_from(sv: &[f64]) -> f64 {
    let s = sv.iter().copied().fold(f64::INFINITY, f64::min);
    s * s
}

/// Largest principal angle between the kernels of two lattices, compared on
/// the grid-independent W and edge slots.
pub fn kernel_angle(a: (&DiracLattice, &Kernel), b: (&DiracLattice, &Kernel)) -> f64 {
    let proj = |dl: &DiracLattice, k: &Kernel| -> Matrix<C64> {
        let r = dl.finite_slots();
        let p = Matrix::from_fn(r.len(), k.dim, |i, j| k.basis[(r.start + i, j)]);
        orthonormalize(&p)
    };
    let (qa, qb) = (proj(a.0, a.1), proj(b.0, b.1));
    if qa.cols() != qb.cols() {
        return std::f64::consts::FRAC_PI_2;
    }
    let s = crate::numkit::linalg::singular_values(&(&qa.adjoint() * &qb));
    s.last().map(|&c| c.min(1.0).acos()).unwrap_or(0.0)
}

fn orthonormalize(m: &Matrix<C64>) -> Matrix<C64> {
    let svd = m.to_nalgebra().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&j| svd.singular_values[j] > 1e-10 * smax).collect();
    Matrix::from_fn(m.rows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Paired comparison at one point: kernel dimension, the algebraic fiber
/// (when a monad is given) and the finite reduction.
pub fn compare_with_monad(
    monad: Option<&ParamMonad<C64>>,
    sol: &NahmSolution,
    xi: C64,
    psi: C64,
    grid: usize,
    ctx: &ToleranceContext,
) -> ValidationReport {
    let mut r = ValidationReport::new();
    let lattice = assemble(sol, xi, psi, grid).and_then(|dl| {
        let k = kernel(&dl, ctx)?;
        let pos = min_eig_from(&k.singular_values);
        Ok((k, pos, reality_residual(&dl)))
    });
    let kdim = match &lattice {
        Ok((k, pos, real)) => {
            r.push("kernel", k.dim == 2, None, Some(serde_json::json!({"dim": k.dim, "gap": k.gap})));
            r.push("positivity", *pos > 0.0, Some(*pos), None);
            r.residual("reality", *real, 1e-8);
            Some(k.dim)
        }
        Err(e) => {
            r.push("kernel", false, None, Some(serde_json::json!({"error": e.to_string()})));
            None
        }
    };
    let red = reduce_to_finite_monad(sol, xi, psi, ctx).map_err(|e| e.to_string()).and_then(|mp| {
        fiber(&mp, ctx).map(|f| f.dim).map_err(|e| e.to_string())
    });
    match &red {
        Ok(d) => r.push("reduction_matches", Some(*d) == kdim, None, Some(serde_json::json!({"dim": d}))),
        Err(e) => r.push("reduction_matches", false, None, Some(serde_json::json!({"error": e}))),
    }
    if let Some(pm) = monad {
        let alg = pm
            .evaluate(&ChartPoint::xi_psi(xi, psi))
            .map_err(|e| e.to_string())
            .and_then(|ev| fiber(&ev, ctx).map(|f| f.dim).map_err(|e| e.to_string()));
        match alg {
            Ok(d) => r.push("monad_matches", Some(d) == kdim, None, Some(serde_json::json!({"dim": d}))),
            Err(e) => r.push("monad_matches", false, None, Some(serde_json::json!({"error": e}))),
        }
    }
    r
}
