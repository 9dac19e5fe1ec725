//! Bow representations, sampled bow solutions and closed-form generators.

use super::flow::Segment;
use super::su2::{su2_irrep, Triple};
use crate::numkit::{Matrix, C64};
use crate::taubnut::{TaubNutData, TaubNutDataM0};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Interval `[−ℓ/2, ℓ/2]` with λ-points `±λ`; rank `k` outside `[−λ, λ]`
/// and `k + m` inside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BowRepresentation {
    pub ell: f64,
    pub lambda: f64,
    pub k: usize,
    pub m: usize,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SolutionError {
    #[error("invalid bow representation: {0}")]
    BadRep(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

impl BowRepresentation {
    pub fn new(ell: f64, lambda: f64, k: usize, m: usize) -> Result<Self, SolutionError> {
        let r = BowRepresentation { ell, lambda, k, m };
        r.check()?;
        Ok(r)
    }

    pub fn check(&self) -> Result<(), SolutionError> {
        if !(self.ell > 0.0 && self.ell.is_finite()) {
            return Err(SolutionError::BadRep("ℓ must be positive".into()));
        }
        if !(self.lambda > 0.0 && self.lambda < self.ell / 2.0) {
            return Err(SolutionError::BadRep("λ must lie in (0, ℓ/2)".into()));
        }
        Ok(())
    }

    pub fn lambda_minus(&self) -> f64 {
        -self.lambda
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda
    }

    /// Default distance kept from λ-points carrying poles.
    pub fn eps(&self) -> f64 {
        1e-3 * self.ell
    }
}

/// Rank-one fundamental data at a λ-point (m = 0): `I: W → N`, `J: N → W`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fundamental {
    pub i: Matrix<C64>,
    pub j: Matrix<C64>,
}

/// Pole data at a λ-point of the long interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleDescriptor {
    pub at: f64,
    pub m: usize,
    /// Residue triple of the pole block, when known in closed form.
    pub residue: Option<Triple>,
    /// Highest-weight vector, first component normalized positive real.
    pub highest_weight: Option<Vec<C64>>,
}

/// A bow solution sampled on the three pieces of the interval. The end
/// `−ℓ/2` is the head `h` of the edge and `ℓ/2` its tail `t`.
#[derive(Clone, Debug)]
pub struct NahmSolution {
    pub rep: BowRepresentation,
    /// `[−ℓ/2, −λ]`, rank k.
    pub left: Segment,
    /// `[−λ, λ]`, rank k + m.
    pub long: Segment,
    /// `[λ, ℓ/2]`, rank k.
    pub right: Segment,
    /// `B_ht: N_t → N_h` and `B_th: N_h → N_t`.
    pub b_ht: Matrix<C64>,
    pub b_th: Matrix<C64>,
    /// At `λ₋` then `λ₊`; only for m = 0.
    pub fundamental: Vec<Fundamental>,
    /// At `λ₋` then `λ₊`; only for m > 0.
    pub poles: Vec<PoleDescriptor>,
}

impl NahmSolution {
    pub fn hermiticity_defect(&self) -> f64 {
        self.left.hermiticity_defect().max(self.long.hermiticity_defect()).max(self.right.hermiticity_defect())
    }

    /// Triple on the piece containing `s`; at a λ-point `right_side`
    /// selects the piece to the right.
    pub fn at(&self, s: f64, right_side: bool) -> Triple {
        let (lm, lp) = (self.rep.lambda_minus(), self.rep.lambda_plus());
        if s < lm || (s == lm && !right_side) {
            self.left.at(s)
        } else if s > lp || (s == lp && right_side) {
            self.right.at(s)
        } else {
            self.long.at(s)
        }
    }
}

fn sc(x: f64) -> Matrix<C64> {
    Matrix::scalar(C64::new(x, 0.0))
}

/// Scalar triple from `P = T₁ + iT₂` and `T₃`.
pub fn scalar_triple(p: C64, t3: f64) -> Triple {
    [sc(p.re), sc(p.im), sc(t3)]
}

/// Split `p` as `I·J` with `|I| = |J|`.
fn balanced_factor(p: C64) -> (C64, C64) {
    let r = p.norm().sqrt();
    if r == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    let i = C64::from_polar(r, p.arg() / 2.0);
    (i, p / i)
}

/// Constant k = 1 solution for `m = 0`: the short pieces carry
/// `P = B_ht B_th` with `T₃ = ½(|B_th|² − |B_ht|²)`, the long piece carries
/// `P = p_long` with the same `T₃`, and the jumps are factored with
/// `|I| = |J|` so that `T₃` does not jump.
pub fn k1_constant_m0(rep: BowRepresentation, b_ht: C64, b_th: C64, p_long: C64) -> Result<NahmSolution, SolutionError> {
    if rep.k != 1 || rep.m != 0 {
        return Err(SolutionError::Unsupported("k1_constant_m0 needs k = 1, m = 0".into()));
    }
    rep.check()?;
    let p_short = b_ht * b_th;
    let t3 = 0.5 * (b_th.norm_sqr() - b_ht.norm_sqr());
    let (lm, lp, h) = (rep.lambda_minus(), rep.lambda_plus(), rep.ell / 2.0);
    let jump = p_long - p_short;
    if jump.norm() < 1e-12 * (1.0 + p_short.norm()) {
        return Err(SolutionError::Degenerate("the fundamental jump vanishes".into()));
    }
    // Right-minus-left jumps: +jump at λ₋, −jump at λ₊.
    let (im, jm) = balanced_factor(jump);
    let (ip, jp) = balanced_factor(-jump);
    Ok(NahmSolution {
        rep,
        left: Segment::constant(-h, lm, scalar_triple(p_short, t3)),
        long: Segment::constant(lm, lp, scalar_triple(p_long, t3)),
        right: Segment::constant(lp, h, scalar_triple(p_short, t3)),
        b_ht: Matrix::scalar(b_ht),
        b_th: Matrix::scalar(b_th),
        fundamental: vec![
            Fundamental { i: Matrix::scalar(im), j: Matrix::scalar(jm) },
            Fundamental { i: Matrix::scalar(ip), j: Matrix::scalar(jp) },
        ],
        poles: vec![],
    })
}

/// Constant k = 1, m = 1 solution: the long piece is `diag(short, extra)`
/// with the extra component at `P = p_extra` and the short `T₃`. The
/// one-dimensional residues vanish.
pub fn k1_constant_m1(rep: BowRepresentation, b_ht: C64, b_th: C64, p_extra: C64) -> Result<NahmSolution, SolutionError> {
    if rep.k != 1 || rep.m != 1 {
        return Err(SolutionError::Unsupported("k1_constant_m1 needs k = 1, m = 1".into()));
    }
    rep.check()?;
    let p_short = b_ht * b_th;
    let t3 = 0.5 * (b_th.norm_sqr() - b_ht.norm_sqr());
    let (lm, lp, h) = (rep.lambda_minus(), rep.lambda_plus(), rep.ell / 2.0);
    let d = |a: f64, b: f64| Matrix::diag(&[C64::new(a, 0.0), C64::new(b, 0.0)]);
    let long = [d(p_short.re, p_extra.re), d(p_short.im, p_extra.im), d(t3, t3)];
    let zero = [sc(0.0), sc(0.0), sc(0.0)];
    let pole = |at: f64| PoleDescriptor { at, m: 1, residue: Some(zero.clone()), highest_weight: Some(vec![C64::new(1.0, 0.0)]) };
    Ok(NahmSolution {
        rep,
        left: Segment::constant(-h, lm, scalar_triple(p_short, t3)),
        long: Segment::constant(lm, lp, long),
        right: Segment::constant(lp, h, scalar_triple(p_short, t3)),
        b_ht: Matrix::scalar(b_ht),
        b_th: Matrix::scalar(b_th),
        fundamental: vec![],
        poles: vec![pole(lm), pole(lp)],
    })
}

/// Lift k = 1, m = 0 Taub-NUT data: `P_long = B_mid = B₁ − C₁D₁/A`.
pub fn lift_taubnut_m0(rep: BowRepresentation, d: &TaubNutDataM0<C64>) -> Result<NahmSolution, SolutionError> {
    if d.k != 1 {
        return Err(SolutionError::Unsupported("closed-form lift needs k = 1".into()));
    }
    let bmid = d.b_mid().ok_or_else(|| SolutionError::Degenerate("A is singular".into()))?;
    k1_constant_m0(rep, d.bht[(0, 0)], d.bth[(0, 0)], bmid[(0, 0)])
}

/// Lift k = 1, m = 1 Taub-NUT data to the reducible diagonal solution whose
/// extra component sits at `tr M − B₁`.
pub fn lift_taubnut_m1(rep: BowRepresentation, d: &TaubNutData<C64>) -> Result<NahmSolution, SolutionError> {
    if d.k != 1 || d.m != 1 {
        return Err(SolutionError::Unsupported("closed-form lift needs k = 1, m = 1".into()));
    }
    let extra = d.mmat().trace() - d.b1()[(0, 0)];
    k1_constant_m1(rep, d.bht[(0, 0)], d.bth[(0, 0)], extra)
}

/// Stationary diagonal solution with one point `(t₁, t₂, t₃)` per
/// diagonal entry, m = 0 and vanishing fundamental data. The edge maps are
/// diagonal and solve the end conditions.
pub fn diagonal_nahm(rep: BowRepresentation, points: &[[f64; 3]]) -> Result<NahmSolution, SolutionError> {
    if rep.m != 0 || rep.k != points.len() {
        return Err(SolutionError::Unsupported("diagonal_nahm needs m = 0 and one point per rank".into()));
    }
    rep.check()?;
    let k = rep.k;
    let diag = |c: usize| Matrix::diag(&points.iter().map(|p| C64::new(p[c], 0.0)).collect::<Vec<_>>());
    let t: Triple = [diag(0), diag(1), diag(2)];
    let mut bht = Vec::new();
    let mut bth = Vec::new();
    for p in points {
        let pc = C64::new(p[0], p[1]);
        let t3 = p[2];
        // |b_th|² − |b_ht|² = 2t₃ and |b_th||b_ht| = |p|.
        let y = -t3 + (t3 * t3 + pc.norm_sqr()).sqrt();
        let x = y + 2.0 * t3;
        if y > 0.0 {
            let a = C64::new(y.sqrt(), 0.0);
            bht.push(a);
            bth.push(pc / a);
        } else {
            bht.push(C64::new(0.0, 0.0));
            bth.push(C64::new(x.max(0.0).sqrt(), 0.0));
        }
    }
    let (lm, lp, h) = (rep.lambda_minus(), rep.lambda_plus(), rep.ell / 2.0);
    let zero_f = || Fundamental { i: Matrix::zeros(k, 1), j: Matrix::zeros(1, k) };
    Ok(NahmSolution {
        rep,
        left: Segment::constant(-h, lm, t.clone()),
        long: Segment::constant(lm, lp, t.clone()),
        right: Segment::constant(lp, h, t),
        b_ht: Matrix::diag(&bht),
        b_th: Matrix::diag(&bth),
        fundamental: vec![zero_f(), zero_f()],
        poles: vec![],
    })
}

/// The exact pole solution `T_i = f_i(u) ρ_i` with `f₁ = f₂ = a/sin(au)`,
/// `f₃ = a·cot(au)`, `u = s − s₀`; it tends to `ρ_i / u` as `a → 0`.
pub fn euler_top(m: usize, a: f64, u: f64) -> Triple {
    let rho = su2_irrep(m);
    let (f12, f3) = if a == 0.0 { (1.0 / u, 1.0 / u) } else { (a / (a * u).sin(), a / (a * u).tan()) };
    [rho[0].scale(&C64::new(f12, 0.0)), rho[1].scale(&C64::new(f12, 0.0)), rho[2].scale(&C64::new(f3, 0.0))]
}

/// A segment of the Euler-top solution on `[s₀ + u₀, s₀ + u₁]`, sampled on
/// a uniform grid plus the points `s₀ + {2, 4, 8}·ε` used by the pole fit.
pub fn euler_top_segment(m: usize, a: f64, s0: f64, u0: f64, u1: f64, n: usize, eps: f64) -> Segment {
    let mut us: Vec<f64> = (0..=n).map(|j| u0 + (u1 - u0) * j as f64 / n as f64).collect();
    for f in [2.0, 4.0, 8.0] {
        let u = f * eps;
        if u > u0 && u < u1 {
            us.push(u);
        }
    }
    us.sort_by(|x, y| x.partial_cmp(y).unwrap());
    us.dedup();
    Segment { s: us.iter().map(|u| s0 + u).collect(), t: us.iter().map(|&u| euler_top(m, a, u)).collect() }
}

/// Scalar multiple of the identity, useful for building test triples.
pub fn identity_triple(n: usize, t: [f64; 3]) -> Triple {
    let id = Matrix::<C64>::identity(n);
    [id.scale(&C64::new(t[0], 0.0)), id.scale(&C64::new(t[1], 0.0)), id.scale(&C64::new(t[2], 0.0))]
}

/// Gauge transform by a constant unitary `U` on the rank-k spaces (extended
/// by the identity on the pole block): `T ↦ U T U†`, `B ↦ U B U†`,
/// `I ↦ U I`, `J ↦ J U†`.
pub fn conjugate(sol: &NahmSolution, u: &Matrix<C64>) -> NahmSolution {
    let k = sol.rep.k;
    assert_eq!(u.shape(), (k, k));
    let ul = Matrix::direct_sum(&[u, &Matrix::identity(sol.rep.m)]);
    let conj_seg = |seg: &Segment, g: &Matrix<C64>| Segment {
        s: seg.s.clone(),
        t: seg.t.iter().map(|t| [0, 1, 2].map(|a| &(g * &t[a]) * &g.adjoint())).collect(),
    };
    NahmSolution {
        rep: sol.rep,
        left: conj_seg(&sol.left, u),
        long: conj_seg(&sol.long, &ul),
        right: conj_seg(&sol.right, u),
        b_ht: &(u * &sol.b_ht) * &u.adjoint(),
        b_th: &(u * &sol.b_th) * &u.adjoint(),
        fundamental: sol.fundamental.iter().map(|f| Fundamental { i: u * &f.i, j: &f.j * &u.adjoint() }).collect(),
        poles: sol.poles.clone(),
    }
}
