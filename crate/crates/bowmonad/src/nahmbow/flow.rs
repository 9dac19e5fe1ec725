//! Lax matrix and RK4 integration of Nahm's equations in the `T₀ = 0` gauge.
//!
//! Convention: `i dT₁/ds = [T₂, T₃]` and cyclic. In terms of `P = T₁ + iT₂`
//! and `Q = T₁ − iT₂` this reads `P′ = [T₃, P]`, `Q′ = −[T₃, Q]`,
//! `T₃′ = ½[P, Q]`, and the Lax matrix `A(ζ) = P − 2T₃ζ − Qζ²` satisfies
//! `A′ = [T₃ + Qζ, A]`.

use super::su2::Triple;
use crate::numkit::{Matrix, C64};
use serde::Serialize;
use thiserror::Error;

pub fn lax(t: &Triple, zeta: C64) -> Matrix<C64> {
    let i = C64::new(0.0, 1.0);
    let p = &t[0] + &t[1].scale(&i);
    let q = &t[0] - &t[1].scale(&i);
    &(&p - &t[2].scale(&(zeta * 2.0))) - &q.scale(&(zeta * zeta))
}

pub fn nahm_rhs(t: &Triple) -> Triple {
    let mi = C64::new(0.0, -1.0);
    [
        t[1].commutator(&t[2]).scale(&mi),
        t[2].commutator(&t[0]).scale(&mi),
        t[0].commutator(&t[1]).scale(&mi),
    ]
}

fn axpy(t: &Triple, h: f64, d: &Triple) -> Triple {
    let h = C64::new(h, 0.0);
    [&t[0] + &d[0].scale(&h), &t[1] + &d[1].scale(&h), &t[2] + &d[2].scale(&h)]
}

pub fn rk4_step(t: &Triple, h: f64) -> Triple {
    let k1 = nahm_rhs(t);
    let k2 = nahm_rhs(&axpy(t, h / 2.0, &k1));
    let k3 = nahm_rhs(&axpy(t, h / 2.0, &k2));
    let k4 = nahm_rhs(&axpy(t, h, &k3));
    let mut out = t.clone();
    for a in 0..3 {
        let sum = &(&k1[a] + &k2[a].scale(&C64::new(2.0, 0.0))) + &(&k3[a].scale(&C64::new(2.0, 0.0)) + &k4[a]);
        out[a] = &out[a] + &sum.scale(&C64::new(h / 6.0, 0.0));
    }
    out
}

/// A sampled solution on one interval, ordered along the direction of
/// integration.
#[derive(Clone, Debug)]
pub struct Segment {
    pub s: Vec<f64>,
    pub t: Vec<Triple>,
}

impl Segment {
    pub fn constant(a: f64, b: f64, t: Triple) -> Self {
        Segment { s: vec![a, b], t: vec![t.clone(), t] }
    }

    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> Triple) -> Self {
        let s: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        let t = s.iter().map(|&x| f(x)).collect();
        Segment { s, t }
    }

    pub fn rank(&self) -> usize {
        self.t[0][0].rows()
    }

    pub fn lo(&self) -> f64 {
        self.s[0].min(*self.s.last().unwrap())
    }

    pub fn hi(&self) -> f64 {
        self.s[0].max(*self.s.last().unwrap())
    }

    /// Linear interpolation; values outside the sampled range are clamped.
    pub fn at(&self, x: f64) -> Triple {
        let n = self.s.len();
        let increasing = self.s[n - 1] >= self.s[0];
        let key = |y: f64| if increasing { y } else { -y };
        let xs = key(x);
        if xs <= key(self.s[0]) {
            return self.t[0].clone();
        }
        if xs >= key(self.s[n - 1]) {
            return self.t[n - 1].clone();
        }
        let j = self.s.partition_point(|&y| key(y) <= xs).clamp(1, n - 1);
        let (a, b) = (self.s[j - 1], self.s[j]);
        let w = C64::new((x - a) / (b - a), 0.0);
        let u = C64::new(1.0, 0.0) - w;
        let (p, q) = (&self.t[j - 1], &self.t[j]);
        [&p[0].scale(&u) + &q[0].scale(&w), &p[1].scale(&u) + &q[1].scale(&w), &p[2].scale(&u) + &q[2].scale(&w)]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.t.iter().flat_map(|t| t.iter().map(|x| (x - &x.adjoint()).max_abs())).fold(0.0, f64::max)
    }

    /// Max over samples, ζ-samples and coefficients of `|c(s) − c(s₀)|`.
    pub fn isospectral_drift(&self, zetas: &[C64]) -> f64 {
        let base = fingerprint(&self.t[0], zetas);
        self.t.iter().map(|t| max_diff(&fingerprint(t, zetas), &base)).fold(0.0, f64::max)
    }
}

/// Five fixed ζ-samples off the unit circle's special points.
pub fn default_zetas() -> Vec<C64> {
    (0..5).map(|j| C64::from_polar(0.8, std::f64::consts::TAU * (j as f64 + 0.1) / 5.0)).collect()
}

/// Char-poly coefficients of `A(ζ)` at each sample, concatenated.
pub fn fingerprint(t: &Triple, zetas: &[C64]) -> Vec<C64> {
    zetas.iter().flat_map(|&z| lax(t, z).char_poly()).collect()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    // NaN must survive so that a blown-up integration is reported.
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, |acc, d| if d.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(d) })
}

#[derive(Clone, Debug, Error, PartialEq, Serialize)]
pub enum FlowError {
    #[error("step too coarse: isospectral drift {drift:.3e} at s = {at}")]
    StepTooCoarse { at: f64, drift: f64 },
    #[error("interval reaches within ε of the λ-point {point} without a pole ansatz")]
    PoleProximity { point: f64 },
    #[error("step must be positive and finite")]
    BadStep,
}

#[derive(Clone, Debug)]
pub struct FlowOptions {
    pub step: f64,
    /// Drift is compared against the start every this many steps.
    pub checkpoint_every: usize,
    pub drift_tol: f64,
    /// Points the integration may not approach (λ-points without an ansatz).
    pub singular_points: Vec<f64>,
    pub eps: f64,
}

impl FlowOptions {
    pub fn new(step: f64) -> Self {
        FlowOptions { step, checkpoint_every: 100, drift_tol: 1e-6, singular_points: vec![], eps: 1e-3 }
    }
}

/// Integrate from `s0` to `s1` (either direction).
pub fn flow(init: &Triple, s0: f64, s1: f64, opts: &FlowOptions) -> Result<Segment, FlowError> {
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(FlowError::BadStep);
    }
    let (lo, hi) = (s0.min(s1), s0.max(s1));
    for &p in &opts.singular_points {
        let dist = if p < lo { lo - p } else if p > hi { p - hi } else { 0.0 };
        if dist < opts.eps {
            return Err(FlowError::PoleProximity { point: p });
        }
    }
    let n = (((s1 - s0).abs() / opts.step).ceil() as usize).max(1);
    let h = (s1 - s0) / n as f64;
    let zetas = default_zetas();
    let base = fingerprint(init, &zetas);
    let mut seg = Segment { s: vec![s0], t: vec![init.clone()] };
    let mut cur = init.clone();
    for j in 1..=n {
        cur = rk4_step(&cur, h);
        let s = s0 + h * j as f64;
        if j % opts.checkpoint_every.max(1) == 0 || j == n {
            let drift = max_diff(&fingerprint(&cur, &zetas), &base);
            if !(drift <= opts.drift_tol) {
                return Err(FlowError::StepTooCoarse { at: s, drift });
            }
        }
        seg.s.push(s);
        seg.t.push(cur.clone());
    }
    Ok(seg)
}

/// Remove a `T₀` component: returns the triple gauge-transformed by the
/// solution of `g′ = i T₀ g`, `g(s₀) = 1`, so that the connection becomes
/// trivial. `t0` is sampled on the same grid as `seg`.
pub fn gauge_fix_t0(seg: &Segment, t0: &[Matrix<C64>]) -> Segment {
    let n = seg.rank();
    let i = C64::new(0.0, 1.0);
    let mut g = Matrix::<C64>::identity(n);
    let mut out = Segment { s: seg.s.clone(), t: vec![] };
    let conj = |g: &Matrix<C64>, t: &Triple| -> Triple {
        let gi = g.adjoint();
        [&(&gi * &t[0]) * g, &(&gi * &t[1]) * g, &(&gi * &t[2]) * g]
    };
    out.t.push(conj(&g, &seg.t[0]));
    for j in 1..seg.s.len() {
        let h = seg.s[j] - seg.s[j - 1];
        let a0 = t0[j - 1].scale(&i);
        let a1 = t0[j].scale(&i);
        let am = (&a0 + &a1).scale(&C64::new(0.5, 0.0));
        let hc = |x: f64| C64::new(x, 0.0);
        let k1 = &a0 * &g;
        let k2 = &am * &(&g + &k1.scale(&hc(h / 2.0)));
        let k3 = &am * &(&g + &k2.scale(&hc(h / 2.0)));
        let k4 = &a1 * &(&g + &k3.scale(&hc(h)));
        let sum = &(&k1 + &k2.scale(&hc(2.0))) + &(&k3.scale(&hc(2.0)) + &k4);
        g = &g + &sum.scale(&hc(h / 6.0));
        out.t.push(conj(&g, &seg.t[j]));
    }
    out
}
