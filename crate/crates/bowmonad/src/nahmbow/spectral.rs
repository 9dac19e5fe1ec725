//! Spectral curves `det(η − A(ζ)) = Σ c_ij η^i ζ^j`.

use super::flow::{lax, Segment};
use super::solution::NahmSolution;
use super::su2::Triple;
use crate::numkit::eigen::poly_roots;
use crate::numkit::{Matrix, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    S0,
    S1,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("interpolation ill-conditioned: {samples} ζ-samples, need at least {needed}")]
    InterpolationIllConditioned { samples: usize, needed: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralCurve {
    pub rank: usize,
    /// `coeffs[i][j]` multiplies `η^i ζ^j`, for `i ≤ r`, `j ≤ 2r`.
    pub coeffs: Vec<Vec<C64>>,
    /// Largest coefficient outside the band `j ≤ 2(r − i)`, relative.
    pub grading_residual: f64,
    /// Relative defect of the real-involution identity.
    pub reality_residual: f64,
    /// Largest coefficient change between the evaluation points in `s`.
    pub s_variation: f64,
    pub s_values: Vec<f64>,
}

impl SpectralCurve {
    pub fn eval(&self, eta: C64, zeta: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                acc += c * eta.powi(i as i32) * zeta.powi(j as i32);
            }
        }
        acc
    }

    /// Coefficients of the η-polynomial at fixed ζ, lowest degree first.
    pub fn eta_poly(&self, zeta: C64) -> Vec<C64> {
        self.coeffs
            .iter()
            .map(|row| row.iter().enumerate().map(|(j, c)| c * zeta.powi(j as i32)).sum())
            .collect()
    }
}

fn dft_nodes(n: usize) -> Vec<C64> {
    (0..n).map(|a| C64::from_polar(1.0, TAU * a as f64 / n as f64)).collect()
}

/// Interpolate the coefficients of one Lax matrix from determinant values on
/// a grid of roots of unity: `2r + 1` nodes in η and `n_zeta` in ζ.
/// Returns the full coefficient table (before truncation to the band).
fn interpolate(t: &Triple, n_zeta: usize) -> Vec<Vec<C64>> {
    let r = t[0].rows();
    let n_eta = 2 * r + 1;
    let etas = dft_nodes(n_eta);
    let zetas = dft_nodes(n_zeta);
    let id = Matrix::<C64>::identity(r);
    let vals: Vec<Vec<C64>> = etas
        .iter()
        .map(|&e| zetas.iter().map(|&z| (&id.scale(&e) - &lax(t, z)).det()).collect())
        .collect();
    let mut c = vec![vec![C64::new(0.0, 0.0); n_zeta]; n_eta];
    for i in 0..n_eta {
        for j in 0..n_zeta {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n_eta {
                for b in 0..n_zeta {
                    acc += vals[a][b] * etas[a].powi(-(i as i32)) * zetas[b].powi(-(j as i32));
                }
            }
            c[i][j] = acc / (n_eta * n_zeta) as f64;
        }
    }
    c
}

fn band(full: &[Vec<C64>], r: usize) -> (Vec<Vec<C64>>, f64) {
    let scale = full.iter().flatten().map(|z| z.norm()).fold(1e-300, f64::max);
    let mut out = vec![vec![C64::new(0.0, 0.0); 2 * r + 1]; r + 1];
    let mut outside = 0.0f64;
    for (i, row) in full.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if i <= r && j <= 2 * (r - i) {
                out[i][j] = c;
            } else {
                outside = outside.max(c.norm());
            }
        }
    }
    (out, outside / scale)
}

/// Checks `conj F(−η̄/ζ̄², −1/ζ̄) = (−1)^r ζ^{−2r} F(η, ζ)` at seeded points.
fn reality(curve: &SpectralCurve) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let r = curve.rank as i32;
    let mut worst = 0.0f64;
    for _ in 0..16 {
        let eta = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let zeta = C64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..TAU));
        let lhs = curve.eval(-eta.conj() / (zeta.conj() * zeta.conj()), -1.0 / zeta.conj()).conj();
        let rhs = curve.eval(eta, zeta) * (-1.0f64).powi(r) * zeta.powi(-2 * r);
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm().max(rhs.norm())));
    }
    worst
}

/// The curve of a single Lax matrix.
pub fn curve_of_triple(t: &Triple, zeta_samples: usize) -> Result<SpectralCurve, SpectralError> {
    let r = t[0].rows();
    let needed = 2 * r + 1;
    if zeta_samples < needed {
        return Err(SpectralError::InterpolationIllConditioned { samples: zeta_samples, needed });
    }
    let (coeffs, grading_residual) = band(&interpolate(t, zeta_samples), r);
    let mut c = SpectralCurve { rank: r, coeffs, grading_residual, reality_residual: 0.0, s_variation: 0.0, s_values: vec![] };
    c.reality_residual = reality(&c);
    Ok(c)
}

fn curve_at_points(samples: &[(f64, Triple)], zeta_samples: usize) -> Result<SpectralCurve, SpectralError> {
    let curves: Vec<SpectralCurve> =
        samples.iter().map(|(_, t)| curve_of_triple(t, zeta_samples)).collect::<Result<_, _>>()?;
    let mut out = curves[0].clone();
    for c in &curves[1..] {
        for (ra, rb) in c.coeffs.iter().zip(&out.coeffs) {
            for (a, b) in ra.iter().zip(rb) {
                out.s_variation = out.s_variation.max((a - b).norm());
            }
        }
        out.grading_residual = out.grading_residual.max(c.grading_residual);
        out.reality_residual = out.reality_residual.max(c.reality_residual);
    }
    out.s_values = samples.iter().map(|(s, _)| *s).collect();
    Ok(out)
}

/// The curve of a segment, evaluated at its quarter points.
pub fn curve_of_segment(seg: &Segment, zeta_samples: usize) -> Result<SpectralCurve, SpectralError> {
    let (a, b) = (seg.lo(), seg.hi());
    let pts: Vec<(f64, Triple)> = [0.25, 0.5, 0.75].iter().map(|f| a + f * (b - a)).map(|s| (s, seg.at(s))).collect();
    curve_at_points(&pts, zeta_samples)
}

/// `S₀` from the rank-k pieces (two points on the left piece, one on the
/// right) or `S₁` from the long piece (quarter points).
pub fn spectral_curve(sol: &NahmSolution, which: Which, zeta_samples: usize) -> Result<SpectralCurve, SpectralError> {
    match which {
        Which::S1 => curve_of_segment(&sol.long, zeta_samples),
        Which::S0 => {
            let (l, r) = (&sol.left, &sol.right);
            let pts: Vec<f64> = vec![l.lo() + 0.25 * (l.hi() - l.lo()), l.lo() + 0.75 * (l.hi() - l.lo()), 0.5 * (r.lo() + r.hi())];
            let samples = vec![(pts[0], l.at(pts[0])), (pts[1], l.at(pts[1])), (pts[2], r.at(pts[2]))];
            curve_at_points(&samples, zeta_samples)
        }
    }
}

/// For each of `n` ζ-samples on a circle, the number of η-roots of `S₀`
/// that are also roots of `S₁` (within `tol`, relative).
pub fn common_root_counts(s0: &SpectralCurve, s1: &SpectralCurve, n: usize, tol: f64) -> Vec<usize> {
    (0..n)
        .map(|a| {
            let zeta = C64::from_polar(0.9, TAU * (a as f64 + 0.37) / n as f64);
            let r0 = poly_roots(&s0.eta_poly(zeta), 1e-12);
            let r1 = poly_roots(&s1.eta_poly(zeta), 1e-12);
            r0.iter().filter(|x| r1.iter().any(|y| (*x - y).norm() <= tol * (1.0 + x.norm()))).count()
        })
        .collect()
}
