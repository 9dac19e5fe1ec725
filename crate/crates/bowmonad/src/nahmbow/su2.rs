//! The m-dimensional irreducible representation of su(2).
//!
//! With the flow convention `i T₁′ = [T₂, T₃]` (and cyclic), the pole
//! ansatz `T_i = ρ_i / s` requires `[ρ₂, ρ₃] = −i ρ₁`, i.e. `ρ_i = −J_i` for
//! the usual spin matrices `J_i`.

use crate::numkit::{Matrix, Ring, C64};

pub type Triple = [Matrix<C64>; 3];

/// `(ρ₁, ρ₂, ρ₃)` with Casimir `Σ ρ_i² = ((m² − 1)/4)·I`.
pub fn su2_irrep(m: usize) -> Triple {
    assert!(m >= 1, "su2_irrep needs m >= 1");
    let j = (m as f64 - 1.0) / 2.0;
    // Basis |j, j⟩, |j, j−1⟩, …, |j, −j⟩.
    let mz = |a: usize| j - a as f64;
    let mut jp = Matrix::<C64>::zeros(m, m);
    for a in 1..m {
        let mu = mz(a);
        jp[(a - 1, a)] = C64::new((j * (j + 1.0) - mu * (mu + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let half = C64::new(0.5, 0.0);
    let j1 = (&jp + &jm).scale(&half);
    let j2 = (&jp - &jm).scale(&C64::new(0.0, -0.5));
    let j3 = Matrix::diag(&(0..m).map(|a| C64::new(mz(a), 0.0)).collect::<Vec<_>>());
    [-&j1, -&j2, -&j3]
}

pub fn casimir(t: &Triple) -> Matrix<C64> {
    &(&(&t[0] * &t[0]) + &(&t[1] * &t[1])) + &(&t[2] * &t[2])
}

/// Max deviation from `[ρ_a, ρ_b] = −i ρ_c` over the cyclic triples.
pub fn commutation_residual(t: &Triple) -> f64 {
    let mi = C64::new(0.0, -1.0);
    (0..3)
        .map(|a| {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            (&t[b].commutator(&t[c]) - &t[a].scale(&mi)).max_abs()
        })
        .fold(0.0, f64::max)
}

/// Dimension of the commutant `{X : [X, t_a] = 0 for all a}`.
pub fn commutant_dim(t: &Triple) -> usize {
    let n = t[0].rows();
    // Stack the linear maps X ↦ [t_a, X] acting on vec(X).
    let mut big = Matrix::<C64>::zeros(3 * n * n, n * n);
    for (a, ta) in t.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                let mut e = Matrix::<C64>::zeros(n, n);
                e[(p, q)] = C64::one();
                let c = ta.commutator(&e);
                for r in 0..n {
                    for s in 0..n {
                        big[(a * n * n + r * n + s, p * n + q)] = c[(r, s)];
                    }
                }
            }
        }
    }
    let sv = crate::numkit::linalg::singular_values(&big);
    let smax = sv.first().copied().unwrap_or(0.0).max(1.0);
    n * n - sv.iter().filter(|&&s| s > 1e-8 * smax).count()
}

/// Residual of unitary equivalence with `su2_irrep(m)`: Hermiticity,
/// commutation relations, Casimir, irreducibility and the spectrum of the
/// third component together determine the representation up to unitary
/// change of basis.
pub fn irrep_equivalence_residual(t: &Triple) -> f64 {
    let m = t[0].rows();
    let c = (m * m) as f64 / 4.0 - 0.25;
    let herm = t.iter().map(|x| (x - &x.adjoint()).max_abs()).fold(0.0, f64::max);
    let cas = (&casimir(t) - &Matrix::identity(m).scale(&C64::new(c, 0.0))).max_abs();
    let mut ev: Vec<f64> = crate::numkit::eigen::eigenvalues(&t[2]).iter().map(|z| z.re).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let j = (m as f64 - 1.0) / 2.0;
    let spec = ev.iter().enumerate().map(|(a, x)| (x - (a as f64 - j)).abs()).fold(0.0, f64::max);
    let irred = if commutant_dim(t) == 1 { 0.0 } else { 1.0 };
    herm.max(commutation_residual(t)).max(cas).max(spec).max(irred)
}
