//! Candidate jumping lines `{η = c}` and the η = 0 heuristic.

use super::data::{TaubNutData, TaubNutDataM0};
use crate::numkit::eigen::eigenvalues;
use crate::numkit::linalg::{rank, ToleranceContext};
use crate::numkit::{Matrix, Scalar, C64};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct JumpingLines {
    /// Eigenvalues of `B₀` with multiplicity.
    pub b0_spectrum: Vec<C64>,
    /// Roots of `det Z₀,₁(η)`, i.e. eigenvalues of the long-interval matrix.
    pub z01_roots: Vec<C64>,
    /// `det(η − B₀) = det(η − B₁)` coefficientwise (exactly on the exact
    /// backend).
    pub charpoly_match: bool,
}

fn charpolys_agree<T: Scalar>(b0: &Matrix<T>, b1: &Matrix<T>) -> bool {
    let p0 = b0.char_poly();
    let p1 = b1.char_poly();
    let scale = b0.max_abs().max(b1.max_abs()).max(1.0).powi(b0.rows() as i32);
    p0.iter().zip(&p1).all(|(x, y)| {
        let d = (x.clone() - y.clone()).abs();
        if T::EXACT {
            d == 0.0
        } else {
            d <= 1e-10 * scale
        }
    })
}

pub fn jumping_lines<T: Scalar>(d: &TaubNutData<T>) -> JumpingLines {
    let (b0, b1) = (d.b0(), d.b1());
    JumpingLines {
        b0_spectrum: eigenvalues(&b0.to_c64()),
        z01_roots: eigenvalues(&d.mmat().to_c64()),
        charpoly_match: charpolys_agree(&b0, &b1),
    }
}

pub fn jumping_lines_m0<T: Scalar>(d: &TaubNutDataM0<T>) -> JumpingLines {
    let (b0, b1) = (d.b0(), d.b1());
    JumpingLines {
        b0_spectrum: eigenvalues(&b0.to_c64()),
        z01_roots: d.b_mid().map(|m| eigenvalues(&m.to_c64())).unwrap_or_default(),
        charpoly_match: charpolys_agree(&b0, &b1),
    }
}

/// Over η = 0 the jumping lines split between the two components `D_ξ`
/// and `D_ψ`. No finite criterion is known; this reports the kernel
/// dimensions of `B_ht` and `B_th` as a heuristic indicator of which
/// component carries the jumping.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EtaZeroSplit {
    pub ker_bht: usize,
    pub ker_bth: usize,
}

pub fn eta_zero_split<T: Scalar>(bht: &Matrix<T>, bth: &Matrix<T>, ctx: &ToleranceContext) -> Option<EtaZeroSplit> {
    let k = bht.rows();
    Some(EtaZeroSplit { ker_bht: k - rank(bht, ctx).ok()?, ker_bth: k - rank(bth, ctx).ok()? })
}
