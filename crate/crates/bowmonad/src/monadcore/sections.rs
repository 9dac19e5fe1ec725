//! Sections of the monad cohomology restricted to a line, and splitting
//! types.
//!
//! On a line with parameter `t`, a block twisted by a boundary divisor has
//! sections near `t = 0` with exponents `>= lo` and near `t = ∞` with
//! exponents `<= hi`. A global section of `E = ker β / im α` is a pair
//! `(m0, κ)`: a Laurent vector `m0` valid near 0 with `β m0 = 0`, and a
//! Čech class `κ` of the source whose image `α κ` repairs `m0` near ∞, so
//! that `m0 + α κ` has exponents `<= hi` in each middle block. Sections of
//! the form `(α k, 0)` with `k` global are trivial.

use super::divisor::{BoundaryDivisor, Curve, DivisorClass};
use super::monad::{Block, Chart, MonadError, ParamMonad};
use crate::numkit::linalg::{rank_kernel, ToleranceContext};
use crate::numkit::pencil::quotient_representatives;
use crate::numkit::{Matrix, Scalar};
use std::collections::{BTreeMap, HashMap};

/// A member of one of the three rulings.
#[derive(Clone, Debug, PartialEq)]
pub enum Line<T> {
    /// `B_η = {η = c}`, parameter ξ.
    Eta(T),
    /// `L^ξ_a = {ξ = a}`, parameter ψ (X₀ chart) or η (P¹×P¹ chart).
    Xi(T),
    /// `L^ψ_b = {ψ = b}`, parameter ξ; X₀ chart only.
    Psi(T),
}

impl<T: Scalar> Line<T> {
    pub fn class(&self) -> DivisorClass {
        use DivisorClass as D;
        match self {
            Line::Eta(_) => D::LH,
            Line::Xi(_) => D::LV,
            Line::Psi(_) => D::LH + D::LV - D::E1 - D::E2,
        }
    }

    /// Exponent window `[lo, hi]` of sections of a twist on this line.
    pub fn window(&self, twist: &BoundaryDivisor) -> (i32, i32) {
        let c = |x: Curve| twist.coeff(x) as i32;
        match self {
            Line::Eta(_) => (-c(Curve::C0), c(Curve::CInf)),
            Line::Xi(_) => (0, c(Curve::FPsi)),
            Line::Psi(_) => (0, c(Curve::FXi)),
        }
    }

    /// Substitution `(u, v) -> (a t^p, b t^q)` for the chart variables.
    fn substitution(&self, chart: Chart) -> Result<(T, i32, T, i32), MonadError> {
        let one = T::one();
        match (self, chart) {
            (Line::Eta(c), Chart::P1P1) => Ok((one, 1, c.clone(), 0)),
            (Line::Eta(c), Chart::X0) => {
                if c.is_zero() {
                    return Err(MonadError::BadLine("eta = 0 is reducible on X".into()));
                }
                Ok((one, 1, c.clone(), -1))
            }
            (Line::Xi(a), _) => Ok((a.clone(), 0, one, 1)),
            (Line::Psi(b), Chart::X0) => Ok((one, 1, b.clone(), 0)),
            (Line::Psi(_), Chart::P1P1) => Err(MonadError::BadLine("psi lines live on the X0 chart".into())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SectionSpace<T> {
    pub line: Line<T>,
    pub degree: i32,
    pub dim: usize,
    /// Each basis element gives, per middle coordinate, the Laurent
    /// coefficients of its local representative near `t = 0`.
    pub basis: Vec<Vec<BTreeMap<i32, T>>>,
}

type Laurent<T> = BTreeMap<i32, T>;

fn windows<T: Scalar>(blocks: &[Block], line: &Line<T>, d: i32) -> Result<Vec<(i32, i32)>, MonadError> {
    let mut out = Vec::new();
    for b in blocks {
        let (lo, hi) = line.window(&b.twist);
        let deg = b.twist.class().dot(&line.class()) as i32;
        if hi - lo != deg {
            return Err(MonadError::InternalTwistError(format!(
                "block {} has window [{lo},{hi}] but degree {deg} on the line",
                b.label
            )));
        }
        for _ in 0..b.rank {
            out.push((lo, hi + d));
        }
    }
    Ok(out)
}

fn restrict_all<T: Scalar>(m: &crate::numkit::PolyMatrix<T>, sub: &(T, i32, T, i32)) -> Vec<Vec<Laurent<T>>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].restrict(&sub.0, sub.1, &sub.2, sub.3)).collect())
        .collect()
}

/// `H⁰(E|_line(d))`.
pub fn sections_on_line<T: Scalar>(
    pm: &ParamMonad<T>,
    line: &Line<T>,
    d: i32,
    ctx: &ToleranceContext,
) -> Result<SectionSpace<T>, MonadError> {
    let sub = line.substitution(pm.chart)?;
    let kw = windows(&pm.source, line, d)?;
    let mw = windows(&pm.middle, line, d)?;
    let a = restrict_all(&pm.alpha, &sub);
    let b = restrict_all(&pm.beta, &sub);
    let (n1, n2, n3) = pm.ranks();

    // Unknowns: κ exponents strictly between hi and lo of each source, m0
    // exponents from lo up to `top` in each middle coordinate.
    let mut var: HashMap<(u8, usize, i32), usize> = HashMap::new();
    let mut nvar = 0;
    let mut kappa_exps: Vec<Vec<i32>> = Vec::new();
    for (j, &(lo, hi)) in kw.iter().enumerate() {
        let exps: Vec<i32> = (hi + 1..lo).collect();
        for &e in &exps {
            var.insert((0, j, e), nvar);
            nvar += 1;
        }
        kappa_exps.push(exps);
    }
    let mut top = vec![0i32; n2];
    for i in 0..n2 {
        let (lo, hi) = mw[i];
        let mut t = hi;
        for j in 0..n1 {
            for (&ea, _) in &a[i][j] {
                for &e in &kappa_exps[j] {
                    t = t.max(ea + e);
                }
            }
        }
        top[i] = t;
        for e in lo..=t {
            var.insert((1, i, e), nvar);
            nvar += 1;
        }
    }

    let mut rows: Vec<Vec<(usize, T)>> = Vec::new();
    // β m0 = 0 coefficientwise.
    for r in 0..n3 {
        let mut eqs: BTreeMap<i32, Vec<(usize, T)>> = BTreeMap::new();
        for i in 0..n2 {
            let (lo, _) = mw[i];
            for (&eb, cb) in &b[r][i] {
                for e in lo..=top[i] {
                    eqs.entry(eb + e).or_default().push((var[&(1, i, e)], cb.clone()));
                }
            }
        }
        rows.extend(eqs.into_values());
    }
    // m0 + α κ has no exponents above hi.
    for i in 0..n2 {
        let (lo, hi) = mw[i];
        let mut eqs: BTreeMap<i32, Vec<(usize, T)>> = BTreeMap::new();
        for e in (hi + 1).max(lo)..=top[i] {
            eqs.entry(e).or_default().push((var[&(1, i, e)], T::one()));
        }
        for j in 0..n1 {
            for (&ea, ca) in &a[i][j] {
                for &e in &kappa_exps[j] {
                    if ea + e > hi {
                        eqs.entry(ea + e).or_default().push((var[&(0, j, e)], ca.clone()));
                    }
                }
            }
        }
        rows.extend(eqs.into_values());
    }

    let mut cmat = Matrix::<T>::zeros(rows.len(), nvar);
    for (r, terms) in rows.iter().enumerate() {
        for (c, v) in terms {
            cmat[(r, *c)] = cmat[(r, *c)].clone() + v.clone();
        }
    }
    let solutions = if nvar == 0 {
        Matrix::zeros(0, 0)
    } else if rows.is_empty() {
        Matrix::identity(nvar)
    } else {
        rank_kernel(&cmat, ctx)?.kernel
    };

    // Trivial sections (α k, 0) for global k.
    let mut triv_cols: Vec<Vec<T>> = Vec::new();
    for (j, &(lo, hi)) in kw.iter().enumerate() {
        for e in lo..=hi {
            let mut col = vec![T::zero(); nvar];
            for i in 0..n2 {
                for (&ea, ca) in &a[i][j] {
                    let key = (1, i, ea + e);
                    match var.get(&key) {
                        Some(&c) => col[c] = col[c].clone() + ca.clone(),
                        None => {
                            return Err(MonadError::InternalTwistError(format!(
                                "alpha maps a global source section outside middle window (row {i})"
                            )))
                        }
                    }
                }
            }
            triv_cols.push(col);
        }
    }
    let triv = Matrix::from_fn(nvar, triv_cols.len(), |r, c| triv_cols[c][r].clone());

    let reps = if solutions.cols() == 0 {
        Matrix::zeros(nvar, 0)
    } else if triv.cols() == 0 {
        solutions.clone()
    } else {
        quotient_representatives(&solutions, &triv, ctx)?
    };
    let basis = (0..reps.cols())
        .map(|c| {
            (0..n2)
                .map(|i| {
                    let mut p = Laurent::new();
                    for e in mw[i].0..=top[i] {
                        let x = reps[(var[&(1, i, e)], c)].clone();
                        if !x.is_zero() {
                            p.insert(e, x);
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();
    Ok(SectionSpace { line: line.clone(), degree: d, dim: reps.cols(), basis })
}

/// Dimension only; skips the basis extraction.
pub fn h0_dim<T: Scalar>(pm: &ParamMonad<T>, line: &Line<T>, d: i32, ctx: &ToleranceContext) -> Result<usize, MonadError> {
    Ok(sections_on_line(pm, line, d, ctx)?.dim)
}

/// Splitting type `(a, -a)` of the rank 2, degree 0 restriction.
pub fn splitting_type<T: Scalar>(pm: &ParamMonad<T>, line: &Line<T>, ctx: &ToleranceContext) -> Result<(i32, i32), MonadError> {
    let a = h0_dim(pm, line, -1, ctx)?;
    let h0 = h0_dim(pm, line, 0, ctx)?;
    let ok = if a == 0 { h0 == 2 } else { h0 == a + 1 };
    if !ok {
        return Err(MonadError::InconsistentSplitting { a, h0 });
    }
    Ok((a as i32, -(a as i32)))
}
