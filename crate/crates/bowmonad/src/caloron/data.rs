//! Caloron matrix data, derived blocks and validation.

use crate::numkit::eigen;
use crate::numkit::linalg::{rank, ToleranceContext};
use crate::numkit::pencil::{common_eigenvector_obstruction, pencil_surjectivity_failures, stacked_injective_sampled};
use crate::numkit::scalar::rationalize;
use crate::numkit::{Matrix, Scalar, C64};
use crate::report::ValidationReport;
use serde_json::json;

/// Caloron data with `m > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaloronData<T> {
    pub k: usize,
    pub m: usize,
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    /// `k × 2`, columns `C₁`, `C₂`.
    pub c: Matrix<T>,
    /// Second row of `D`, `1 × k`.
    pub d2row: Matrix<T>,
    pub aprime: Matrix<T>,
    pub bprime: Matrix<T>,
    /// `m × 2`, columns `C′₁`, `C′₂`.
    pub cprime: Matrix<T>,
}

/// Caloron data with `m = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaloronDataM0<T> {
    pub k: usize,
    pub a: Matrix<T>,
    pub b0: Matrix<T>,
    pub c: Matrix<T>,
    pub d: Matrix<T>,
}

/// Row vector `e₊ = (0, …, 0, 1)` of length `m`.
pub fn e_plus<T: Scalar>(m: usize) -> Matrix<T> {
    Matrix::from_fn(1, m, |_, j| if j + 1 == m { T::one() } else { T::zero() })
}

/// Column vector `e₋ᵀ = (1, 0, …, 0)ᵀ` of length `m`.
pub fn e_minus_t<T: Scalar>(m: usize) -> Matrix<T> {
    Matrix::from_fn(m, 1, |i, _| if i == 0 { T::one() } else { T::zero() })
}

/// The `m × m` shift with ones on the subdiagonal.
pub fn zhe<T: Scalar>(m: usize) -> Matrix<T> {
    Matrix::from_fn(m, m, |i, j| if i == j + 1 { T::one() } else { T::zero() })
}

pub(crate) fn col<T: Scalar>(m: &Matrix<T>, j: usize) -> Matrix<T> {
    m.select_cols(&[j])
}

pub(crate) fn row<T: Scalar>(m: &Matrix<T>, i: usize) -> Matrix<T> {
    m.select_rows(&[i])
}

impl<T: Scalar> CaloronData<T> {
    pub fn c1(&self) -> Matrix<T> {
        col(&self.c, 0)
    }
    pub fn c2(&self) -> Matrix<T> {
        col(&self.c, 1)
    }
    pub fn cp1(&self) -> Matrix<T> {
        col(&self.cprime, 0)
    }
    pub fn cp2(&self) -> Matrix<T> {
        col(&self.cprime, 1)
    }
    /// `D₁ = e₊ A′`, the last row of `A′`.
    pub fn d1(&self) -> Matrix<T> {
        row(&self.aprime, self.m - 1)
    }
    /// `D = (D₁; D₂)`, `2 × k`.
    pub fn d(&self) -> Matrix<T> {
        Matrix::vstack(&[&self.d1(), &self.d2row])
    }
    pub fn zhe(&self) -> Matrix<T> {
        zhe(self.m)
    }

    /// `M = [[B, −C₁e₊], [e₋ᵀB′, Ж − C′₁e₊]]`.
    pub fn mmat(&self) -> Matrix<T> {
        let (k, m) = (self.k, self.m);
        let ep = e_plus::<T>(m);
        let mut out = Matrix::zeros(k + m, k + m);
        out.set_block(0, 0, &self.b);
        out.set_block(0, k, &-(&self.c1() * &ep));
        out.set_block(k, 0, &(&e_minus_t::<T>(m) * &self.bprime));
        out.set_block(k, k, &(&self.zhe() - &(&self.cp1() * &ep)));
        out
    }

    /// `(A; A′)`, `(k+m) × k`.
    pub fn a_stack(&self) -> Matrix<T> {
        Matrix::vstack(&[&self.a, &self.aprime])
    }

    /// `v = (C₂; C′₂)`.
    pub fn v(&self) -> Matrix<T> {
        Matrix::vstack(&[&self.c2(), &self.cp2()])
    }

    /// `Ñ = [(A;A′), v, Mv, …, M^{m−1}v]`.
    pub fn ntilde(&self) -> Matrix<T> {
        let mm = self.mmat();
        let mut cols = vec![self.a_stack()];
        let mut w = self.v();
        for _ in 0..self.m {
            cols.push(w.clone());
            w = &mm * &w;
        }
        let refs: Vec<&Matrix<T>> = cols.iter().collect();
        Matrix::hstack(&refs)
    }

    /// `Y₊,₁ = [[A, C₂], [A′, C′₂]]`.
    pub fn y_plus_1(&self) -> Matrix<T> {
        Matrix::hstack(&[&self.a_stack(), &self.v()])
    }

    pub fn relation1(&self) -> Matrix<T> {
        &self.a.commutator(&self.b) + &(&self.c * &self.d())
    }

    pub fn relation2(&self) -> Matrix<T> {
        let t1 = &(&e_minus_t::<T>(self.m) * &self.bprime) * &self.a;
        let t2 = &self.zhe() * &self.aprime;
        let t3 = &self.aprime * &self.b;
        let t4 = &self.cprime * &self.d();
        &(&(&t1 + &t2) - &t3) - &t4
    }

    pub fn relation3(&self) -> Matrix<T> {
        let lhs = -(&e_plus::<T>(self.m) * &self.aprime);
        let first = row(&self.d(), 0);
        &lhs + &first
    }

    pub fn check_shapes(&self) -> Result<(), String> {
        let (k, m) = (self.k, self.m);
        let want = [
            ("A", &self.a, (k, k)),
            ("B", &self.b, (k, k)),
            ("C", &self.c, (k, 2)),
            ("D2row", &self.d2row, (1, k)),
            ("Aprime", &self.aprime, (m, k)),
            ("Bprime", &self.bprime, (1, k)),
            ("Cprime", &self.cprime, (m, 2)),
        ];
        if m == 0 {
            return Err("m must be positive for caloron data; use caloron-m0".into());
        }
        for (name, mat, shape) in want {
            if mat.shape() != shape {
                return Err(format!("{name} has shape {:?}, expected {:?}", mat.shape(), shape));
            }
        }
        Ok(())
    }

    pub fn validate(&self, ctx: &ToleranceContext) -> ValidationReport {
        let mut r = ValidationReport::new();
        if let Err(e) = self.check_shapes() {
            r.push("shapes", false, None, Some(json!(e)));
            return r;
        }
        let scale = self.scale();
        relation_entry(&mut r, "relation1", &self.relation1(), scale, ctx);
        relation_entry(&mut r, "relation2", &self.relation2(), scale, ctx);
        relation_entry(&mut r, "relation3", &self.relation3(), scale, ctx);
        gencon_injective(&mut r, "gencon1", &self.a, &self.b, &self.d(), ctx);
        gencon_surjective(&mut r, "gencon2", &self.a, &self.b, &self.c, ctx);
        let mm = self.mmat();
        gencon_eta_surjective(&mut r, "gencon3", &self.y_plus_1(), &-&mm, &Matrix::identity(self.k + self.m), ctx);
        invertible_entry(&mut r, "gencon4", &self.ntilde(), ctx);
        r
    }

    fn scale(&self) -> f64 {
        [&self.a, &self.b, &self.c, &self.d2row, &self.aprime, &self.bprime, &self.cprime]
            .iter()
            .map(|m| m.max_abs())
            .fold(1.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> CaloronData<U> {
        CaloronData {
            k: self.k,
            m: self.m,
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d2row: f(&self.d2row),
            aprime: f(&self.aprime),
            bprime: f(&self.bprime),
            cprime: f(&self.cprime),
        }
    }

    pub fn to_c64(&self) -> CaloronData<C64> {
        self.map(|m| m.to_c64())
    }
}

impl<T: Scalar> CaloronDataM0<T> {
    pub fn c1(&self) -> Matrix<T> {
        col(&self.c, 0)
    }
    pub fn c2(&self) -> Matrix<T> {
        col(&self.c, 1)
    }
    pub fn d1(&self) -> Matrix<T> {
        row(&self.d, 0)
    }
    pub fn d2(&self) -> Matrix<T> {
        row(&self.d, 1)
    }

    /// `B₁ = B₀ − C₁D₁A⁻¹`, the endomorphism on the second interval. `None`
    /// when `A` is singular.
    pub fn b1(&self) -> Option<Matrix<T>> {
        let ainv = self.a.inverse()?;
        Some(&self.b0 - &(&(&self.c1() * &self.d1()) * &ainv))
    }

    pub fn relation1(&self) -> Matrix<T> {
        &self.a.commutator(&self.b0) + &(&self.c * &self.d)
    }

    pub fn check_shapes(&self) -> Result<(), String> {
        let k = self.k;
        for (name, mat, shape) in
            [("A", &self.a, (k, k)), ("B0", &self.b0, (k, k)), ("C", &self.c, (k, 2)), ("D", &self.d, (2, k))]
        {
            if mat.shape() != shape {
                return Err(format!("{name} has shape {:?}, expected {:?}", mat.shape(), shape));
            }
        }
        Ok(())
    }

    pub fn validate(&self, ctx: &ToleranceContext) -> ValidationReport {
        let mut r = ValidationReport::new();
        if let Err(e) = self.check_shapes() {
            r.push("shapes", false, None, Some(json!(e)));
            return r;
        }
        let scale = [&self.a, &self.b0, &self.c, &self.d].iter().map(|m| m.max_abs()).fold(1.0, f64::max);
        relation_entry(&mut r, "relation1", &self.relation1(), scale, ctx);
        invertible_entry(&mut r, "a_invertible", &self.a, ctx);
        gencon_injective(&mut r, "gencon1", &self.a, &self.b0, &self.d, ctx);
        gencon_surjective(&mut r, "gencon2", &self.a, &self.b0, &self.c, ctx);
        r
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> CaloronDataM0<U> {
        CaloronDataM0 { k: self.k, a: f(&self.a), b0: f(&self.b0), c: f(&self.c), d: f(&self.d) }
    }
}

/// Record a matrix relation: exactly zero for exact backends, small relative
/// to `scale²` otherwise.
pub(crate) fn relation_entry<T: Scalar>(
    r: &mut ValidationReport,
    name: &str,
    res: &Matrix<T>,
    scale: f64,
    ctx: &ToleranceContext,
) {
    let v = res.max_abs();
    let pass = if T::EXACT { res.is_zero() } else { v <= ctx.rank_tol * scale * scale };
    r.push(name, pass, Some(v), None);
}

pub(crate) fn invertible_entry<T: Scalar>(r: &mut ValidationReport, name: &str, m: &Matrix<T>, ctx: &ToleranceContext) {
    let res = rank(m, ctx);
    let pass = m.is_square() && matches!(res, Ok(x) if x == m.rows());
    let cert = match res {
        Ok(x) => json!({ "rank": x, "size": m.rows() }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    r.push(name, pass, None, Some(cert));
}

fn c64_json(z: C64) -> serde_json::Value {
    json!([z.re, z.im])
}

/// Injectivity of `(A − ξ; B − η; D)` for all `(ξ, η)`, decided by the
/// common-eigenvector algorithm and cross-checked by sampling.
pub(crate) fn gencon_injective<T: Scalar>(
    r: &mut ValidationReport,
    name: &str,
    a: &Matrix<T>,
    b: &Matrix<T>,
    d: &Matrix<T>,
    ctx: &ToleranceContext,
) {
    match common_eigenvector_obstruction(a, b, d, ctx) {
        Err(e) => r.push(name, false, None, Some(json!({ "error": e.to_string() }))),
        Ok(obs) => {
            let sampled = stacked_injective_sampled(&a.to_c64(), &b.to_c64(), &d.to_c64(), 200, 7);
            let empty = obs.points.is_empty();
            let pts: Vec<serde_json::Value> = obs
                .points
                .iter()
                .map(|p| {
                    let exact = if T::EXACT { exact_confirm(a, b, d, p.xi, p.eta, ctx) } else { None };
                    json!({
                        "xi": c64_json(p.xi),
                        "eta": c64_json(p.eta),
                        "v": p.v.iter().map(|z| c64_json(*z)).collect::<Vec<_>>(),
                        "exact_confirmed": exact,
                    })
                })
                .collect();
            let mut cert = json!({ "points": pts, "sampling_agrees": empty == sampled });
            if obs.probabilistic_only {
                cert["probabilistic_only"] = json!(true);
            }
            r.push(name, empty && sampled, None, Some(cert));
        }
    }
}

/// Exact rank check of the stacked pencil at a rationalized failure point.
fn exact_confirm<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    d: &Matrix<T>,
    xi: C64,
    eta: C64,
    ctx: &ToleranceContext,
) -> Option<bool> {
    let q = |x: f64| rationalize(x, 1000, 1e-9);
    let (xr, xi_im, er, ei) = (q(xi.re)?, q(xi.im)?, q(eta.re)?, q(eta.im)?);
    let to_t = |re: num_rational::BigRational, im: num_rational::BigRational| -> T {
        let z: crate::numkit::CQ = num_complex::Complex::new(re, im);
        crate::numkit::scalar::convert(&z)
    };
    let x = to_t(xr, xi_im);
    let e = to_t(er, ei);
    let k = a.rows();
    let id = Matrix::<T>::identity(k);
    let p = Matrix::vstack(&[&(a - &id.scale(&x)), &(b - &id.scale(&e)), d]);
    rank(&p, ctx).ok().map(|rk| rk < k)
}

/// Surjectivity of `(η − B, A − ξ, C)`: the transposed data must pass the
/// injectivity test.
pub(crate) fn gencon_surjective<T: Scalar>(
    r: &mut ValidationReport,
    name: &str,
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    ctx: &ToleranceContext,
) {
    gencon_injective(r, name, &a.transpose(), &b.transpose(), &c.transpose(), ctx);
}

/// Surjectivity of `[Y | Z₀ + ηZ₁]` for every η.
pub(crate) fn gencon_eta_surjective<T: Scalar>(
    r: &mut ValidationReport,
    name: &str,
    y: &Matrix<T>,
    z0: &Matrix<T>,
    z1: &Matrix<T>,
    ctx: &ToleranceContext,
) {
    match pencil_surjectivity_failures(y, z0, z1, ctx) {
        Ok(etas) => {
            let cert = json!({ "eta": etas.iter().map(|z| c64_json(*z)).collect::<Vec<_>>() });
            r.push(name, etas.is_empty(), None, Some(cert));
        }
        Err(e) => r.push(name, false, None, Some(json!({ "error": e.to_string() }))),
    }
}

/// Spectrum of `B` as floats, for jumping-line bookkeeping.
pub fn spectrum<T: Scalar>(b: &Matrix<T>) -> Vec<C64> {
    eigen::eigenvalues(&b.to_c64())
}
