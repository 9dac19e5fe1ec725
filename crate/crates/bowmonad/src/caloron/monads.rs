//! Small and big caloron monads on P¹×P¹.

use super::data::{e_minus_t, e_plus, CaloronData, CaloronDataM0};
use crate::monadcore::monad::{eta_minus, mono_id};
use crate::monadcore::{Block, BoundaryDivisor as BD, Chart, ParamMonad};
use crate::numkit::linalg::ToleranceContext;
use crate::numkit::poly::lift;
use crate::numkit::{Matrix, Scalar};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("data failed validation: {0}")]
    BuildRefused(String),
}

fn refuse(report: &crate::report::ValidationReport) -> BuildError {
    let names: Vec<String> = report.failures().iter().map(|e| e.name.clone()).collect();
    BuildError::BuildRefused(names.join(", "))
}

/// `α = (A − ξ; B − η; D)`, `β = (η − B, A − ξ, C)`, so `βα = [A,B] + CD`.
pub fn small_monad_raw<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, d: &Matrix<T>) -> ParamMonad<T> {
    let k = a.rows();
    let mut pm = ParamMonad::new(
        Chart::P1P1,
        vec![Block::new("K", k, BD::o(-1, 0))],
        vec![Block::new("M1", k, BD::o(-1, 1)), Block::new("M2", k, BD::o(0, 0)), Block::new("M3", 2, BD::o(0, 0))],
        vec![Block::new("T", k, BD::o(0, 1))],
    );
    let xi = mono_id::<T>(k, 1, 0);
    let a_xi = &lift(a) - &xi;
    pm.set_alpha(0, 0, &a_xi);
    pm.set_alpha(0, 1, &-&eta_minus(b, Chart::P1P1));
    pm.set_alpha(0, 2, &lift(d));
    pm.set_beta(0, 0, &eta_minus(b, Chart::P1P1));
    pm.set_beta(1, 0, &a_xi);
    pm.set_beta(2, 0, &lift(c));
    pm
}

pub fn small_monad<T: Scalar>(data: &CaloronData<T>, ctx: &ToleranceContext) -> Result<ParamMonad<T>, BuildError> {
    let rep = data.validate(ctx);
    if !rep.all_pass() {
        return Err(refuse(&rep));
    }
    Ok(small_monad_raw(&data.a, &data.b, &data.c, &data.d()))
}

pub fn small_monad_m0<T: Scalar>(data: &CaloronDataM0<T>, ctx: &ToleranceContext) -> Result<ParamMonad<T>, BuildError> {
    let rep = data.validate(ctx);
    if !rep.all_pass() {
        return Err(refuse(&rep));
    }
    Ok(small_monad_raw(&data.a, &data.b0, &data.c, &data.d))
}

fn big_columns(k: usize, m: usize) -> (Vec<Block>, Vec<Block>, Vec<Block>) {
    (
        vec![Block::new("U_P+", k, BD::o(-1, 0)), Block::new("U_P-", k + m, BD::o(-1, 0))],
        vec![
            Block::new("V_P+", k + 1, BD::o(0, 0)),
            Block::new("V_P-", k + m + 1, BD::o(0, 0)),
            Block::new("U_Q0", k, BD::o(-1, 1)),
            Block::new("U_Q1", k + m, BD::o(-1, 0)),
        ],
        vec![Block::new("V_Q0", k, BD::o(0, 1)), Block::new("V_Q1", k + m, BD::o(0, 0))],
    )
}

/// Big monad with the `W, X, Y, Z` blocks, signs chosen so that `βα ≡ 0`.
pub fn big_monad_raw<T: Scalar>(data: &CaloronData<T>) -> ParamMonad<T> {
    let (k, m) = (data.k, data.m);
    let (s, mid, t) = big_columns(k, m);
    let mut pm = ParamMonad::new(Chart::P1P1, s, mid, t);
    let ch = Chart::P1P1;
    let ep = e_plus::<T>(m);
    let emt = e_minus_t::<T>(m);
    let eb = eta_minus(&data.b, ch);
    let zhe = data.zhe();

    // W₊ = (η − B; −D₂)
    let w_plus = Matrix::vstack(&[&eb, &lift(&-&data.d2row)]);
    // W₋ = [[η − B, 0], [−e₋ᵀB′, η − Ж], [0, −e₊]]
    let mut w_minus = Matrix::zeros(k + m + 1, k + m);
    w_minus.set_block(0, 0, &eb);
    w_minus.set_block(k, 0, &lift(&-&(&emt * &data.bprime)));
    w_minus.set_block(k, k, &eta_minus(&zhe, ch));
    w_minus.set_block(k + m, k, &lift(&-&ep));
    pm.set_alpha(0, 0, &w_plus);
    pm.set_alpha(1, 1, &w_minus);
    // X₊,₀ = ξ, X₋,₀ = (I 0), X₊,₁ = (A; A′), X₋,₁ = I
    pm.set_alpha(0, 2, &mono_id(k, 1, 0));
    let x_m0 = Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, m)]);
    pm.set_alpha(1, 2, &lift(&x_m0));
    pm.set_alpha(0, 3, &lift(&data.a_stack()));
    pm.set_alpha(1, 3, &lift(&Matrix::identity(k + m)));

    // Y₊,₀ = (ξ 0), Y₋,₀ = (I 0 0)
    let y_p0 = Matrix::hstack(&[&mono_id::<T>(k, 1, 0), &lift(&Matrix::zeros(k, 1))]);
    pm.set_beta(0, 0, &y_p0);
    let y_m0 = Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, m + 1)]);
    pm.set_beta(1, 0, &lift(&y_m0));
    // Y₊,₁ = [[A, C₂], [A′, C′₂]], Y₋,₁ = [[I, 0, −C₁], [0, I, −C′₁]]
    pm.set_beta(0, 1, &lift(&data.y_plus_1()));
    let c1_stack = Matrix::vstack(&[&data.c1(), &data.cp1()]);
    let y_m1 = Matrix::hstack(&[&Matrix::identity(k + m), &-&c1_stack]);
    pm.set_beta(1, 1, &lift(&y_m1));
    // −Z₀ and −Z₁, with Z₁ = η − M.
    pm.set_beta(2, 0, &-&eb);
    pm.set_beta(3, 1, &-&eta_minus(&data.mmat(), ch));
    pm
}

pub fn big_monad<T: Scalar>(data: &CaloronData<T>, ctx: &ToleranceContext) -> Result<ParamMonad<T>, BuildError> {
    let rep = data.validate(ctx);
    if !rep.all_pass() {
        return Err(refuse(&rep));
    }
    Ok(big_monad_raw(data))
}

/// Big monad for `m = 0`; `U_{P−}` has rank `k` and the jump at `λ₋` is
/// carried by `W₋ = (η − B₀; −D₁A⁻¹)`.
pub fn big_monad_m0_raw<T: Scalar>(data: &CaloronDataM0<T>) -> Option<ParamMonad<T>> {
    let k = data.k;
    let ainv = data.a.inverse()?;
    let b1 = data.b1()?;
    let (s, mid, t) = big_columns(k, 0);
    let mut pm = ParamMonad::new(Chart::P1P1, s, mid, t);
    let ch = Chart::P1P1;
    let eb0 = eta_minus(&data.b0, ch);
    pm.set_alpha(0, 0, &Matrix::vstack(&[&eb0, &lift(&-&data.d2())]));
    pm.set_alpha(1, 1, &Matrix::vstack(&[&eb0, &lift(&-&(&data.d1() * &ainv))]));
    pm.set_alpha(0, 2, &mono_id(k, 1, 0));
    pm.set_alpha(1, 2, &lift(&Matrix::identity(k)));
    pm.set_alpha(0, 3, &lift(&data.a));
    pm.set_alpha(1, 3, &lift(&Matrix::identity(k)));

    pm.set_beta(0, 0, &Matrix::hstack(&[&mono_id::<T>(k, 1, 0), &lift(&Matrix::zeros(k, 1))]));
    pm.set_beta(1, 0, &lift(&Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, 1)])));
    pm.set_beta(0, 1, &lift(&Matrix::hstack(&[&data.a, &data.c2()])));
    pm.set_beta(1, 1, &lift(&Matrix::hstack(&[&Matrix::identity(k), &-&data.c1()])));
    pm.set_beta(2, 0, &-&eb0);
    pm.set_beta(3, 1, &-&eta_minus(&b1, ch));
    Some(pm)
}

pub fn big_monad_m0<T: Scalar>(data: &CaloronDataM0<T>, ctx: &ToleranceContext) -> Result<ParamMonad<T>, BuildError> {
    let rep = data.validate(ctx);
    if !rep.all_pass() {
        return Err(refuse(&rep));
    }
    big_monad_m0_raw(data).ok_or_else(|| BuildError::BuildRefused("A is singular".into()))
}
