//! The fused big monad on the chart X₀ and the two pushdown monads.
//!
//! Column layout of the fused monad (rank `n = k + m` on the long
//! interval):
//!
//! | column | blocks |
//! |--------|--------|
//! | source | `U₋ (n, −F)`, `E₁ (k, −F−C₀)`, `E₂ (k, −F−C∞)`, `U₊ (k, −F)` |
//! | middle | `U_Q01 (n, −F)`, `V_P₋ (n+1)`, `U_Q10 (k, −F)`, `G₁ (k, −C∞−F_ξ)`, `G₂ (k, −C₀−F_ψ)`, `U_Q00 (k, −F)`, `V_P₊ (k+1)` |
//! | target | `n`, `k`, `k`, all trivial |
//!
//! The pushdown monads keep the outer blocks and replace `E₁, E₂, G₁, G₂`
//! by a single source and middle block each.

use super::data::{TaubNutData, TaubNutDataM0};
use crate::caloron::data::{e_minus_t, e_plus};
use crate::caloron::BuildError;
use crate::monadcore::monad::{eta_minus, mono, mono_id};
use crate::monadcore::{fiber, Block, BoundaryDivisor as BD, Chart, ChartPoint, Curve, MonadError, ParamMonad};
use crate::numkit::linalg::{rank, ToleranceContext};
use crate::numkit::poly::lift;
use crate::numkit::{Matrix, PolyMatrix, Scalar, C64};

/// Constant matrices of the resolution, independent of chart.
#[derive(Clone, Debug)]
pub struct TnBlocks<T> {
    pub k: usize,
    pub n: usize,
    pub bht: Matrix<T>,
    pub bth: Matrix<T>,
    /// `W₋ = η·w_minus.0 + w_minus.1`.
    pub w_minus: (Matrix<T>, Matrix<T>),
    pub w_plus: (Matrix<T>, Matrix<T>),
    /// `Z₀,₁ = η − z01`.
    pub z01: Matrix<T>,
    pub x_m1: Matrix<T>,
    pub x_m0: Matrix<T>,
    pub y_m1: Matrix<T>,
    pub y_m0: Matrix<T>,
    pub x_p1: Matrix<T>,
    pub y_p1: Matrix<T>,
}

impl<T: Scalar> TnBlocks<T> {
    pub fn from_data(d: &TaubNutData<T>) -> Self {
        let (k, m) = (d.k, d.m);
        let n = k + m;
        let ep = e_plus::<T>(m);
        let mut wm_eta = Matrix::zeros(n + 1, n);
        wm_eta.set_block(0, 0, &Matrix::identity(n));
        let mut wm_c = Matrix::zeros(n + 1, n);
        wm_c.set_block(0, 0, &-&d.b1());
        wm_c.set_block(k, 0, &-&(&e_minus_t::<T>(m) * &d.bprime));
        wm_c.set_block(k, k, &-&crate::caloron::data::zhe::<T>(m));
        wm_c.set_block(n, k, &-&ep);
        let c1_stack = Matrix::vstack(&[&d.c1(), &d.cprime.select_cols(&[0])]);
        let cal = d.caloron_shape();
        Self {
            k,
            n,
            bht: d.bht.clone(),
            bth: d.bth.clone(),
            w_minus: (wm_eta, wm_c),
            w_plus: plus_pair(&d.b0(), &d.d2row),
            z01: d.mmat(),
            x_m1: Matrix::identity(n),
            x_m0: Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, m)]),
            y_m1: Matrix::hstack(&[&Matrix::identity(n), &-&c1_stack]),
            y_m0: Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, m + 1)]),
            x_p1: cal.a_stack(),
            y_p1: cal.y_plus_1(),
        }
    }

    /// `None` when `A` is singular.
    pub fn from_data_m0(d: &TaubNutDataM0<T>) -> Option<Self> {
        let k = d.k;
        let ainv = d.a.inverse()?;
        let eta_part = Matrix::vstack(&[&Matrix::identity(k), &Matrix::zeros(1, k)]);
        let wm_c = Matrix::vstack(&[&-&d.b1(), &-&(&d.d1() * &ainv)]);
        Some(Self {
            k,
            n: k,
            bht: d.bht.clone(),
            bth: d.bth.clone(),
            w_minus: (eta_part, wm_c),
            w_plus: plus_pair(&d.b0(), &d.d2()),
            z01: d.b_mid()?,
            x_m1: Matrix::identity(k),
            x_m0: Matrix::identity(k),
            y_m1: Matrix::hstack(&[&Matrix::identity(k), &-&d.c1()]),
            y_m0: Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, 1)]),
            x_p1: d.a.clone(),
            y_p1: Matrix::hstack(&[&d.a, &d.c2()]),
        })
    }

    pub fn b0(&self) -> Matrix<T> {
        &self.bht * &self.bth
    }
    pub fn b1(&self) -> Matrix<T> {
        &self.bth * &self.bht
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> TnBlocks<U> {
        TnBlocks {
            k: self.k,
            n: self.n,
            bht: f(&self.bht),
            bth: f(&self.bth),
            w_minus: (f(&self.w_minus.0), f(&self.w_minus.1)),
            w_plus: (f(&self.w_plus.0), f(&self.w_plus.1)),
            z01: f(&self.z01),
            x_m1: f(&self.x_m1),
            x_m0: f(&self.x_m0),
            y_m1: f(&self.y_m1),
            y_m0: f(&self.y_m0),
            x_p1: f(&self.x_p1),
            y_p1: f(&self.y_p1),
        }
    }

    pub fn to_c64(&self) -> TnBlocks<C64> {
        self.map(|m| m.to_c64())
    }
}

/// `W₊ = (η − B₀; −D₂)` as an (η-coefficient, constant) pair.
fn plus_pair<T: Scalar>(b0: &Matrix<T>, d2: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let k = b0.rows();
    (
        Matrix::vstack(&[&Matrix::identity(k), &Matrix::zeros(1, k)]),
        Matrix::vstack(&[&-b0, &-d2]),
    )
}

fn eta_exps(chart: Chart) -> (i32, i32) {
    match chart {
        Chart::P1P1 => (0, 1),
        Chart::X0 => (1, 1),
    }
}

fn eta_affine<T: Scalar>(pair: &(Matrix<T>, Matrix<T>), chart: Chart) -> PolyMatrix<T> {
    let (i, j) = eta_exps(chart);
    &mono(&pair.0, i, j) + &lift(&pair.1)
}

fn curve(c: Curve) -> BD {
    BD::curve(c)
}

fn minus_f() -> BD {
    -BD::f()
}

/// The η-dependent blocks shared by all three monads.
struct Outer<T> {
    w_minus: PolyMatrix<T>,
    w_plus: PolyMatrix<T>,
    z01: PolyMatrix<T>,
    z10: PolyMatrix<T>,
    z00: PolyMatrix<T>,
}

fn outer<T: Scalar>(b: &TnBlocks<T>, chart: Chart) -> Outer<T> {
    Outer {
        w_minus: eta_affine(&b.w_minus, chart),
        w_plus: eta_affine(&b.w_plus, chart),
        z01: eta_minus(&b.z01, chart),
        z10: eta_minus(&b.b1(), chart),
        z00: eta_minus(&b.b0(), chart),
    }
}

/// Place the outer maps. `src` gives the source indices of `(U₋, U₊)`,
/// `mid` the middle indices of `(U_Q01, V_P₋, U_Q10, U_Q00, V_P₊)`.
fn place_outer<T: Scalar>(pm: &mut ParamMonad<T>, b: &TnBlocks<T>, o: &Outer<T>, src: (usize, usize), mid: [usize; 5]) {
    let (um, up) = src;
    let [q01, pm_, q10, q00, pp] = mid;
    pm.set_alpha(um, q01, &lift(&-&b.x_m1));
    pm.set_alpha(um, pm_, &o.w_minus);
    pm.set_alpha(um, q10, &lift(&-&b.x_m0));
    pm.set_alpha(up, q01, &lift(&-&b.x_p1));
    pm.set_alpha(up, pp, &o.w_plus);
    pm.set_alpha(up, q00, &lift(&-&Matrix::identity(b.k)));

    pm.set_beta(q01, 0, &o.z01);
    pm.set_beta(pm_, 0, &lift(&b.y_m1));
    pm.set_beta(pm_, 1, &lift(&b.y_m0));
    pm.set_beta(q10, 1, &o.z10);
    pm.set_beta(q00, 2, &o.z00);
    let k = b.k;
    pm.set_beta(pp, 2, &lift(&Matrix::hstack(&[&Matrix::identity(k), &Matrix::zeros(k, 1)])));
    pm.set_beta(pp, 0, &lift(&b.y_p1));
}

fn targets(b: &TnBlocks<impl Scalar>) -> Vec<Block> {
    vec![Block::new("T01", b.n, BD::o(0, 0)), Block::new("T10", b.k, BD::o(0, 0)), Block::new("T00", b.k, BD::o(0, 0))]
}

/// The fused big monad on X₀ with coordinates `(ξ, ψ)`.
pub fn fused_monad<T: Scalar>(b: &TnBlocks<T>) -> ParamMonad<T> {
    let (k, n) = (b.k, b.n);
    let src = vec![
        Block::new("U-", n, minus_f()),
        Block::new("E1", k, minus_f() - curve(Curve::C0)),
        Block::new("E2", k, minus_f() - curve(Curve::CInf)),
        Block::new("U+", k, minus_f()),
    ];
    let mid = vec![
        Block::new("U_Q01", n, minus_f()),
        Block::new("V_P-", n + 1, BD::o(0, 0)),
        Block::new("U_Q10", k, minus_f()),
        Block::new("G1", k, -curve(Curve::CInf) - curve(Curve::FXi)),
        Block::new("G2", k, -curve(Curve::C0) - curve(Curve::FPsi)),
        Block::new("U_Q00", k, minus_f()),
        Block::new("V_P+", k + 1, BD::o(0, 0)),
    ];
    let mut pm = ParamMonad::new(Chart::X0, src, mid, targets(b));
    let o = outer(b, Chart::X0);
    place_outer(&mut pm, b, &o, (0, 3), [0, 1, 2, 5, 6]);
    let id = Matrix::<T>::identity(k);
    let xi = mono_id::<T>(k, 1, 0);
    let psi = mono_id::<T>(k, 0, 1);
    // E₁ → U_Q10, G₁, G₂
    pm.set_alpha(1, 2, &lift(&-&id));
    pm.set_alpha(1, 3, &psi);
    pm.set_alpha(1, 4, &lift(&-&b.bht));
    // E₂ → U_Q00, G₁, G₂
    pm.set_alpha(2, 5, &lift(&-&id));
    pm.set_alpha(2, 3, &lift(&-&b.bth));
    pm.set_alpha(2, 4, &xi);
    // G₁ → (ξ, B_ht), G₂ → (B_th, ψ)
    pm.set_beta(3, 1, &xi);
    pm.set_beta(3, 2, &lift(&b.bht));
    pm.set_beta(4, 1, &lift(&b.bth));
    pm.set_beta(4, 2, &psi);
    pm
}

/// Monad of the pushdown along `(η, ξ, ψ) ↦ (η, ξ)`, on the P¹×P¹ chart
/// with variables `(ξ, η)`.
pub fn pushdown_xi_monad<T: Scalar>(b: &TnBlocks<T>) -> ParamMonad<T> {
    let (k, n) = (b.k, b.n);
    let mut pm = ParamMonad::new(Chart::P1P1, pushdown_sources(n, k, "E"), pushdown_middle(n, k, "G"), targets(b));
    let o = outer(b, Chart::P1P1);
    place_outer(&mut pm, b, &o, (0, 2), [0, 1, 2, 4, 5]);
    let xi = mono_id::<T>(k, 1, 0);
    pm.set_alpha(1, 2, &-&xi);
    pm.set_alpha(1, 3, &o.z10);
    pm.set_alpha(1, 4, &lift(&-&b.bht));
    pm.set_beta(3, 1, &xi);
    pm.set_beta(3, 2, &lift(&b.bht));
    pm
}

/// Monad of the pushdown along `(η, ξ, ψ) ↦ (η, ψ)`. It lives on a second
/// copy of P¹×P¹ whose first chart variable is ψ; evaluate it at
/// `ChartPoint::xi_eta(ψ, η)`.
pub fn pushdown_psi_monad<T: Scalar>(b: &TnBlocks<T>) -> ParamMonad<T> {
    let (k, n) = (b.k, b.n);
    let mut pm = ParamMonad::new(Chart::P1P1, pushdown_sources(n, k, "E'"), pushdown_middle(n, k, "G'"), targets(b));
    let o = outer(b, Chart::P1P1);
    place_outer(&mut pm, b, &o, (0, 2), [0, 1, 2, 4, 5]);
    let psi = mono_id::<T>(k, 1, 0);
    pm.set_alpha(1, 2, &lift(&-&b.bth));
    pm.set_alpha(1, 3, &o.z00);
    pm.set_alpha(1, 4, &-&psi);
    pm.set_beta(3, 1, &lift(&b.bth));
    pm.set_beta(3, 2, &psi);
    pm
}

fn pushdown_sources(n: usize, k: usize, e: &str) -> Vec<Block> {
    vec![Block::new("U-", n, minus_f()), Block::new(e, k, minus_f() - curve(Curve::CInf) - curve(Curve::FXi)), Block::new("U+", k, minus_f())]
}

fn pushdown_middle(n: usize, k: usize, g: &str) -> Vec<Block> {
    vec![
        Block::new("U_Q01", n, minus_f()),
        Block::new("V_P-", n + 1, BD::o(0, 0)),
        Block::new("U_Q10", k, minus_f()),
        Block::new(g, k, -curve(Curve::CInf) - curve(Curve::FXi)),
        Block::new("U_Q00", k, minus_f()),
        Block::new("V_P+", k + 1, BD::o(0, 0)),
    ]
}

/// Inclusion of the middle column of the ψ-pushdown monad into that of
/// the fused monad: the identity on shared blocks, `G′ ↦ G₂`.
pub fn psi_inclusion<T: Scalar>(b: &TnBlocks<T>) -> Matrix<T> {
    let (k, n) = (b.k, b.n);
    let small = n + (n + 1) + k + k + k + (k + 1);
    let big = small + k;
    let mut out = Matrix::zeros(big, small);
    let head = n + (n + 1) + k;
    for i in 0..head {
        out[(i, i)] = T::one();
    }
    // G′ → G₂ skips G₁.
    for i in 0..k {
        out[(head + k + i, head + i)] = T::one();
    }
    for i in head + k..small {
        out[(i + k, i)] = T::one();
    }
    out
}

/// Rank of the map induced on fibers by [`psi_inclusion`] at `(ξ, ψ)`,
/// which should be 2 whenever `ψ ≠ 0`.
pub fn compare_pushdown_psi<T: Scalar>(b: &TnBlocks<T>, xi: T, psi: T, ctx: &ToleranceContext) -> Result<usize, MonadError> {
    let eta = xi.clone() * psi.clone();
    let push = pushdown_psi_monad(b).evaluate(&ChartPoint::xi_eta(psi.clone(), eta))?;
    let fused = fused_monad(b).evaluate(&ChartPoint::xi_psi(xi, psi))?;
    let reps = fiber(&push, ctx)?.basis;
    let image = &psi_inclusion(b) * &reps;
    let ra = rank(&fused.alpha, ctx)?;
    let both = Matrix::hstack(&[&fused.alpha, &image]);
    Ok(rank(&both, ctx)? - ra)
}

pub fn big_monad_raw<T: Scalar>(d: &TaubNutData<T>) -> ParamMonad<T> {
    fused_monad(&TnBlocks::from_data(d))
}

pub fn big_monad_m0_raw<T: Scalar>(d: &TaubNutDataM0<T>) -> Option<ParamMonad<T>> {
    TnBlocks::from_data_m0(d).map(|b| fused_monad(&b))
}

fn refuse(report: &crate::report::ValidationReport) -> BuildError {
    let names: Vec<String> = report.failures().iter().map(|e| e.name.clone()).collect();
    BuildError::BuildRefused(names.join(", "))
}

pub fn big_monad<T: Scalar>(d: &TaubNutData<T>, ctx: &ToleranceContext) -> Result<ParamMonad<T>, BuildError> {
    let rep = d.validate(ctx);
    if !rep.all_pass() {
        return Err(refuse(&rep));
    }
    Ok(big_monad_raw(d))
}

pub fn big_monad_m0<T: Scalar>(d: &TaubNutDataM0<T>, ctx: &ToleranceContext) -> Result<ParamMonad<T>, BuildError> {
    let rep = d.validate(ctx);
    if !rep.all_pass() {
        return Err(refuse(&rep));
    }
    big_monad_m0_raw(d).ok_or_else(|| BuildError::BuildRefused("A is singular".into()))
}
