//! Block-structured three-term monads over a coordinate chart.

use super::divisor::BoundaryDivisor;
use crate::numkit::linalg::{kernel, NumError, ToleranceContext};
use crate::numkit::pencil::quotient_representatives;
use crate::numkit::poly::{eval_matrix, poly_matrix_max_abs, Poly2, PolyMatrix};
use crate::numkit::{Matrix, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonadError {
    #[error("point does not belong to the monad's chart ({0})")]
    ChartMismatch(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("twist bookkeeping inconsistent: {0}")]
    InternalTwistError(String),
    #[error("restricted bundle is not rank 2 of degree 0: h0(E(-1)) = {a}, h0(E) = {h0}")]
    InconsistentSplitting { a: usize, h0: usize },
    #[error("line not available in this chart: {0}")]
    BadLine(String),
}

/// Coordinate chart of a monad.
///
/// `P1P1` uses polynomial variables `(u, v) = (ξ, η)`. `X0` is the affine
/// chart of the blown-up surface with `(u, v) = (ξ, ψ)` and `η = ξψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    P1P1,
    X0,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChartPoint<T> {
    XiEta { xi: T, eta: T },
    XiPsi { xi: T, psi: T },
}

impl<T: Scalar> ChartPoint<T> {
    pub fn xi_eta(xi: T, eta: T) -> Self {
        ChartPoint::XiEta { xi, eta }
    }
    pub fn xi_psi(xi: T, psi: T) -> Self {
        ChartPoint::XiPsi { xi, psi }
    }
    pub fn xi(&self) -> T {
        match self {
            ChartPoint::XiEta { xi, .. } | ChartPoint::XiPsi { xi, .. } => xi.clone(),
        }
    }
    /// η, derived as ξψ on the X₀ chart.
    pub fn eta(&self) -> T {
        match self {
            ChartPoint::XiEta { eta, .. } => eta.clone(),
            ChartPoint::XiPsi { xi, psi } => xi.clone() * psi.clone(),
        }
    }
}

/// One summand of a column: a vector space of dimension `rank` tensored
/// with a line bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub label: String,
    pub rank: usize,
    pub twist: BoundaryDivisor,
}

impl Block {
    pub fn new(label: &str, rank: usize, twist: BoundaryDivisor) -> Self {
        Block { label: label.to_string(), rank, twist }
    }
}

/// Which monomials occur in a block arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArrowKind {
    Constant,
    Xi,
    Psi,
    Eta,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrow {
    pub map: char,
    pub from: usize,
    pub to: usize,
    pub kind: ArrowKind,
}

#[derive(Clone, Debug)]
pub struct ParamMonad<T> {
    pub chart: Chart,
    pub source: Vec<Block>,
    pub middle: Vec<Block>,
    pub target: Vec<Block>,
    pub alpha: PolyMatrix<T>,
    pub beta: PolyMatrix<T>,
}

fn offsets(blocks: &[Block]) -> Vec<usize> {
    let mut o = vec![0];
    for b in blocks {
        o.push(o.last().unwrap() + b.rank);
    }
    o
}

fn total(blocks: &[Block]) -> usize {
    blocks.iter().map(|b| b.rank).sum()
}

impl<T: Scalar> ParamMonad<T> {
    pub fn new(chart: Chart, source: Vec<Block>, middle: Vec<Block>, target: Vec<Block>) -> Self {
        let (n1, n2, n3) = (total(&source), total(&middle), total(&target));
        ParamMonad {
            chart,
            alpha: Matrix::zeros(n2, n1),
            beta: Matrix::zeros(n3, n2),
            source,
            middle,
            target,
        }
    }

    pub fn ranks(&self) -> (usize, usize, usize) {
        (total(&self.source), total(&self.middle), total(&self.target))
    }

    /// Expected rank of the cohomology bundle.
    pub fn expected_rank(&self) -> isize {
        let (a, b, c) = self.ranks();
        b as isize - a as isize - c as isize
    }

    /// Place `m` as the α-arrow from source block `from` to middle block `to`.
    pub fn set_alpha(&mut self, from: usize, to: usize, m: &PolyMatrix<T>) {
        let (r0, c0) = (offsets(&self.middle)[to], offsets(&self.source)[from]);
        assert_eq!((m.rows(), m.cols()), (self.middle[to].rank, self.source[from].rank), "alpha block shape");
        self.alpha.set_block(r0, c0, m);
    }

    /// Place `m` as the β-arrow from middle block `from` to target block `to`.
    pub fn set_beta(&mut self, from: usize, to: usize, m: &PolyMatrix<T>) {
        let (r0, c0) = (offsets(&self.target)[to], offsets(&self.middle)[from]);
        assert_eq!((m.rows(), m.cols()), (self.target[to].rank, self.middle[from].rank), "beta block shape");
        self.beta.set_block(r0, c0, m);
    }

    pub fn alpha_block(&self, from: usize, to: usize) -> PolyMatrix<T> {
        let (r0, c0) = (offsets(&self.middle)[to], offsets(&self.source)[from]);
        self.alpha.submatrix(r0, c0, self.middle[to].rank, self.source[from].rank)
    }

    pub fn beta_block(&self, from: usize, to: usize) -> PolyMatrix<T> {
        let (r0, c0) = (offsets(&self.target)[to], offsets(&self.middle)[from]);
        self.beta.submatrix(r0, c0, self.target[to].rank, self.middle[from].rank)
    }

    /// Nonzero arrows with the monomial kind of each.
    pub fn arrows(&self) -> Vec<Arrow> {
        let mut out = Vec::new();
        for (map, src, dst) in [('a', &self.source, &self.middle), ('b', &self.middle, &self.target)] {
            for i in 0..src.len() {
                for j in 0..dst.len() {
                    let blk = if map == 'a' { self.alpha_block(i, j) } else { self.beta_block(i, j) };
                    if blk.is_zero() {
                        continue;
                    }
                    out.push(Arrow { map, from: i, to: j, kind: arrow_kind(&blk, self.chart) });
                }
            }
        }
        out
    }

    /// β·α as a polynomial matrix.
    pub fn composite(&self) -> PolyMatrix<T> {
        &self.beta * &self.alpha
    }

    /// True when β·α vanishes identically. Decisive only for exact backends;
    /// float backends compare against `tol` relative to the coefficient size.
    pub fn anticommutes(&self, tol: f64) -> bool {
        let c = self.composite();
        if T::EXACT {
            return c.is_zero();
        }
        let scale = poly_matrix_max_abs(&self.alpha).max(1.0) * poly_matrix_max_abs(&self.beta).max(1.0);
        poly_matrix_max_abs(&c) <= tol * scale
    }

    fn chart_values(&self, p: &ChartPoint<T>) -> Result<(T, T), MonadError> {
        match (self.chart, p) {
            (Chart::P1P1, ChartPoint::XiEta { xi, eta }) => Ok((xi.clone(), eta.clone())),
            (Chart::X0, ChartPoint::XiPsi { xi, psi }) => Ok((xi.clone(), psi.clone())),
            (Chart::P1P1, _) => Err(MonadError::ChartMismatch("P1xP1 chart expects (xi, eta)".into())),
            (Chart::X0, _) => Err(MonadError::ChartMismatch("X0 chart expects (xi, psi); eta is derived".into())),
        }
    }

    pub fn evaluate(&self, p: &ChartPoint<T>) -> Result<MonadAtPoint<T>, MonadError> {
        let (u, v) = self.chart_values(p)?;
        let alpha = eval_matrix(&self.alpha, &u, &v);
        let beta = eval_matrix(&self.beta, &u, &v);
        let ba = &beta * &alpha;
        let denom = (beta.norm_fro() * alpha.norm_fro()).max(f64::MIN_POSITIVE);
        let residual = if ba.is_zero() { 0.0 } else { ba.norm_fro() / denom };
        Ok(MonadAtPoint { alpha, beta, point: p.clone(), residual })
    }
}

fn arrow_kind<T: Scalar>(m: &PolyMatrix<T>, chart: Chart) -> ArrowKind {
    let mut exps = std::collections::BTreeSet::new();
    for p in m.data() {
        for (&e, _) in p.terms() {
            exps.insert(e);
        }
    }
    let nonconst: Vec<(i32, i32)> = exps.iter().copied().filter(|&e| e != (0, 0)).collect();
    match (nonconst.as_slice(), chart) {
        ([], _) => ArrowKind::Constant,
        ([(1, 0)], _) => ArrowKind::Xi,
        ([(0, 1)], Chart::P1P1) => ArrowKind::Eta,
        ([(0, 1)], Chart::X0) => ArrowKind::Psi,
        ([(1, 1)], Chart::X0) => ArrowKind::Eta,
        _ => ArrowKind::Affine,
    }
}

/// A monad instantiated at a point.
#[derive(Clone, Debug)]
pub struct MonadAtPoint<T> {
    pub alpha: Matrix<T>,
    pub beta: Matrix<T>,
    pub point: ChartPoint<T>,
    /// ‖βα‖ / (‖β‖‖α‖).
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct FiberBasis<T> {
    pub dim: usize,
    /// Columns represent a basis of ker β / im α.
    pub basis: Matrix<T>,
}

/// Cohomology ker β / im α at a point.
pub fn fiber<T: Scalar>(m: &MonadAtPoint<T>, ctx: &ToleranceContext) -> Result<FiberBasis<T>, MonadError> {
    let n2 = m.alpha.rows().max(m.beta.cols());
    let ker = if m.beta.rows() == 0 {
        Matrix::identity(n2)
    } else {
        kernel(&m.beta, ctx)?
    };
    let basis = quotient_representatives(&ker, &m.alpha, ctx)?;
    Ok(FiberBasis { dim: basis.cols(), basis })
}

/// Lift a constant matrix scaled by a monomial `c·u^i v^j`.
pub fn mono<T: Scalar>(m: &Matrix<T>, i: i32, j: i32) -> PolyMatrix<T> {
    m.map(|x| Poly2::monomial(x.clone(), i, j))
}

/// `u^i v^j · I_n`.
pub fn mono_id<T: Scalar>(n: usize, i: i32, j: i32) -> PolyMatrix<T> {
    mono(&Matrix::identity(n), i, j)
}

/// `η·I - M` in the given chart.
pub fn eta_minus<T: Scalar>(m: &Matrix<T>, chart: Chart) -> PolyMatrix<T> {
    let n = m.rows();
    let (i, j) = match chart {
        Chart::P1P1 => (0, 1),
        Chart::X0 => (1, 1),
    };
    &mono_id(n, i, j) - &crate::numkit::poly::lift(m)
}
