//! Library-level implementations of the command-line operations. Each
//! function takes parsed inputs and returns rows or reports; the binary
//! only handles arguments, files and exit codes.

use crate::caloron::data::spectrum;
use crate::caloron::generate::{generate_caloron, generate_caloron_m0};
use crate::caloron::{from_nahm_complex, from_nahm_complex_m0, to_nahm_complex, to_nahm_complex_m0};
use crate::diraclattice::{assemble, kernel, kernel_angle, min_eig_from, reality_residual, DiracLattice, Kernel};
use crate::io::{DataFile, JsonScalar, MatrixData};
use crate::monadcore::{fiber, splitting_type, ChartPoint, Line, ParamMonad};
use crate::nahmbow::flow::{default_zetas, fingerprint};
use crate::nahmbow::solution::conjugate;
use crate::nahmbow::spectral::common_root_counts;
use crate::nahmbow::*;
use crate::numkit::linalg::ToleranceContext;
use crate::numkit::scalar::rationalize;
use crate::numkit::{Matrix, Scalar, C64, CQ};
use crate::report::ValidationReport;
use crate::taubnut::generate::{generate_taubnut, generate_taubnut_m0};
use crate::taubnut::{from_bow_complex, from_bow_complex_m0, jumping_lines, jumping_lines_m0, to_bow_complex, to_bow_complex_m0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Failed(String),
}

fn failed(e: impl std::fmt::Display) -> CommandError {
    CommandError::Failed(e.to_string())
}

// ---------------------------------------------------------------- validate

pub fn validate(file: &DataFile, ctx: &ToleranceContext) -> ValidationReport {
    match file {
        DataFile::Exact(d) => validate_matrices(d, ctx),
        DataFile::Float(d) => validate_matrices(d, ctx),
        DataFile::BowRep(rep) => {
            let mut r = ValidationReport::new();
            let res = rep.check();
            r.push("rep", res.is_ok(), None, res.err().map(|e| json!(e.to_string())));
            r
        }
        DataFile::Nahm(sol) => check_boundary(sol),
    }
}

fn validate_matrices<T: JsonScalar>(d: &MatrixData<T>, ctx: &ToleranceContext) -> ValidationReport {
    match d {
        MatrixData::Caloron(x) => x.validate(ctx),
        MatrixData::CaloronM0(x) => x.validate(ctx),
        MatrixData::TaubNut(x) => x.validate(ctx),
        MatrixData::TaubNutM0(x) => x.validate(ctx),
    }
}

// ------------------------------------------------------------------ fiber

#[derive(Clone, Debug, Serialize)]
pub struct FiberRow {
    pub index: usize,
    /// `generic`, `jumping` (exactly on a jumping line) or `jumping-approx`
    /// (exact backend, irrational eigenvalue rounded to its binary value).
    pub line: &'static str,
    pub u: C64,
    pub v: C64,
    pub dim: Option<usize>,
    pub error: Option<String>,
}

/// The big monad of matrix data, with the chart-variable names and the
/// matrix whose spectrum locates the jumping lines.
fn big_monad_of<T: JsonScalar>(d: &MatrixData<T>) -> Result<(ParamMonad<T>, Matrix<T>), CommandError> {
    use crate::caloron::monads as cm;
    use crate::taubnut::monads as tm;
    let none = || failed("A is singular; the m = 0 monad needs A invertible");
    Ok(match d {
        MatrixData::Caloron(x) => (cm::big_monad_raw(x), x.b.clone()),
        MatrixData::CaloronM0(x) => (cm::big_monad_m0_raw(x).ok_or_else(none)?, x.b0.clone()),
        MatrixData::TaubNut(x) => (tm::big_monad_raw(x), x.b0()),
        MatrixData::TaubNutM0(x) => (tm::big_monad_m0_raw(x).ok_or_else(none)?, x.b0()),
    })
}

fn is_taubnut<T: JsonScalar>(d: &MatrixData<T>) -> bool {
    matches!(d, MatrixData::TaubNut(_) | MatrixData::TaubNutM0(_))
}

fn grid_scalar<T: Scalar>(rng: &mut ChaCha8Rng) -> T {
    loop {
        let (a, b) = (rng.random_range(-32..=32), rng.random_range(-32..=32));
        if a != 0 || b != 0 {
            return T::from_parts(T::from_ratio(a, 16), T::from_ratio(b, 16));
        }
    }
}

/// Exact lift of a float eigenvalue of `b`: `(value, on_line)`.
fn lift_eigenvalue<T: Scalar>(ev: C64, b: &Matrix<T>) -> (T, bool) {
    if !T::EXACT {
        return (T::from_c64(ev), true);
    }
    if let (Some(re), Some(im)) = (rationalize(ev.re, 1000, 1e-12), rationalize(ev.im, 1000, 1e-12)) {
        let q = CQ::new(re, im);
        let t: T = crate::numkit::scalar::convert(&q);
        let shifted = &Matrix::identity(b.rows()).scale(&t) - b;
        if shifted.det().is_zero() {
            return (t, true);
        }
    }
    (T::from_c64(ev), false)
}

/// Fiber dimensions at `n` seeded grid points plus one point on each
/// candidate jumping line.
pub fn fiber_sweep<T: JsonScalar + Send + Sync>(
    d: &MatrixData<T>,
    n: usize,
    seed: u64,
    ctx: &ToleranceContext,
) -> Result<Vec<FiberRow>, CommandError> {
    let (pm, b) = big_monad_of(d)?;
    let tn = is_taubnut(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<(&'static str, T, T)> = (0..n).map(|_| ("generic", grid_scalar(&mut rng), grid_scalar(&mut rng))).collect();
    for ev in spectrum(&b) {
        let (eta, exact) = lift_eigenvalue(ev, &b);
        let xi: T = grid_scalar(&mut rng);
        let second = if tn { eta / xi.clone() } else { eta };
        pts.push((if exact { "jumping" } else { "jumping-approx" }, xi, second));
    }
    Ok(pts
        .par_iter()
        .enumerate()
        .map(|(index, (line, u, v))| {
            let p = if tn { ChartPoint::xi_psi(u.clone(), v.clone()) } else { ChartPoint::xi_eta(u.clone(), v.clone()) };
            let res = pm.evaluate(&p).map_err(|e| e.to_string()).and_then(|ev| fiber(&ev, ctx).map_err(|e| e.to_string()));
            FiberRow {
                index,
                line,
                u: u.to_c64(),
                v: v.to_c64(),
                dim: res.as_ref().ok().map(|f| f.dim),
                error: res.err(),
            }
        })
        .collect())
}

// -------------------------------------------------------------- splitting

#[derive(Clone, Debug, Serialize)]
pub struct SplittingRow {
    pub index: usize,
    pub eta: C64,
    pub on_spectrum: bool,
    pub splitting: Option<(i32, i32)>,
    /// `(1, −1)` on simple eigenvalues, `(0, 0)` off the spectrum.
    pub expected: Option<(i32, i32)>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingScan {
    pub rows: Vec<SplittingRow>,
    /// `det(η − B₀) = det(η − B₁)` coefficientwise (Taub-NUT kinds).
    pub charpoly_match: Option<bool>,
}

/// Splitting types on the lines `{η = c}` through every eigenvalue of the
/// relevant `B` and at `off` seeded off-spectrum values. Line computations
/// run on the float backend.
pub fn splitting_scan<T: JsonScalar + Send + Sync>(
    d: &MatrixData<T>,
    off: usize,
    seed: u64,
    ctx: &ToleranceContext,
) -> Result<SplittingScan, CommandError> {
    let df: MatrixData<C64> = d.map(|m| m.to_c64());
    let (pm, b) = big_monad_of(&df)?;
    let spec = spectrum(&b);
    let mut lines: Vec<(C64, bool, Option<(i32, i32)>)> = Vec::new();
    for (i, &ev) in spec.iter().enumerate() {
        let simple = spec.iter().enumerate().all(|(j, &o)| j == i || (o - ev).norm() > 1e-6 * (1.0 + ev.norm()));
        lines.push((ev, true, simple.then_some((1, -1))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while lines.len() < spec.len() + off {
        let eta = C64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        if spec.iter().all(|&ev| (ev - eta).norm() > 0.1) {
            lines.push((eta, false, Some((0, 0))));
        }
    }
    let rows = lines
        .par_iter()
        .enumerate()
        .map(|(index, &(eta, on_spectrum, expected))| {
            let st = splitting_type(&pm, &Line::Eta(eta), ctx).map_err(|e| e.to_string());
            SplittingRow { index, eta, on_spectrum, splitting: st.as_ref().ok().copied(), expected, error: st.err() }
        })
        .collect();
    let charpoly_match = match d {
        MatrixData::TaubNut(x) => Some(jumping_lines(x).charpoly_match),
        MatrixData::TaubNutM0(x) => Some(jumping_lines_m0(x).charpoly_match),
        _ => None,
    };
    Ok(SplittingScan { rows, charpoly_match })
}

// --------------------------------------------------------------- spectral

#[derive(Clone, Debug, Serialize)]
pub struct SpectralOutput {
    pub s0: SpectralCurve,
    pub s1: SpectralCurve,
    pub common_roots: Vec<usize>,
    pub report: ValidationReport,
}

pub fn spectral(sol: &NahmSolution, zeta_samples: Option<usize>) -> Result<SpectralOutput, CommandError> {
    let r = sol.rep.k + sol.rep.m;
    let n = zeta_samples.unwrap_or(4 * r + 4);
    let s0 = spectral_curve(sol, Which::S0, n).map_err(failed)?;
    let s1 = spectral_curve(sol, Which::S1, n).map_err(failed)?;
    let common_roots = common_root_counts(&s0, &s1, 8, 1e-6);
    let mut report = ValidationReport::new();
    for (name, c) in [("S0", &s0), ("S1", &s1)] {
        report.residual(&format!("{name}_grading"), c.grading_residual, 1e-10);
        report.residual(&format!("{name}_reality"), c.reality_residual, 1e-8);
        report.residual(&format!("{name}_s_variation"), c.s_variation, 1e-6);
    }
    Ok(SpectralOutput { s0, s1, common_roots, report })
}

// -------------------------------------------------------------- nahm-flow

#[derive(Clone, Debug, Serialize)]
pub struct FlowRow {
    pub piece: &'static str,
    pub s: f64,
    /// Largest change of the characteristic-polynomial fingerprint.
    pub drift: f64,
    pub hermiticity: f64,
    /// Distance from the stored solution interpolated at `s`.
    pub deviation: f64,
}

/// Re-integrate each piece of a stored solution from its first sample.
pub fn nahm_flow(sol: &NahmSolution, step: f64) -> Result<(Vec<FlowRow>, ValidationReport), CommandError> {
    let zetas = default_zetas();
    let mut rows = Vec::new();
    let mut report = ValidationReport::new();
    let poles: Vec<f64> = sol.poles.iter().map(|p| p.at).collect();
    for (name, seg) in [("left", &sol.left), ("long", &sol.long), ("right", &sol.right)] {
        if seg.s.len() < 2 {
            continue;
        }
        let mut opts = FlowOptions::new(step);
        opts.eps = sol.rep.eps();
        opts.singular_points = poles.iter().copied().filter(|&p| p < seg.lo() - opts.eps || p > seg.hi() + opts.eps).collect();
        let out = flow(&seg.t[0], seg.lo(), seg.hi(), &opts).map_err(failed)?;
        let base = fingerprint(&seg.t[0], &zetas);
        let mut worst = (0.0f64, 0.0f64, 0.0f64);
        for (s, t) in out.s.iter().zip(&out.t) {
            let fp = fingerprint(t, &zetas);
            let drift = fp.iter().zip(&base).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let herm = t.iter().map(|m| (m - &m.adjoint()).max_abs()).fold(0.0, f64::max);
            let stored = seg.at(*s);
            let dev = (0..3).map(|a| (&t[a] - &stored[a]).max_abs()).fold(0.0, f64::max);
            worst = (worst.0.max(drift), worst.1.max(herm), worst.2.max(dev));
            rows.push(FlowRow { piece: name, s: *s, drift, hermiticity: herm, deviation: dev });
        }
        let scale = seg.t.iter().flatten().map(|m| m.max_abs()).fold(1.0, f64::max);
        report.residual(&format!("{name}_drift"), worst.0 / scale, 1e-8);
        report.residual(&format!("{name}_hermiticity"), worst.1 / scale, 1e-10);
        report.push(&format!("{name}_deviation"), true, Some(worst.2 / scale), None);
    }
    Ok((rows, report))
}

// ------------------------------------------------------------------ dirac

#[derive(Clone, Debug, Serialize)]
pub struct DiracRow {
    pub index: usize,
    pub xi: C64,
    pub psi: C64,
    pub grid: usize,
    pub dim: Option<usize>,
    pub gap: Option<f64>,
    pub min_eig: Option<f64>,
    pub reality: Option<f64>,
    pub closure: Option<f64>,
    /// Largest principal angle to the kernel at the finest grid of the
    /// refinement (W and edge slots).
    pub angle: Option<f64>,
    pub reduction_dim: Option<usize>,
    pub monad_dim: Option<usize>,
    pub error: Option<String>,
    #[serde(skip)]
    pub singular_values: Vec<f64>,
}

pub struct DiracOptions {
    pub grid: usize,
    pub points: usize,
    pub seed: u64,
    /// Grids `grid, 2·grid, …` per point.
    pub levels: usize,
}

pub fn dirac_points(n: usize, seed: u64) -> Vec<(C64, C64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = || C64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
    (0..n).map(|_| (z(), z())).collect()
}

/// Kernel, positivity and reality of the lattice operator at seeded
/// points, with an optional matched monad for comparison.
pub fn dirac_sweep(
    sol: &NahmSolution,
    monad: Option<&ParamMonad<C64>>,
    opts: &DiracOptions,
    ctx: &ToleranceContext,
) -> Vec<DiracRow> {
    let pts = dirac_points(opts.points, opts.seed);
    let per_point: Vec<Vec<DiracRow>> = pts
        .par_iter()
        .enumerate()
        .map(|(index, &(xi, psi))| {
            let reduction_dim = reduce_to_finite_monad(sol, xi, psi, ctx).ok().and_then(|m| fiber(&m, ctx).ok()).map(|f| f.dim);
            let monad_dim = monad
                .and_then(|pm| pm.evaluate(&ChartPoint::xi_psi(xi, psi)).ok())
                .and_then(|ev| fiber(&ev, ctx).ok())
                .map(|f| f.dim);
            let levels: Vec<(usize, Result<(DiracLattice, Kernel), String>)> = (0..opts.levels.max(1))
                .map(|l| {
                    let g = opts.grid << l;
                    let r = assemble(sol, xi, psi, g).map_err(|e| e.to_string()).and_then(|dl| {
                        let k = kernel(&dl, ctx).map_err(|e| e.to_string())?;
                        Ok((dl, k))
                    });
                    (g, r)
                })
                .collect();
            let finest = levels.last().and_then(|(_, r)| r.as_ref().ok());
            levels
                .iter()
                .map(|(g, r)| match r {
                    Ok((dl, k)) => DiracRow {
                        index,
                        xi,
                        psi,
                        grid: *g,
                        dim: Some(k.dim),
                        gap: Some(k.gap),
                        min_eig: Some(min_eig_from(&k.singular_values)),
                        reality: Some(reality_residual(dl)),
                        closure: Some(dl.closure_residual()),
                        angle: finest.map(|(fd, fk)| kernel_angle((dl, k), (fd, fk))),
                        reduction_dim,
                        monad_dim,
                        error: None,
                        singular_values: k.singular_values.clone(),
                    },
                    Err(e) => DiracRow {
                        index,
                        xi,
                        psi,
                        grid: *g,
                        dim: None,
                        gap: None,
                        min_eig: None,
                        reality: None,
                        closure: None,
                        angle: None,
                        reduction_dim,
                        monad_dim,
                        error: Some(e.clone()),
                        singular_values: vec![],
                    },
                })
                .collect()
        })
        .collect();
    per_point.into_iter().flatten().collect()
}

/// Pass/fail summary of a Dirac sweep. Reality is accepted when it is at
/// roundoff or shrinks at least linearly with `h` across the levels.
pub fn dirac_report(rows: &[DiracRow]) -> ValidationReport {
    let mut r = ValidationReport::new();
    let ok = |f: &dyn Fn(&DiracRow) -> bool| rows.iter().all(|x| x.error.is_none() && f(x));
    r.push("kernel_dim", ok(&|x| x.dim == Some(2)), None, None);
    let gap = rows.iter().filter_map(|x| x.gap).fold(f64::INFINITY, f64::min);
    r.push("gap", gap > 1e3, Some(gap), None);
    let pos = rows.iter().filter_map(|x| x.min_eig).fold(f64::INFINITY, f64::min);
    r.push("positivity", pos > 0.0, Some(pos), None);
    r.push("reduction_matches", ok(&|x| x.reduction_dim.is_none_or(|d| Some(d) == x.dim)), None, None);
    r.push("monad_matches", ok(&|x| x.monad_dim.is_none_or(|d| Some(d) == x.dim)), None, None);
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut by_point: std::collections::BTreeMap<usize, Vec<&DiracRow>> = Default::default();
    for x in rows {
        by_point.entry(x.index).or_default().push(x);
    }
    for lv in by_point.values() {
        let res: Vec<f64> = lv.iter().filter_map(|x| x.reality).collect();
        worst = res.iter().copied().fold(worst, f64::max);
        pass &= reality_trend_ok(&res);
    }
    r.push("reality_trend", pass, Some(worst), None);
    r
}

/// Residuals on grids `h, h/2, …`: each is at roundoff (`< 1e-12`) or at
/// most 0.6 of the previous one.
pub fn reality_trend_ok(res: &[f64]) -> bool {
    !res.is_empty() && res.iter().all(|x| x.is_finite()) && res.windows(2).all(|w| w[1] < 1e-12 || w[1] <= 0.6 * w[0]) && res[0] < 1e-1
}

// -------------------------------------------------------------- roundtrip

fn polys_close<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut eq = a.len() == b.len();
    for (p, q) in a.iter().zip(b) {
        eq &= p.len() == q.len();
        for (x, y) in p.iter().zip(q) {
            let d = (x.clone() - y.clone()).abs() / (1.0 + x.abs());
            worst = worst.max(d);
            if T::EXACT {
                eq &= x == y;
            }
        }
    }
    if !T::EXACT {
        eq &= worst <= 1e-8;
    }
    (eq, worst)
}

/// Matrices → holomorphic complex → matrices, comparing invariants.
pub fn roundtrip<T: JsonScalar>(d: &MatrixData<T>) -> ValidationReport {
    let mut r = ValidationReport::new();
    let conj_tol = |x: f64, scale: f64| if T::EXACT { x == 0.0 } else { x <= 1e-10 * scale.max(1.0) };
    macro_rules! check {
        ($to:expr, $from:expr, $again:expr, $inv:expr, $conj:expr) => {{
            match $to {
                Err(e) => r.push("to_complex", false, None, Some(json!(e.to_string()))),
                Ok(c) => {
                    r.push("to_complex", true, None, None);
                    if let Some((res, scale)) = $conj(&c) {
                        r.push("normal_form_conjugation", conj_tol(res, scale), Some(res), None);
                    }
                    match $from(&c) {
                        Err(e) => r.push("from_complex", false, None, Some(json!(e.to_string()))),
                        Ok(back) => {
                            r.push("from_complex", true, None, None);
                            match $again(&back) {
                                Err(e) => r.push("invariants", false, None, Some(json!(e.to_string()))),
                                Ok(c2) => {
                                    let (ok, worst) = polys_close(&$inv(&c), &$inv(&c2));
                                    r.push("invariants", ok, Some(worst), None);
                                }
                            }
                        }
                    }
                }
            }
        }};
    }
    match d {
        MatrixData::Caloron(x) => check!(
            to_nahm_complex(x),
            from_nahm_complex,
            to_nahm_complex,
            |c: &crate::caloron::NahmComplexCircle<T>| c.invariants(),
            |c: &crate::caloron::NahmComplexCircle<T>| c.conjugation_residual().map(|v| (v, c.beta_left.max_abs()))
        ),
        MatrixData::CaloronM0(x) => check!(
            to_nahm_complex_m0(x),
            from_nahm_complex_m0,
            to_nahm_complex_m0,
            |c: &crate::caloron::NahmComplexCircle<T>| c.invariants(),
            |_: &crate::caloron::NahmComplexCircle<T>| None::<(f64, f64)>
        ),
        MatrixData::TaubNut(x) => check!(
            to_bow_complex(x),
            from_bow_complex,
            to_bow_complex,
            |c: &crate::taubnut::BowComplex<T>| c.invariants(),
            |c: &crate::taubnut::BowComplex<T>| c.long.conjugation_residual().map(|v| (v, c.long.beta_left.max_abs()))
        ),
        MatrixData::TaubNutM0(x) => check!(
            to_bow_complex_m0(x),
            from_bow_complex_m0,
            to_bow_complex_m0,
            |c: &crate::taubnut::BowComplex<T>| c.invariants(),
            |_: &crate::taubnut::BowComplex<T>| None::<(f64, f64)>
        ),
    }
    r
}

// --------------------------------------------------------------- generate

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    Caloron,
    #[value(name = "caloron-m0")]
    CaloronM0,
    Taubnut,
    #[value(name = "taubnut-m0")]
    TaubnutM0,
    Nahmsolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Strategy {
    /// k = 1 closed-form construction (matrices), or its lift to a
    /// constant bow solution (Nahm solutions).
    #[value(name = "k1-closed-form")]
    K1ClosedForm,
    /// Commuting diagonal Nahm data, one point of R³ per rank (m = 0).
    #[value(name = "diagonal-nahm")]
    DiagonalNahm,
    /// A valid instance moved along its symmetry orbit: an extra seeded
    /// unimodular change of basis (matrices) or a seeded unitary gauge
    /// transformation of diagonal data (Nahm solutions).
    Perturbed,
}

pub struct GenerateOptions {
    pub kind: GenKind,
    pub k: usize,
    pub m: usize,
    pub seed: u64,
    pub strategy: Option<Strategy>,
    pub ell: f64,
    pub lambda: f64,
    pub centers: Option<Vec<[f64; 3]>>,
}

fn seeded_matrices(kind: GenKind, k: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<MatrixData<CQ>, CommandError> {
    Ok(match kind {
        GenKind::Caloron if m >= 1 => MatrixData::Caloron(generate_caloron(rng, k, m)),
        GenKind::CaloronM0 => MatrixData::CaloronM0(generate_caloron_m0(rng, k)),
        GenKind::Taubnut if m >= 1 => MatrixData::TaubNut(generate_taubnut(rng, k, m)),
        GenKind::TaubnutM0 => MatrixData::TaubNutM0(generate_taubnut_m0(rng, k)),
        GenKind::Caloron | GenKind::Taubnut => return Err(failed("m must be ≥ 1; use the -m0 kind for m = 0")),
        GenKind::Nahmsolution => unreachable!(),
    })
}

fn random_unitary(rng: &mut ChaCha8Rng, k: usize) -> Matrix<C64> {
    let z = Matrix::from_fn(k, k, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    Matrix::from_nalgebra(&z.to_nalgebra().qr().q())
}

fn seeded_centers(rng: &mut ChaCha8Rng, k: usize) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::new();
    while out.len() < k {
        let p = [0, 1, 2].map(|_| rng.random_range(-2..=2) as f64);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn generate(o: &GenerateOptions) -> Result<DataFile, CommandError> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    if o.kind != GenKind::Nahmsolution {
        return match o.strategy {
            None => Ok(DataFile::Exact(seeded_matrices(o.kind, o.k, o.m, &mut rng)?)),
            Some(Strategy::K1ClosedForm) => {
                if o.k != 1 {
                    return Err(failed("k1-closed-form needs k = 1"));
                }
                Ok(DataFile::Exact(seeded_matrices(o.kind, 1, o.m, &mut rng)?))
            }
            Some(Strategy::Perturbed) => {
                let d = seeded_matrices(o.kind, o.k, o.m, &mut rng)?;
                Ok(DataFile::Exact(change_basis(&d, &mut rng)))
            }
            Some(Strategy::DiagonalNahm) => Err(failed("diagonal-nahm generates Nahm solutions")),
        };
    }
    let rep = BowRepresentation::new(o.ell, o.lambda, o.k, o.m).map_err(failed)?;
    let strategy = o.strategy.unwrap_or(if o.k == 1 { Strategy::K1ClosedForm } else { Strategy::DiagonalNahm });
    let sol = match strategy {
        Strategy::K1ClosedForm => {
            if o.k != 1 || o.m > 1 {
                return Err(failed("k1-closed-form Nahm solutions need k = 1, m ≤ 1"));
            }
            // Same seed as `--kind taubnut(-m0) --k 1` gives the matched pair.
            if o.m == 0 {
                lift_taubnut_m0(rep, &generate_taubnut_m0(&mut rng, 1).to_c64())
            } else {
                lift_taubnut_m1(rep, &generate_taubnut(&mut rng, 1, 1).to_c64())
            }
            .map_err(failed)?
        }
        Strategy::DiagonalNahm | Strategy::Perturbed => {
            let centers = o.centers.clone().unwrap_or_else(|| seeded_centers(&mut rng, o.k));
            let sol = diagonal_nahm(rep, &centers).map_err(failed)?;
            if strategy == Strategy::Perturbed {
                conjugate(&sol, &random_unitary(&mut rng, o.k))
            } else {
                sol
            }
        }
    };
    Ok(DataFile::Nahm(Box::new(sol)))
}

/// An extra seeded unimodular change of basis of `N`.
fn change_basis(d: &MatrixData<CQ>, rng: &mut ChaCha8Rng) -> MatrixData<CQ> {
    let (p, pinv) = crate::caloron::generate::unimodular(rng, d.k());
    let conj = |x: &Matrix<CQ>| &(&p * x) * &pinv;
    match d {
        MatrixData::Caloron(x) => {
            let mut y = x.clone();
            y.a = conj(&x.a);
            y.b = conj(&x.b);
            y.c = &p * &x.c;
            y.d2row = &x.d2row * &pinv;
            y.aprime = &x.aprime * &pinv;
            y.bprime = &x.bprime * &pinv;
            MatrixData::Caloron(y)
        }
        MatrixData::CaloronM0(x) => {
            let mut y = x.clone();
            y.a = conj(&x.a);
            y.b0 = conj(&x.b0);
            y.c = &p * &x.c;
            y.d = &x.d * &pinv;
            MatrixData::CaloronM0(y)
        }
        MatrixData::TaubNut(x) => {
            let mut y = x.clone();
            y.a = conj(&x.a);
            y.bht = conj(&x.bht);
            y.bth = conj(&x.bth);
            y.c = &p * &x.c;
            y.d2row = &x.d2row * &pinv;
            y.aprime = &x.aprime * &pinv;
            y.bprime = &x.bprime * &pinv;
            MatrixData::TaubNut(y)
        }
        MatrixData::TaubNutM0(x) => {
            let mut y = x.clone();
            y.a = conj(&x.a);
            y.bht = conj(&x.bht);
            y.bth = conj(&x.bth);
            y.c = &p * &x.c;
            y.d = &x.d * &pinv;
            MatrixData::TaubNutM0(y)
        }
    }
}
