//! Argument parsing, file handling and exit codes for the `bowmonad` binary.
//!
//! Exit codes: 0 success, 1 validation failure or failed computation,
//! 2 unreadable or malformed input (including usage errors).

use crate::commands::{self, CommandError, DiracOptions, GenKind, GenerateOptions, Strategy};
use crate::io::{Backend, DataFile, IoError, MatrixData};
use crate::numkit::linalg::ToleranceContext;
use crate::numkit::C64;
use crate::report::ValidationReport;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "bowmonad", version, about = "Monads, Nahm data and bow Dirac operators for SU(2) instantons on Taub-NUT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input data file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Arithmetic backend; defaults to the file's own.
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Relative rank tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the defining relations and boundary conditions of a data file.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Fiber dimensions of the monad at seeded points and on jumping lines (CSV).
    Fiber {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Splitting types on lines η = const (CSV).
    Splitting {
        #[command(flatten)]
        common: Common,
        /// Number of off-spectrum lines.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Spectral-curve coefficients of a Nahm solution (CSV).
    Spectral {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        zeta_samples: Option<usize>,
    },
    /// Re-integrate a Nahm solution with RK4 and trace isospectral drift (CSV).
    NahmFlow {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Kernel of the discretized Dirac operator at seeded points (CSV).
    Dirac {
        #[command(flatten)]
        common: Common,
        /// Cells across the whole interval; the λ-points must fall on nodes.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run on grids 2·grid, 4·grid, … (this many levels in total).
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// Matched Taub-NUT matrix data to compare fiber dimensions with.
        #[arg(long)]
        monad: Option<PathBuf>,
        /// Write singular-value spectra to this CSV file.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Matrices → holomorphic complex → matrices, comparing invariants.
    Roundtrip {
        #[command(flatten)]
        common: Common,
    },
    /// Write a seeded, validated data file.
    Generate {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
        /// Interval length (Nahm solutions).
        #[arg(long, default_value_t = 2.0)]
        ell: f64,
        /// λ, with λ± = ±λ (Nahm solutions).
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Points of R³ for diagonal data, as "x,y,z;x,y,z".
        #[arg(long)]
        centers: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        backend: Option<Backend>,
    },
}

enum Failure {
    Parse(String),
    Run(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(e) => Failure::Parse(format!("cannot read input: {e}")),
            other => Failure::Parse(other.to_string()),
        }
    }
}

impl From<CommandError> for Failure {
    fn from(e: CommandError) -> Self {
        Failure::Run(e.to_string())
    }
}

fn ctx(tol: Option<f64>) -> ToleranceContext {
    let mut c = ToleranceContext::default();
    if let Some(t) = tol {
        c.rank_tol = t;
    }
    c
}

fn load(common: &Common) -> Result<DataFile, Failure> {
    let f = DataFile::load(&common.input)?;
    Ok(match common.backend {
        Some(b) => f.with_backend(b)?,
        None => f,
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Failure::Run(e.to_string()))
        }
    }
}

/// JSON summary on stderr for commands whose main output is CSV.
fn summary(kind: &str, report: &ValidationReport, extra: serde_json::Value) {
    let v = json!({"kind": kind, "pass": report.all_pass(), "report": report, "details": extra});
    eprintln!("{}", serde_json::to_string(&v).expect("serializable"));
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn f(x: f64) -> String {
    format!("{x:e}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn optf(x: Option<f64>) -> String {
    x.map(f).unwrap_or_default()
}

fn cplx(z: C64) -> [String; 2] {
    [f(z.re), f(z.im)]
}

fn matrices<'a>(file: &'a DataFile) -> Result<Either<'a>, Failure> {
    match file {
        DataFile::Exact(d) => Ok(Either::Exact(d)),
        DataFile::Float(d) => Ok(Either::Float(d)),
        other => Err(Failure::Run(format!("{} input is not supported by this command", other.kind()))),
    }
}

enum Either<'a> {
    Exact(&'a MatrixData<crate::numkit::CQ>),
    Float(&'a MatrixData<C64>),
}

fn nahm(file: &DataFile) -> Result<&crate::nahmbow::NahmSolution, Failure> {
    match file {
        DataFile::Nahm(s) => Ok(s),
        other => Err(Failure::Run(format!("{} input is not supported by this command; expected nahmsolution", other.kind()))),
    }
}

fn parse_centers(s: &str) -> Result<Vec<[f64; 3]>, Failure> {
    s.split(';')
        .map(|p| {
            let v: Vec<f64> = p.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| Failure::Parse(format!("--centers: {e}")))?;
            <[f64; 3]>::try_from(v).map_err(|_| Failure::Parse("--centers expects triples x,y,z".into()))
        })
        .collect()
}

fn execute(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Validate { common } => {
            let file = load(&common)?;
            let report = commands::validate(&file, &ctx(common.tol));
            let v = json!({"kind": file.kind(), "pass": report.all_pass(), "report": report});
            emit(&common.out, &(serde_json::to_string_pretty(&v).expect("serializable") + "\n"))?;
            eprint!("{report}");
            Ok(report.all_pass())
        }
        Command::Roundtrip { common } => {
            let file = load(&common)?;
            let report = match matrices(&file)? {
                Either::Exact(d) => commands::roundtrip(d),
                Either::Float(d) => commands::roundtrip(d),
            };
            let v = json!({"kind": file.kind(), "pass": report.all_pass(), "report": report});
            emit(&common.out, &(serde_json::to_string_pretty(&v).expect("serializable") + "\n"))?;
            Ok(report.all_pass())
        }
        Command::Fiber { common, points, seed } => {
            let file = load(&common)?;
            let c = ctx(common.tol);
            let rows = match matrices(&file)? {
                Either::Exact(d) => commands::fiber_sweep(d, points, seed, &c)?,
                Either::Float(d) => commands::fiber_sweep(d, points, seed, &c)?,
            };
            let text = csv_text(
                &["index", "line", "u_re", "u_im", "v_re", "v_im", "dim", "error"],
                rows.iter().map(|r| {
                    let [ur, ui] = cplx(r.u);
                    let [vr, vi] = cplx(r.v);
                    vec![r.index.to_string(), r.line.into(), ur, ui, vr, vi, opt(r.dim), opt(r.error.clone())]
                }),
            );
            emit(&common.out, &text)?;
            let mut report = ValidationReport::new();
            let bad = rows.iter().filter(|r| r.dim != Some(2)).count();
            report.push("fiber_dim_two", bad == 0, None, Some(json!({"points": rows.len(), "failures": bad})));
            summary(file.kind(), &report, json!(null));
            Ok(report.all_pass())
        }
        Command::Splitting { common, points, seed } => {
            let file = load(&common)?;
            let c = ctx(common.tol);
            let scan = match matrices(&file)? {
                Either::Exact(d) => commands::splitting_scan(d, points, seed, &c)?,
                Either::Float(d) => commands::splitting_scan(d, points, seed, &c)?,
            };
            let pair = |p: Option<(i32, i32)>| p.map(|(a, b)| [a.to_string(), b.to_string()]).unwrap_or_default();
            let text = csv_text(
                &["index", "eta_re", "eta_im", "on_spectrum", "a", "b", "expected_a", "expected_b", "error"],
                scan.rows.iter().map(|r| {
                    let [er, ei] = cplx(r.eta);
                    let [a, b] = pair(r.splitting);
                    let [ea, eb] = pair(r.expected);
                    vec![r.index.to_string(), er, ei, r.on_spectrum.to_string(), a, b, ea, eb, opt(r.error.clone())]
                }),
            );
            emit(&common.out, &text)?;
            let mut report = ValidationReport::new();
            let mism = scan.rows.iter().filter(|r| r.expected.is_some() && r.splitting != r.expected).count();
            report.push("splitting_types", mism == 0, None, Some(json!({"lines": scan.rows.len(), "mismatches": mism})));
            if let Some(cm) = scan.charpoly_match {
                report.push("charpoly_b0_b1", cm, None, None);
            }
            summary(file.kind(), &report, json!(null));
            Ok(report.all_pass())
        }
        Command::Spectral { common, zeta_samples } => {
            let file = load(&common)?;
            let out = commands::spectral(nahm(&file)?, zeta_samples)?;
            let mut rows = Vec::new();
            for (name, c) in [("S0", &out.s0), ("S1", &out.s1)] {
                for (i, row) in c.coeffs.iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        let [re, im] = cplx(*z);
                        rows.push(vec![name.to_string(), i.to_string(), j.to_string(), re, im]);
                    }
                }
            }
            emit(&common.out, &csv_text(&["curve", "eta_power", "zeta_power", "re", "im"], rows))?;
            summary("nahmsolution", &out.report, json!({"common_roots": out.common_roots}));
            Ok(out.report.all_pass())
        }
        Command::NahmFlow { common, step } => {
            let file = load(&common)?;
            let (rows, report) = commands::nahm_flow(nahm(&file)?, step)?;
            let text = csv_text(
                &["piece", "s", "drift", "hermiticity", "deviation"],
                rows.iter().map(|r| vec![r.piece.into(), f(r.s), f(r.drift), f(r.hermiticity), f(r.deviation)]),
            );
            emit(&common.out, &text)?;
            summary("nahmsolution", &report, json!(null));
            Ok(report.all_pass())
        }
        Command::Dirac { common, grid, points, seed, levels, monad, spectrum } => {
            let file = load(&common)?;
            let sol = nahm(&file)?;
            let c = ctx(common.tol);
            let pm = match monad {
                None => None,
                Some(p) => {
                    let mf = DataFile::load(&p)?.with_backend(Backend::F64)?;
                    let pm = match mf {
                        DataFile::Float(MatrixData::TaubNut(d)) => crate::taubnut::monads::big_monad_raw(&d),
                        DataFile::Float(MatrixData::TaubNutM0(d)) => crate::taubnut::monads::big_monad_m0_raw(&d)
                            .ok_or_else(|| Failure::Run("A is singular".into()))?,
                        other => return Err(Failure::Run(format!("--monad expects taubnut data, got {}", other.kind()))),
                    };
                    Some(pm)
                }
            };
            let rows = commands::dirac_sweep(sol, pm.as_ref(), &DiracOptions { grid, points, seed, levels }, &c);
            let text = csv_text(
                &[
                    "index", "xi_re", "xi_im", "psi_re", "psi_im", "grid", "dim", "gap", "min_eig", "reality", "closure", "angle",
                    "reduction_dim", "monad_dim", "error",
                ],
                rows.iter().map(|r| {
                    let [xr, xi] = cplx(r.xi);
                    let [pr, pi] = cplx(r.psi);
                    vec![
                        r.index.to_string(),
                        xr,
                        xi,
                        pr,
                        pi,
                        r.grid.to_string(),
                        opt(r.dim),
                        optf(r.gap),
                        optf(r.min_eig),
                        optf(r.reality),
                        optf(r.closure),
                        optf(r.angle),
                        opt(r.reduction_dim),
                        opt(r.monad_dim),
                        opt(r.error.clone()),
                    ]
                }),
            );
            emit(&common.out, &text)?;
            if let Some(p) = spectrum {
                let srows = rows.iter().flat_map(|r| {
                    r.singular_values.iter().enumerate().map(move |(j, s)| vec![r.index.to_string(), r.grid.to_string(), j.to_string(), f(*s)])
                });
                emit(&Some(p), &csv_text(&["index", "grid", "rank", "sigma"], srows))?;
            }
            let report = commands::dirac_report(&rows);
            summary("nahmsolution", &report, json!(null));
            Ok(report.all_pass())
        }
        Command::Generate { kind, k, m, seed, strategy, ell, lambda, centers, out, backend } => {
            let centers = centers.as_deref().map(parse_centers).transpose()?;
            let file = commands::generate(&GenerateOptions { kind, k, m, seed, strategy, ell, lambda, centers })?;
            let file = match backend {
                Some(b) => file.with_backend(b)?,
                None => file,
            };
            emit(&out, &file.to_string_pretty())?;
            Ok(true)
        }
    }
}

/// Run with explicit arguments (the first is the program name) and return
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = std::env::var("BOWMONAD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Ignored when a global pool already exists (repeated in-process runs).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Parse(msg)) => {
            println!("{}", json!({"error": {"kind": "parse", "message": msg}}));
            2
        }
        Err(Failure::Run(msg)) => {
            println!("{}", json!({"error": {"kind": "failed", "message": msg}}));
            1
        }
    }
}
