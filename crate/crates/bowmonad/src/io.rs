//! JSON data files.
//!
//! Every file is an object with a `kind` and, for matrix kinds, a `backend`
//! (`"f64"` or `"exact"`), the counts `k`, `m` and a `data` object of named
//! matrices. Matrices are arrays of rows. A float entry is `[re, im]`; an
//! exact entry is `{"re": {"n": .., "d": ..}, "im": {"n": .., "d": ..}}`
//! where integers that do not fit in 64 bits are written as strings.
//! Either entry form is accepted under either backend: floats convert to
//! rationals exactly, rationals round to the nearest float.

use crate::caloron::{CaloronData, CaloronDataM0};
use crate::nahmbow::flow::Segment;
use crate::nahmbow::solution::{BowRepresentation, Fundamental, NahmSolution, PoleDescriptor};
use crate::nahmbow::Triple;
use crate::numkit::{Matrix, Scalar, C64, CQ};
use crate::taubnut::{TaubNutData, TaubNutDataM0};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Schema(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    F64,
    Exact,
}

impl Backend {
    pub fn tag(self) -> &'static str {
        match self {
            Backend::F64 => "f64",
            Backend::Exact => "exact",
        }
    }
}

/// Scalars that can be written as data-file entries.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, IoError>;
}

fn parse_entry(v: &Value) -> Result<(Option<C64>, Option<CQ>), IoError> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64();
            let im = a[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok((Some(C64::new(re, im)), None)),
                _ => schema("float entries must be [re, im] numbers"),
            }
        }
        Value::Object(o) => {
            let part = |k: &str| -> Result<BigRational, IoError> {
                let p = o.get(k).ok_or_else(|| IoError::Schema(format!("exact entry lacks \"{k}\"")))?;
                let n = big_int(p.get("n"))?;
                let d = big_int(p.get("d"))?;
                if d == BigInt::from(0) {
                    return schema("zero denominator");
                }
                Ok(BigRational::new(n, d))
            };
            Ok((None, Some(CQ::new(part("re")?, part("im")?))))
        }
        _ => schema(format!("unrecognized entry {v}")),
    }
}

fn big_int(v: Option<&Value>) -> Result<BigInt, IoError> {
    match v {
        Some(Value::Number(n)) => n.as_i64().map(BigInt::from).ok_or_else(|| IoError::Schema(format!("non-integer {n}"))),
        Some(Value::String(s)) => BigInt::from_str(s).map_err(|_| IoError::Schema(format!("bad integer {s:?}"))),
        _ => schema("expected an integer"),
    }
}

fn int_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => json!(i),
        None => json!(b.to_string()),
    }
}

impl JsonScalar for C64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
    fn from_json(v: &Value) -> Result<Self, IoError> {
        match parse_entry(v)? {
            (Some(z), _) => Ok(z),
            (_, Some(q)) => Ok(q.to_c64()),
            _ => unreachable!(),
        }
    }
}

impl JsonScalar for CQ {
    fn to_json(&self) -> Value {
        json!({
            "re": {"n": int_json(self.re.numer()), "d": int_json(self.re.denom())},
            "im": {"n": int_json(self.im.numer()), "d": int_json(self.im.denom())},
        })
    }
    fn from_json(v: &Value) -> Result<Self, IoError> {
        match parse_entry(v)? {
            (_, Some(q)) => Ok(q),
            (Some(z), _) if z.re.is_finite() && z.im.is_finite() => Ok(CQ::from_c64(z)),
            _ => schema("non-finite float in exact data"),
        }
    }
}

pub fn matrix_to_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row_vec(i).iter().map(|x| x.to_json()).collect())).collect())
}

pub fn matrix_from_json<T: JsonScalar>(v: &Value) -> Result<Matrix<T>, IoError> {
    let rows = v.as_array().ok_or_else(|| IoError::Schema("a matrix is an array of rows".into()))?;
    let mut out: Vec<Vec<T>> = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| IoError::Schema("a matrix row is an array".into()))?;
        out.push(r.iter().map(T::from_json).collect::<Result<_, _>>()?);
    }
    let cols = out.first().map_or(0, |r| r.len());
    if out.iter().any(|r| r.len() != cols) {
        return Err(IoError::Shape("ragged matrix rows".into()));
    }
    if out.is_empty() || cols == 0 {
        return Ok(Matrix::zeros(out.len(), cols));
    }
    Ok(Matrix::from_rows(&out))
}

/// Matrix data of one of the four algebraic kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixData<T> {
    Caloron(CaloronData<T>),
    CaloronM0(CaloronDataM0<T>),
    TaubNut(TaubNutData<T>),
    TaubNutM0(TaubNutDataM0<T>),
}

impl<T: JsonScalar> MatrixData<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            MatrixData::Caloron(_) => "caloron",
            MatrixData::CaloronM0(_) => "caloron-m0",
            MatrixData::TaubNut(_) => "taubnut",
            MatrixData::TaubNutM0(_) => "taubnut-m0",
        }
    }

    pub fn k(&self) -> usize {
        match self {
            MatrixData::Caloron(d) => d.k,
            MatrixData::CaloronM0(d) => d.k,
            MatrixData::TaubNut(d) => d.k,
            MatrixData::TaubNutM0(d) => d.k,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            MatrixData::Caloron(d) => d.m,
            MatrixData::TaubNut(d) => d.m,
            _ => 0,
        }
    }

    fn named(&self) -> Vec<(&'static str, &Matrix<T>)> {
        match self {
            MatrixData::Caloron(d) => vec![
                ("A", &d.a),
                ("B", &d.b),
                ("C", &d.c),
                ("D2", &d.d2row),
                ("Aprime", &d.aprime),
                ("Bprime", &d.bprime),
                ("Cprime", &d.cprime),
            ],
            MatrixData::CaloronM0(d) => vec![("A", &d.a), ("B0", &d.b0), ("C", &d.c), ("D", &d.d)],
            MatrixData::TaubNut(d) => vec![
                ("A", &d.a),
                ("Bht", &d.bht),
                ("Bth", &d.bth),
                ("C", &d.c),
                ("D2", &d.d2row),
                ("Aprime", &d.aprime),
                ("Bprime", &d.bprime),
                ("Cprime", &d.cprime),
            ],
            MatrixData::TaubNutM0(d) => vec![("A", &d.a), ("Bht", &d.bht), ("Bth", &d.bth), ("C", &d.c), ("D", &d.d)],
        }
    }

    pub fn to_json(&self) -> Value {
        let mut data = Map::new();
        for (name, m) in self.named() {
            data.insert(name.into(), matrix_to_json(m));
        }
        json!({"kind": self.kind(), "backend": T::TAG, "k": self.k(), "m": self.m(), "data": data})
    }

    fn from_parts(kind: &str, k: usize, m: usize, data: &Map<String, Value>) -> Result<Self, IoError> {
        let get = |name: &str| -> Result<Matrix<T>, IoError> {
            let v = data.get(name).ok_or_else(|| IoError::Schema(format!("missing matrix \"{name}\"")))?;
            let mat = matrix_from_json(v)?;
            Ok(mat)
        };
        let out = match kind {
            "caloron" => MatrixData::Caloron(CaloronData {
                k,
                m,
                a: get("A")?,
                b: get("B")?,
                c: get("C")?,
                d2row: get("D2")?,
                aprime: get("Aprime")?,
                bprime: get("Bprime")?,
                cprime: get("Cprime")?,
            }),
            "caloron-m0" => MatrixData::CaloronM0(CaloronDataM0 { k, a: get("A")?, b0: get("B0")?, c: get("C")?, d: get("D")? }),
            "taubnut" => MatrixData::TaubNut(TaubNutData {
                k,
                m,
                a: get("A")?,
                bht: get("Bht")?,
                bth: get("Bth")?,
                c: get("C")?,
                d2row: get("D2")?,
                aprime: get("Aprime")?,
                bprime: get("Bprime")?,
                cprime: get("Cprime")?,
            }),
            "taubnut-m0" => MatrixData::TaubNutM0(TaubNutDataM0 {
                k,
                a: get("A")?,
                bht: get("Bht")?,
                bth: get("Bth")?,
                c: get("C")?,
                d: get("D")?,
            }),
            other => return schema(format!("unknown matrix kind {other:?}")),
        };
        out.check_shapes().map_err(IoError::Shape)?;
        Ok(out)
    }

    pub fn check_shapes(&self) -> Result<(), String> {
        match self {
            MatrixData::Caloron(d) => d.check_shapes(),
            MatrixData::CaloronM0(d) => d.check_shapes(),
            MatrixData::TaubNut(d) => d.check_shapes(),
            MatrixData::TaubNutM0(d) => d.check_shapes(),
        }
    }

    pub fn map<U: JsonScalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> MatrixData<U> {
        match self {
            MatrixData::Caloron(d) => MatrixData::Caloron(d.map(f)),
            MatrixData::CaloronM0(d) => MatrixData::CaloronM0(d.map(f)),
            MatrixData::TaubNut(d) => MatrixData::TaubNut(d.map(f)),
            MatrixData::TaubNutM0(d) => MatrixData::TaubNutM0(d.map(f)),
        }
    }
}

/// A parsed data file.
#[derive(Clone, Debug)]
pub enum DataFile {
    Exact(MatrixData<CQ>),
    Float(MatrixData<C64>),
    BowRep(BowRepresentation),
    Nahm(Box<NahmSolution>),
}

impl DataFile {
    pub fn kind(&self) -> &'static str {
        match self {
            DataFile::Exact(d) => d.kind(),
            DataFile::Float(d) => d.kind(),
            DataFile::BowRep(_) => "bowrep",
            DataFile::Nahm(_) => "nahmsolution",
        }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(&v)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, IoError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_value(v: &Value) -> Result<Self, IoError> {
        let obj = v.as_object().ok_or_else(|| IoError::Schema("top level must be an object".into()))?;
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| IoError::Schema("missing \"kind\"".into()))?;
        match kind {
            "bowrep" => {
                let rep: BowRepresentation = serde_json::from_value(obj.get("rep").cloned().unwrap_or(Value::Null))?;
                rep.check().map_err(|e| IoError::Schema(e.to_string()))?;
                Ok(DataFile::BowRep(rep))
            }
            "nahmsolution" => Ok(DataFile::Nahm(Box::new(nahm_from_json(obj)?))),
            _ => {
                let count = |name: &str| -> Result<usize, IoError> {
                    obj.get(name)
                        .and_then(Value::as_u64)
                        .map(|x| x as usize)
                        .ok_or_else(|| IoError::Schema(format!("missing count \"{name}\"")))
                };
                let k = count("k")?;
                let m = if kind.ends_with("-m0") { obj.get("m").and_then(Value::as_u64).unwrap_or(0) as usize } else { count("m")? };
                let data = obj.get("data").and_then(Value::as_object).ok_or_else(|| IoError::Schema("missing \"data\"".into()))?;
                match obj.get("backend").and_then(Value::as_str).unwrap_or("exact") {
                    "exact" => Ok(DataFile::Exact(MatrixData::from_parts(kind, k, m, data)?)),
                    "f64" => Ok(DataFile::Float(MatrixData::from_parts(kind, k, m, data)?)),
                    other => schema(format!("unknown backend {other:?}")),
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DataFile::Exact(d) => d.to_json(),
            DataFile::Float(d) => d.to_json(),
            DataFile::BowRep(r) => json!({"kind": "bowrep", "rep": r}),
            DataFile::Nahm(s) => nahm_to_json(s),
        }
    }

    /// Pretty JSON with a trailing newline; byte-stable under reload.
    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
        s.push('\n');
        s
    }

    /// Convert matrix data to the requested backend.
    pub fn with_backend(self, backend: Backend) -> Result<Self, IoError> {
        Ok(match (self, backend) {
            (DataFile::Exact(d), Backend::F64) => DataFile::Float(d.map(|m| m.to_c64())),
            (DataFile::Float(d), Backend::Exact) => {
                let bad = d.named().iter().any(|(_, m)| m.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()));
                if bad {
                    return schema("non-finite entries cannot be made exact");
                }
                DataFile::Exact(d.map(|m| Matrix::from_c64(m)))
            }
            (DataFile::Nahm(_), Backend::Exact) => return schema("Nahm solutions are float-only"),
            (other, _) => other,
        })
    }
}

fn triple_to_json(t: &Triple) -> Value {
    Value::Array(t.iter().map(matrix_to_json).collect())
}

fn triple_from_json(v: &Value) -> Result<Triple, IoError> {
    let a = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| IoError::Schema("a triple is [T1, T2, T3]".into()))?;
    Ok([matrix_from_json(&a[0])?, matrix_from_json(&a[1])?, matrix_from_json(&a[2])?])
}

fn segment_to_json(seg: &Segment) -> Value {
    json!({"s": seg.s, "T": seg.t.iter().map(triple_to_json).collect::<Vec<_>>()})
}

fn segment_from_json(v: Option<&Value>, rank: usize, name: &str) -> Result<Segment, IoError> {
    let v = v.ok_or_else(|| IoError::Schema(format!("missing segment \"{name}\"")))?;
    let s: Vec<f64> = serde_json::from_value(v.get("s").cloned().unwrap_or(Value::Null))?;
    let t = v
        .get("T")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Schema(format!("segment \"{name}\" lacks \"T\"")))?
        .iter()
        .map(triple_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if s.is_empty() || s.len() != t.len() {
        return Err(IoError::Shape(format!("segment \"{name}\": {} sample points for {} triples", s.len(), t.len())));
    }
    if s.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(IoError::Shape(format!("segment \"{name}\": sample points must increase")));
    }
    if t.iter().flatten().any(|m| m.shape() != (rank, rank)) {
        return Err(IoError::Shape(format!("segment \"{name}\": expected {rank}×{rank} matrices")));
    }
    Ok(Segment { s, t })
}

pub fn nahm_to_json(sol: &NahmSolution) -> Value {
    let fundamental: Vec<Value> =
        sol.fundamental.iter().map(|f| json!({"I": matrix_to_json(&f.i), "J": matrix_to_json(&f.j)})).collect();
    let poles: Vec<Value> = sol
        .poles
        .iter()
        .map(|p| {
            json!({
                "at": p.at,
                "m": p.m,
                "residue": p.residue.as_ref().map(triple_to_json),
                "highest_weight": p.highest_weight.as_ref().map(|v| v.iter().map(|z| z.to_json()).collect::<Vec<_>>()),
            })
        })
        .collect();
    json!({
        "kind": "nahmsolution",
        "backend": "f64",
        "rep": sol.rep,
        "B_ht": matrix_to_json(&sol.b_ht),
        "B_th": matrix_to_json(&sol.b_th),
        "segments": {
            "left": segment_to_json(&sol.left),
            "long": segment_to_json(&sol.long),
            "right": segment_to_json(&sol.right),
        },
        "fundamental": fundamental,
        "poles": poles,
    })
}

fn nahm_from_json(obj: &Map<String, Value>) -> Result<NahmSolution, IoError> {
    let rep: BowRepresentation = serde_json::from_value(obj.get("rep").cloned().unwrap_or(Value::Null))?;
    rep.check().map_err(|e| IoError::Schema(e.to_string()))?;
    let (k, m) = (rep.k, rep.m);
    let segs = obj.get("segments").ok_or_else(|| IoError::Schema("missing \"segments\"".into()))?;
    let left = segment_from_json(segs.get("left"), k, "left")?;
    let long = segment_from_json(segs.get("long"), k + m, "long")?;
    let right = segment_from_json(segs.get("right"), k, "right")?;
    let mat = |name: &str| -> Result<Matrix<C64>, IoError> {
        let m: Matrix<C64> = matrix_from_json(obj.get(name).ok_or_else(|| IoError::Schema(format!("missing \"{name}\"")))?)?;
        if m.shape() != (k, k) {
            return Err(IoError::Shape(format!("{name} must be {k}×{k}")));
        }
        Ok(m)
    };
    let (b_ht, b_th) = (mat("B_ht")?, mat("B_th")?);
    let mut fundamental = Vec::new();
    for f in obj.get("fundamental").and_then(Value::as_array).cloned().unwrap_or_default() {
        let i: Matrix<C64> = matrix_from_json(f.get("I").unwrap_or(&Value::Null))?;
        let j: Matrix<C64> = matrix_from_json(f.get("J").unwrap_or(&Value::Null))?;
        if i.shape() != (k, 1) || j.shape() != (1, k) {
            return Err(IoError::Shape(format!("fundamental data must be {k}×1 and 1×{k}")));
        }
        fundamental.push(Fundamental { i, j });
    }
    let mut poles = Vec::new();
    for p in obj.get("poles").and_then(Value::as_array).cloned().unwrap_or_default() {
        let at = p.get("at").and_then(Value::as_f64).ok_or_else(|| IoError::Schema("pole lacks \"at\"".into()))?;
        let pm = p.get("m").and_then(Value::as_u64).ok_or_else(|| IoError::Schema("pole lacks \"m\"".into()))? as usize;
        let residue = match p.get("residue") {
            None | Some(Value::Null) => None,
            Some(v) => Some(triple_from_json(v)?),
        };
        let highest_weight = match p.get("highest_weight") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(a.iter().map(C64::from_json).collect::<Result<Vec<_>, _>>()?),
            Some(_) => return schema("highest_weight must be an array of entries"),
        };
        poles.push(PoleDescriptor { at, m: pm, residue, highest_weight });
    }
    if m == 0 && fundamental.len() != 2 {
        return Err(IoError::Shape("m = 0 solutions carry fundamental data at both λ-points".into()));
    }
    Ok(NahmSolution { rep, left, long, right, b_ht, b_th, fundamental, poles })
}
