use bowmonad::caloron::generate::worked_example;
use bowmonad::io::{matrix_from_json, matrix_to_json, Backend, DataFile, IoError, MatrixData};
use bowmonad::nahmbow::*;
use bowmonad::numkit::{Matrix, CQ, C64};
use proptest::prelude::*;
use serde_json::json;

const GOLDEN: &str = include_str!("data/caloron_worked.json");

#[test]
fn golden_file_is_the_worked_example() {
    let f = DataFile::parse(GOLDEN).unwrap();
    match &f {
        DataFile::Exact(MatrixData::Caloron(d)) => assert_eq!(d, &worked_example::<CQ>()),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(f.to_string_pretty(), GOLDEN);
}

#[test]
fn exact_entries_are_fractions() {
    let m = Matrix::from_rows(&[vec![bowmonad::numkit::cq(-3, 4, 1, 7)]]);
    let v = matrix_to_json(&m);
    assert_eq!(v, json!([[{"re": {"n": -3, "d": 4}, "im": {"n": 1, "d": 7}}]]));
    let back: Matrix<CQ> = matrix_from_json(&v).unwrap();
    assert_eq!(back, m);
    // Large integers travel as strings.
    let big = json!([[{"re": {"n": "123456789012345678901234567890", "d": 1}, "im": {"n": 0, "d": 1}}]]);
    let m: Matrix<CQ> = matrix_from_json(&big).unwrap();
    assert_eq!(matrix_to_json(&m), big);
}

#[test]
fn float_entries_convert_exactly_to_rationals() {
    let v = json!([[[0.5, -0.25]]]);
    let q: Matrix<CQ> = matrix_from_json(&v).unwrap();
    assert_eq!(q[(0, 0)], bowmonad::numkit::cq(1, 2, -1, 4));
    let f: Matrix<C64> = matrix_from_json(&matrix_to_json(&q)).unwrap();
    assert_eq!(f[(0, 0)], C64::new(0.5, -0.25));
}

#[test]
fn backend_switch_round_trips_dyadic_data() {
    let f = DataFile::parse(GOLDEN).unwrap();
    let fl = f.clone().with_backend(Backend::F64).unwrap();
    assert!(matches!(fl, DataFile::Float(_)));
    let back = fl.with_backend(Backend::Exact).unwrap();
    assert_eq!(back.to_string_pretty(), GOLDEN);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(matches!(DataFile::parse(include_str!("data/malformed.json")), Err(IoError::Json(_))));
    assert!(matches!(DataFile::parse(r#"{"kind": "nonsense"}"#), Err(IoError::Schema(_))));
    let mut v: serde_json::Value = serde_json::from_str(GOLDEN).unwrap();
    v["data"]["A"] = json!([[[1.0, 0.0], [2.0, 0.0]]]);
    assert!(matches!(DataFile::from_value(&v), Err(IoError::Shape(_))));
    v["data"]["A"] = json!([[[1.0, 0.0]], [[1.0, 0.0], [2.0, 0.0]]]);
    assert!(matches!(DataFile::from_value(&v), Err(IoError::Shape(_))));
    v["data"].as_object_mut().unwrap().remove("A");
    assert!(matches!(DataFile::from_value(&v), Err(IoError::Schema(_))));
    let mut v: serde_json::Value = serde_json::from_str(GOLDEN).unwrap();
    v["data"]["B"] = json!([[{"re": {"n": 1, "d": 0}, "im": {"n": 0, "d": 1}}]]);
    assert!(matches!(DataFile::from_value(&v), Err(IoError::Schema(_))));
}

#[test]
fn nahm_solution_round_trip() {
    let rep = BowRepresentation::new(2.0, 0.5, 1, 1).unwrap();
    let sol = k1_constant_m1(rep, C64::new(0.8, 0.3), C64::new(1.1, -0.4), C64::new(2.0, 1.0)).unwrap();
    let f = DataFile::Nahm(Box::new(sol.clone()));
    let text = f.to_string_pretty();
    let back = DataFile::parse(&text).unwrap();
    assert_eq!(back.to_string_pretty(), text);
    let DataFile::Nahm(b) = back else { panic!() };
    assert_eq!(b.long.t, sol.long.t);
    assert_eq!(b.poles, sol.poles);
    assert!(DataFile::Nahm(b).with_backend(Backend::Exact).is_err());
}

#[test]
fn bowrep_files() {
    let f = DataFile::parse(r#"{"kind": "bowrep", "rep": {"ell": 2.0, "lambda": 0.5, "k": 1, "m": 0}}"#).unwrap();
    assert_eq!(f.kind(), "bowrep");
    assert!(DataFile::parse(r#"{"kind": "bowrep", "rep": {"ell": 2.0, "lambda": 1.5, "k": 1, "m": 0}}"#).is_err());
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e3..1e3f64]
}

proptest! {
    #[test]
    fn float_matrices_are_value_stable(vals in proptest::collection::vec((finite(), finite()), 1..12), cols in 1usize..4) {
        let rows = vals.len().div_ceil(cols);
        let m = Matrix::from_fn(rows, cols, |i, j| vals.get(i * cols + j).map(|&(a, b)| C64::new(a, b)).unwrap_or_default());
        let text = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        let back: Matrix<C64> = matrix_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn exact_entries_are_byte_stable(n in any::<i64>(), d in 1i64..1_000_000, e in any::<i32>()) {
        let q = bowmonad::numkit::cq(n, d, e as i64, 3);
        let m = Matrix::from_rows(&[vec![q]]);
        let text = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        let back: Matrix<CQ> = matrix_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(serde_json::to_string(&matrix_to_json(&back)).unwrap(), text);
    }
}
