use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bowmonad"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bowmonad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(x: &PathBuf) -> &str {
    x.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", "--input", p(&data("caloron_worked.json"))]);
    assert_eq!(code(&ok), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["pass"], true);

    let bad = run(&["validate", "--input", p(&data("caloron_relation2_broken.json"))]);
    assert_eq!(code(&bad), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    let rel2 = v["report"]["entries"].as_array().unwrap().iter().find(|e| e["name"] == "relation2").unwrap();
    assert_eq!(rel2["status"], "fail");
    assert!(rel2["residual"].as_f64().unwrap() > 0.0);

    let malformed = run(&["validate", "--input", p(&data("malformed.json"))]);
    assert_eq!(code(&malformed), 2);
    let v: serde_json::Value = serde_json::from_str(&stdout(&malformed)).unwrap();
    assert_eq!(v["error"]["kind"], "parse");

    assert_eq!(code(&run(&["validate", "--input", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&run(&["validate"])), 2);
    assert_eq!(code(&run(&["validate", "--input", p(&data("caloron_worked.json")), "--backend", "f64"])), 0);
}

#[test]
fn generate_then_validate() {
    let out = tmp("tn.json");
    assert_eq!(code(&run(&["generate", "--kind", "taubnut", "--k", "1", "--m", "1", "--seed", "42", "--out", p(&out)])), 0);
    assert_eq!(code(&run(&["validate", "--input", p(&out)])), 0);
    // Same seed, same bytes.
    let again = tmp("tn2.json");
    run(&["generate", "--kind", "taubnut", "--k", "1", "--m", "1", "--seed", "42", "--out", p(&again)]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
    for (kind, k, m, strategy) in [
        ("caloron", "2", "1", "perturbed"),
        ("caloron-m0", "1", "0", "k1-closed-form"),
        ("taubnut-m0", "2", "0", "perturbed"),
        ("nahmsolution", "2", "0", "diagonal-nahm"),
        ("nahmsolution", "2", "0", "perturbed"),
        ("nahmsolution", "1", "1", "k1-closed-form"),
    ] {
        let f = tmp(&format!("{kind}-{strategy}.json"));
        let g = run(&["generate", "--kind", kind, "--k", k, "--m", m, "--seed", "7", "--strategy", strategy, "--out", p(&f)]);
        assert_eq!(code(&g), 0, "{kind} {strategy}");
        assert_eq!(code(&run(&["validate", "--input", p(&f)])), 0, "{kind} {strategy}");
    }
    let g = run(&["generate", "--kind", "taubnut", "--k", "2", "--strategy", "k1-closed-form"]);
    assert_eq!(code(&g), 1);
}

#[test]
fn spectral_of_diagonal_data_is_product_of_lines() {
    let f = tmp("diag.json");
    let g = run(&["generate", "--kind", "nahmsolution", "--k", "2", "--m", "0", "--strategy", "diagonal-nahm", "--centers", "1,0,0;0,0,1", "--out", p(&f)]);
    assert_eq!(code(&g), 0);
    let o = run(&["spectral", "--input", p(&f)]);
    assert_eq!(code(&o), 0);
    // (η − 1 + ζ²)(η + 2ζ) = η² + η(−1 + 2ζ + ζ²) − 2ζ + 2ζ³.
    let want = [((0, 1), -2.0), ((0, 3), 2.0), ((1, 0), -1.0), ((1, 1), 2.0), ((1, 2), 1.0), ((2, 0), 1.0)];
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    for rec in rdr.records() {
        let r = rec.unwrap();
        if &r[0] != "S0" {
            continue;
        }
        let (i, j): (usize, usize) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let re: f64 = r[3].parse().unwrap();
        let im: f64 = r[4].parse().unwrap();
        let expect = want.iter().find(|(ij, _)| *ij == (i, j)).map(|x| x.1).unwrap_or(0.0);
        assert!((re - expect).abs() < 1e-12 && im.abs() < 1e-12, "η^{i} ζ^{j}: {re} {im}");
    }
}

#[test]
fn roundtrip_fiber_splitting_on_golden_files() {
    for f in ["caloron_worked.json", "taubnut_worked.json", "taubnut_m0_worked.json"] {
        assert_eq!(code(&run(&["roundtrip", "--input", p(&data(f))])), 0, "{f}");
        let o = run(&["fiber", "--input", p(&data(f)), "--points", "30"]);
        assert_eq!(code(&o), 0, "{f}");
        let text = stdout(&o);
        assert!(text.lines().count() > 30);
        assert!(text.contains(",jumping,"));
        assert_eq!(code(&run(&["splitting", "--input", p(&data(f)), "--points", "5"])), 0, "{f}");
    }
    assert_eq!(code(&run(&["spectral", "--input", p(&data("caloron_worked.json"))])), 1);
}

#[test]
fn dirac_and_flow_on_matched_pair() {
    let sol = tmp("n0.json");
    let tn = tmp("t0.json");
    run(&["generate", "--kind", "nahmsolution", "--k", "1", "--m", "0", "--seed", "5", "--out", p(&sol)]);
    run(&["generate", "--kind", "taubnut-m0", "--k", "1", "--seed", "5", "--out", p(&tn)]);
    let spec = tmp("spectrum.csv");
    let o = run(&["dirac", "--input", p(&sol), "--monad", p(&tn), "--grid", "16", "--levels", "2", "--points", "2", "--spectrum", p(&spec)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!((&r[6], &r[12], &r[13]), ("2", "2", "2"));
    }
    assert!(std::fs::read_to_string(&spec).unwrap().starts_with("index,grid,rank,sigma"));
    assert_eq!(code(&run(&["nahm-flow", "--input", p(&sol), "--step", "0.01"])), 0);
    assert_eq!(code(&run(&["nahm-flow", "--input", p(&sol), "--step=-1"])), 1);
    assert_eq!(code(&run(&["dirac", "--input", p(&sol), "--grid", "7"])), 1);
}

#[test]
fn thread_count_does_not_change_output() {
    let input = data("taubnut_worked.json");
    let args = ["fiber", "--input", p(&input), "--points", "40", "--seed", "3"];
    let one = bin().args(args).env("BOWMONAD_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("BOWMONAD_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn cli_matches_library_call() {
    use bowmonad::commands::fiber_sweep;
    use bowmonad::io::{DataFile, MatrixData};
    let f = DataFile::load(&data("taubnut_worked.json")).unwrap();
    let DataFile::Exact(d @ MatrixData::TaubNut(_)) = &f else { panic!() };
    let rows = fiber_sweep(d, 10, 9, &Default::default()).unwrap();
    let o = run(&["fiber", "--input", p(&data("taubnut_worked.json")), "--points", "10", "--seed", "9"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let dims: Vec<String> = rdr.records().map(|r| r.unwrap()[6].to_string()).collect();
    assert_eq!(dims, rows.iter().map(|r| r.dim.unwrap().to_string()).collect::<Vec<_>>());
}
