mod bow_reduction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bow_reduction.rs"));
}

#[test]
fn bow_reduction_runs() {
    bow_reduction::run_example().expect("bow_reduction example should run");
}

mod caloron_monads {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/caloron_monads.rs"));
}

#[test]
fn caloron_monads_runs() {
    caloron_monads::run_example().expect("caloron_monads example should run");
}

mod caloron_nahm_complex {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/caloron_nahm_complex.rs"));
}

#[test]
fn caloron_nahm_complex_runs() {
    caloron_nahm_complex::run_example().expect("caloron_nahm_complex example should run");
}

mod caloron_validate {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/caloron_validate.rs"));
}

#[test]
fn caloron_validate_runs() {
    caloron_validate::run_example().expect("caloron_validate example should run");
}

mod dirac_lattice {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dirac_lattice.rs"));
}

#[test]
fn dirac_lattice_runs() {
    dirac_lattice::run_example().expect("dirac_lattice example should run");
}

mod exact_rank {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exact_rank.rs"));
}

#[test]
fn exact_rank_runs() {
    exact_rank::run_example().expect("exact_rank example should run");
}

mod generate_data {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/generate_data.rs"));
}

#[test]
fn generate_data_runs() {
    generate_data::run_example().expect("generate_data example should run");
}

mod json_io {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/json_io.rs"));
}

#[test]
fn json_io_runs() {
    json_io::run_example().expect("json_io example should run");
}

mod nahm_flow {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/nahm_flow.rs"));
}

#[test]
fn nahm_flow_runs() {
    nahm_flow::run_example().expect("nahm_flow example should run");
}

mod spectral_curve {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spectral_curve.rs"));
}

#[test]
fn spectral_curve_runs() {
    spectral_curve::run_example().expect("spectral_curve example should run");
}

mod taubnut_bow_complex {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/taubnut_bow_complex.rs"));
}

#[test]
fn taubnut_bow_complex_runs() {
    taubnut_bow_complex::run_example().expect("taubnut_bow_complex example should run");
}

mod taubnut_pushdown {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/taubnut_pushdown.rs"));
}

#[test]
fn taubnut_pushdown_runs() {
    taubnut_pushdown::run_example().expect("taubnut_pushdown example should run");
}

mod taubnut_validate {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/taubnut_validate.rs"));
}

#[test]
fn taubnut_validate_runs() {
    taubnut_validate::run_example().expect("taubnut_validate example should run");
}
