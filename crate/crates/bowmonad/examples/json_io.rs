// Write data files as JSON and read them back, in both entry encodings.

use bowmonad::io::{Backend, DataFile, MatrixData};
use bowmonad::numkit::CQ;
use bowmonad::taubnut::generate::worked_example_m0;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let file = DataFile::Exact(MatrixData::TaubNutM0(worked_example_m0::<CQ>()));
    let text = file.to_string_pretty();
    println!("{text}");
    assert_eq!(DataFile::parse(&text)?.to_string_pretty(), text);

    // Entries may also be plain [re, im] floats.
    let float = DataFile::parse(
        r#"{"kind":"caloron-m0","backend":"f64","k":1,"m":0,"data":{
            "A":[[[2,0]]],"B0":[[[0.5,0]]],"C":[[[1,0],[1,0]]],"D":[[[1,0]],[[-1,0]]]}}"#,
    )?;
    println!("parsed a {} file", float.kind());
    let exact = float.with_backend(Backend::Exact)?;
    assert!(matches!(exact, DataFile::Exact(MatrixData::CaloronM0(_))));
    assert!(DataFile::parse(r#"{"kind":"caloron"}"#).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
