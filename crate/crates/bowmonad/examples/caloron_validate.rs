// Validate the exact k = 1, m = 1 caloron data and a copy that breaks the
// second relation.

use bowmonad::caloron::generate::worked_example;
use bowmonad::caloron::CaloronData;
use bowmonad::numkit::{Matrix, Scalar, ToleranceContext, CQ};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let d: CaloronData<CQ> = worked_example();
    let report = d.validate(&ctx);
    println!("worked example:\n{report}");
    assert!(report.all_pass());

    let mut broken = d.clone();
    broken.bprime = Matrix::scalar(CQ::from_i64(10));
    let report = broken.validate(&ctx);
    println!("with B' = 10:\n{report}");
    assert!(!report.passed("relation2"));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
