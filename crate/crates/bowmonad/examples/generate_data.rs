// Generate valid data of every kind and validate it.

use bowmonad::commands::{generate, validate, GenKind, GenerateOptions, Strategy};
use bowmonad::numkit::ToleranceContext;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let cases = [
        (GenKind::Caloron, 2, 1, None),
        (GenKind::CaloronM0, 1, 0, Some(Strategy::K1ClosedForm)),
        (GenKind::Taubnut, 2, 2, Some(Strategy::Perturbed)),
        (GenKind::TaubnutM0, 2, 0, None),
        (GenKind::Nahmsolution, 1, 1, Some(Strategy::K1ClosedForm)),
        (GenKind::Nahmsolution, 3, 0, Some(Strategy::Perturbed)),
    ];
    for (kind, k, m, strategy) in cases {
        let opts = GenerateOptions { kind, k, m, seed: 42, strategy, ell: 2.0, lambda: 0.5, centers: None };
        let file = generate(&opts)?;
        let report = validate(&file, &ctx);
        println!("{:<13} k={k} m={m} {:?}: {}", file.kind(), strategy, if report.all_pass() { "valid" } else { "INVALID" });
        assert!(report.all_pass(), "{report}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
