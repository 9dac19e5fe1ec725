// Validate Taub-NUT bow data (m = 1 and m = 0) and list its jumping lines.

use bowmonad::numkit::{ToleranceContext, CQ};
use bowmonad::taubnut::generate::{worked_example, worked_example_m0};
use bowmonad::taubnut::{jumping_lines, jumping_lines_m0, TaubNutData, TaubNutDataM0};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let d: TaubNutData<CQ> = worked_example();
    let report = d.validate(&ctx);
    println!("m = 1:\n{report}");
    assert!(report.all_pass());
    let jl = jumping_lines(&d);
    println!("B₀ spectrum {:?}, char polys agree: {}", jl.b0_spectrum.iter().map(|z| z.to_string()).collect::<Vec<_>>(), jl.charpoly_match);
    assert!(jl.charpoly_match);

    let d0: TaubNutDataM0<CQ> = worked_example_m0();
    let report = d0.validate(&ctx);
    println!("m = 0:\n{report}");
    assert!(report.all_pass());
    println!("jumping lines {:?}", jumping_lines_m0(&d0).b0_spectrum.iter().map(|z| z.to_string()).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
