// Exact round trip between Taub-NUT matrices and the holomorphic bow complex.

use bowmonad::numkit::CQ;
use bowmonad::taubnut::generate::generate_taubnut;
use bowmonad::taubnut::{from_bow_complex, to_bow_complex, TaubNutData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let d: TaubNutData<CQ> = generate_taubnut(&mut rng, 2, 2);
    let bc = to_bow_complex(&d)?;
    println!("edge residuals {:?}", bc.edge_residuals());
    assert_eq!(bc.edge_residuals(), (0.0, 0.0));
    assert_eq!(bc.long.conjugation_residual(), Some(0.0));

    let back = from_bow_complex(&bc)?;
    let invariants = to_bow_complex(&back)?.invariants();
    assert_eq!(invariants, bc.invariants());
    for (name, p) in ["B₀", "B₁", "transport"].iter().zip(&invariants) {
        let shown: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        println!("char poly of {name}: [{}]", shown.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
