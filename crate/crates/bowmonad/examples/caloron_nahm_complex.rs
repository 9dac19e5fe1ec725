// Pass caloron data to its holomorphic Nahm complex on the circle and back.

use bowmonad::caloron::generate::generate_caloron;
use bowmonad::caloron::{from_nahm_complex, to_nahm_complex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = generate_caloron(&mut rng, 2, 2);
    let nc = to_nahm_complex(&d)?;
    println!("conjugation residual {:?}", nc.conjugation_residual());
    let back = from_nahm_complex(&nc)?;
    let again = to_nahm_complex(&back)?;
    assert_eq!(nc.invariants(), again.invariants());
    println!("invariants preserved: {} polynomials", nc.invariants().len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
