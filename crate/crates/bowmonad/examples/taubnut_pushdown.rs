// Compare the fused Taub-NUT monad with its pushdown along ψ.

use bowmonad::numkit::{ToleranceContext, C64};
use bowmonad::taubnut::generate::generate_taubnut;
use bowmonad::taubnut::monads::TnBlocks;
use bowmonad::taubnut::compare_pushdown_psi;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let d = generate_taubnut(&mut rng, 2, 1).to_c64();
    let blocks = TnBlocks::from_data(&d);
    for _ in 0..5 {
        let xi = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let psi = C64::new(rng.random_range(0.2..2.0), rng.random_range(-2.0..2.0));
        let rank = compare_pushdown_psi(&blocks, xi, psi, &ctx)?;
        println!("ξ = {xi:.3}, ψ = {psi:.3}: induced fibre map has rank {rank}");
        assert_eq!(rank, 2);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
