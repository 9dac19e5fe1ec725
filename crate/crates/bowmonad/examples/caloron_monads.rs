// Build the big caloron monad on P¹×P¹, read off fibre dimensions and
// the splitting type on horizontal lines.

use bowmonad::caloron::data::spectrum;
use bowmonad::caloron::generate::generate_caloron;
use bowmonad::caloron::monads::big_monad_raw;
use bowmonad::monadcore::{fiber, splitting_type, ChartPoint, Line};
use bowmonad::numkit::{Scalar, ToleranceContext, C64, CQ};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = generate_caloron(&mut rng, 2, 1);
    let exact = big_monad_raw(&d);
    println!("ranks {:?}, βα = 0: {}", exact.ranks(), exact.composite().is_zero());

    for (x, e) in [(1, 2), (-3, 5)] {
        let p = ChartPoint::xi_eta(CQ::from_i64(x), CQ::from_i64(e));
        let dim = fiber(&exact.evaluate(&p)?, &ctx)?.dim;
        println!("fibre at (ξ, η) = ({x}, {e}): dim {dim}");
        assert_eq!(dim, 2);
    }

    let float = big_monad_raw(&d.to_c64());
    for ev in spectrum(&d.b) {
        let st = splitting_type(&float, &Line::Eta(ev), &ctx)?;
        println!("η = {ev:.4}: splitting {st:?}");
        assert_eq!(st, (1, -1));
    }
    let generic = splitting_type(&float, &Line::Eta(C64::new(100.0, 0.0)), &ctx)?;
    assert_eq!(generic, (0, 0));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
