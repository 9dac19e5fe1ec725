// Integrate the Nahm equations from random Hermitian data and watch the
// spectral invariants stay put.

use bowmonad::nahmbow::flow::default_zetas;
use bowmonad::nahmbow::{flow, FlowOptions};
use bowmonad::numkit::{Matrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hermitian(rng: &mut ChaCha8Rng, n: usize) -> Matrix<C64> {
    let a = Matrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + &a.adjoint()).scale(&C64::new(0.5, 0.0))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let init = [hermitian(&mut rng, 2), hermitian(&mut rng, 2), hermitian(&mut rng, 2)];
    let seg = flow(&init, 0.0, 1.0, &FlowOptions::new(1e-3))?;
    let drift = seg.isospectral_drift(&default_zetas());
    let herm = seg.hermiticity_defect();
    let moved = (&seg.t.last().unwrap()[0] - &init[0]).max_abs();
    println!("{} samples, drift {drift:.2e}, hermiticity {herm:.2e}, T1 moved by {moved:.3}", seg.s.len());
    assert!(drift < 1e-8 && herm < 1e-10 && moved > 1e-2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
