// Lift k = 1 Taub-NUT data to a bow solution, reduce it to a finite monad
// at a point and compare with the algebraic monad.

use bowmonad::monadcore::{fiber, ChartPoint};
use bowmonad::nahmbow::{check_boundary, lift_taubnut_m1, reduce_to_finite_monad, BowRepresentation};
use bowmonad::numkit::{ToleranceContext, C64, CQ};
use bowmonad::taubnut::generate::worked_example;
use bowmonad::taubnut::monads::big_monad_raw;
use bowmonad::taubnut::TaubNutData;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let d: TaubNutData<C64> = worked_example::<CQ>().to_c64();
    let sol = lift_taubnut_m1(BowRepresentation::new(2.0, 0.5, 1, 1)?, &d)?;
    assert!(check_boundary(&sol).all_pass());
    let pm = big_monad_raw(&d);
    for (xi, psi) in [(C64::new(0.3, 0.1), C64::new(0.2, -0.5)), (C64::new(-1.0, 0.4), C64::new(0.7, 0.7))] {
        let red = reduce_to_finite_monad(&sol, xi, psi, &ctx)?;
        let alg = pm.evaluate(&ChartPoint::xi_psi(xi, psi))?;
        let (a, b) = (fiber(&red, &ctx)?.dim, fiber(&alg, &ctx)?.dim);
        println!("(ξ, ψ) = ({xi}, {psi}): reduced fibre {a}, algebraic fibre {b}");
        assert_eq!((a, b), (2, 2));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
