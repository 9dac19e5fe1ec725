// Discretize the bow Dirac operator at one point, compute its kernel and
// check positivity, reality and convergence under refinement.

use bowmonad::diraclattice::{assemble, kernel, kernel_angle, positivity, reality_residual};
use bowmonad::nahmbow::{k1_constant_m0, BowRepresentation};
use bowmonad::numkit::{ToleranceContext, C64};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    let rep = BowRepresentation::new(2.0, 0.5, 1, 0)?;
    let sol = k1_constant_m0(rep, C64::new(0.8, 0.3), C64::new(1.1, -0.4), C64::new(2.0, 1.0))?;
    let (xi, psi) = (C64::new(0.3, 0.1), C64::new(0.2, -0.5));

    let mut prev = None;
    for grid in [16, 32, 64] {
        let dl = assemble(&sol, xi, psi, grid)?;
        let k = kernel(&dl, &ctx)?;
        let line = format!(
            "grid {grid}: kernel {} (gap {:.1e}), λ_min {:.3e}, reality {:.1e}",
            k.dim,
            k.gap,
            positivity(&dl),
            reality_residual(&dl)
        );
        match &prev {
            Some((pdl, pk)) => println!("{line}, angle to previous {:.2e}", kernel_angle((pdl, pk), (&dl, &k))),
            None => println!("{line}"),
        }
        assert_eq!(k.dim, 2);
        prev = Some((dl, k));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
