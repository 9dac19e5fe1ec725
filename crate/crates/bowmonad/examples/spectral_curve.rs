// Spectral curve of commuting Nahm data: one line in TP¹ per point of R³.

use bowmonad::nahmbow::{diagonal_nahm, spectral_curve, BowRepresentation, Which};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rep = BowRepresentation::new(2.0, 0.5, 2, 0)?;
    let sol = diagonal_nahm(rep, &[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])?;
    let curve = spectral_curve(&sol, Which::S0, 9)?;
    for (i, row) in curve.coeffs.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.norm() > 1e-12 {
                println!("η^{i} ζ^{j}: {:+.3}", c.re);
            }
        }
    }
    // (η − 1 + ζ²)(η + 2ζ)
    assert!((curve.coeffs[0][3].re - 2.0).abs() < 1e-12);
    assert!((curve.coeffs[1][0].re + 1.0).abs() < 1e-12);
    println!("grading {:.1e}, reality {:.1e}", curve.grading_residual, curve.reality_residual);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
