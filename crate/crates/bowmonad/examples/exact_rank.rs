// Rank and kernels over the Gaussian rationals versus floating point with
// a gap-based rank decision.

use bowmonad::numkit::{cq, rank_kernel, Matrix, ToleranceContext, C64, CQ};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ToleranceContext::default();
    // Third row is the sum of the first two, with a complex twist.
    let rows = vec![
        vec![cq(1, 1, 0, 1), cq(2, 1, 0, 1), cq(0, 1, 1, 1)],
        vec![cq(1, 3, 0, 1), cq(0, 1, 0, 1), cq(1, 1, 0, 1)],
        vec![cq(4, 3, 0, 1), cq(2, 1, 0, 1), cq(1, 1, 1, 1)],
    ];
    let m: Matrix<CQ> = Matrix::from_rows(&rows);
    let rk = rank_kernel(&m, &ctx)?;
    let v: Vec<String> = rk.kernel.data().iter().map(|x| x.to_string()).collect();
    println!("exact rank {}, kernel vector [{}]", rk.rank, v.join(", "));
    assert_eq!(rk.rank, 2);
    assert!((&m * &rk.kernel).is_zero());

    let mf: Matrix<C64> = m.to_c64();
    let rf = rank_kernel(&mf, &ctx)?;
    println!("float rank {}, singular values {:?}, gap {:?}", rf.rank, rf.singular_values, rf.gap);
    assert_eq!(rf.rank, 2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
