//! Numerical kernel: scalar backends, dense matrices, Laurent polynomials,
//! rank decisions and the pencil solvers.

pub mod eigen;
pub mod linalg;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod scalar;

pub use linalg::{rank, rank_kernel, NumError, RankKernel, ToleranceContext};
pub use matrix::Matrix;
pub use pencil::{
    common_eigenvector_obstruction, pencil_surjectivity_failures, quotient_representatives, AffinePencil2,
};
pub use poly::{Poly2, PolyMatrix};
pub use scalar::{cq, Ring, Scalar, C64, CQ};
