//! Analytic side: bow representations, Nahm flows, boundary conditions,
//! spectral curves and the finite reduction of the Dolbeault complex.

pub mod boundary;
pub mod flow;
pub mod reduce;
pub mod solution;
pub mod spectral;
pub mod su2;

pub use boundary::{check_boundary, fit_pole};
pub use flow::{flow, lax, FlowError, FlowOptions, Segment};
pub use reduce::{complex_defect, point_data, reduce_to_finite_monad, ReduceError};
pub use solution::{
    diagonal_nahm, k1_constant_m0, k1_constant_m1, lift_taubnut_m0, lift_taubnut_m1, BowRepresentation, Fundamental,
    NahmSolution, PoleDescriptor, SolutionError,
};
pub use spectral::{spectral_curve, SpectralCurve, SpectralError, Which};
pub use su2::{su2_irrep, Triple};
