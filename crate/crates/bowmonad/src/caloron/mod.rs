//! Caloron holomorphic data, its monads on P¹×P¹, and Nahm complexes on
//! the circle.

pub mod data;
pub mod generate;
pub mod monads;
pub mod nahm;

pub use data::{CaloronData, CaloronDataM0};
pub use monads::{big_monad, big_monad_m0, small_monad, small_monad_m0, BuildError};
pub use nahm::{from_nahm_complex, from_nahm_complex_m0, to_nahm_complex, to_nahm_complex_m0, NahmComplexCircle};
