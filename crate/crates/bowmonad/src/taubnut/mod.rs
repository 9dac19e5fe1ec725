//! Taub-NUT holomorphic data, the fused big monad on X, jumping lines and
//! bow complexes.

pub mod bow;
pub mod data;
pub mod generate;
pub mod jumping;
pub mod monads;

pub use bow::{from_bow_complex, from_bow_complex_m0, to_bow_complex, to_bow_complex_m0, BowComplex};
pub use data::{TaubNutData, TaubNutDataM0};
pub use jumping::{eta_zero_split, jumping_lines, jumping_lines_m0, EtaZeroSplit, JumpingLines};
pub use monads::{big_monad, big_monad_m0, compare_pushdown_psi, fused_monad, pushdown_psi_monad, pushdown_xi_monad, TnBlocks};
