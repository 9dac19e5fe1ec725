//! Generic monads over coordinate charts of the blown-up surface.

pub mod divisor;
pub mod monad;
pub mod sections;

pub use divisor::{BoundaryDivisor, Curve, DivisorClass};
pub use monad::{fiber, Block, Chart, ChartPoint, FiberBasis, MonadAtPoint, MonadError, ParamMonad};
pub use sections::{sections_on_line, splitting_type, Line, SectionSpace};
