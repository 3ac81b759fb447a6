//! Pseudo-suspension of a Cantor system over a lifted annulus map.

mod checks;
mod entropy;
mod system;

pub use checks::{Ball, DenseBounds, DenseWitness, MIN_CLOUD};
pub use entropy::{EntropyBracket, ProductReport, ProductRow, DEFAULT_BUDGET};
pub use system::{SuspensionPoint, SuspensionSystem};
