//! Cantor-set homeomorphisms given symbolically: full shifts, subshifts of
//! finite type, primitive substitution subshifts and mixed-radix odometers.

mod analysis;
mod sequence;
mod system;

pub use analysis::{
    agreement_radius, cantor_metric, entropy_exact, first_mismatch, mixing_witness_symbolic, recurrence_profile,
    spectral_radius, EntropyValue, Gap,
};
pub use sequence::{Extension, Symbol, SymbolSequence};
pub use system::{Adjacency, CantorKind, CantorSystem, DEFAULT_RADIUS};
