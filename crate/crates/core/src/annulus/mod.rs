//! Lifted annulus maps on the strip `[0,1] x R`, rotation numbers, uniform
//! rigidity and HAK approximation schemes.

mod family;
mod hak;
mod map;
mod pl;
mod rotation;

pub use family::{parse_bits, rotation_family};
pub use hak::{hak_verify, toy_stages, HakCheck, HakReport, HakScheme, HakStage, SLACK};
pub use map::{annulus_distance, circle_distance, GridSampled, LiftedAnnulusMap, Primitive};
pub use pl::PlProfile;
pub use rotation::{
    conjugacy_invariance_check, cover_lift, displacement_bound, displacement_profile, rigidity_scan, rotation_estimate,
    sample_grid, ConjugacyReport, DisplacementTrack,
};
