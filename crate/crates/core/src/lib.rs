#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annulus;
pub mod cantor;
pub mod chains;
pub mod error;
pub mod num;
pub mod suspension;

pub use error::{Error, Result};

pub type AnnulusMap = annulus::LiftedAnnulusMap<f64>;
pub type Profile = annulus::PlProfile<f64>;
pub type Stage = annulus::HakStage<f64>;
pub type Suspension = suspension::SuspensionSystem<f64>;
pub type Point = suspension::SuspensionPoint<f64>;
pub type ExactChain = chains::ChainCover<num::Rational>;
pub type ExactMap = chains::PLMap<num::Rational>;
