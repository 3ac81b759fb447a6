//! Chain covers, patterns and interval horseshoes.
//!
//! Patterns and annular chain covers are exact over [`crate::num::Coord`];
//! with rationals, tautness and containment are decided without rounding.
//! The horseshoe extractor works on a piecewise-linear self-map of `[0,1]`
//! where closed intervals play the role of subcontinua: every itinerary word
//! must carry a non-empty interval of points following it under `g^m`.

mod cover;
mod horseshoe;
mod pattern;
mod plmap;
mod render;

pub use cover::{refine_chain, Axis, ChainCover, Rect};
pub use horseshoe::{
    fold_passes, horseshoe_extract, parse_links, stretch_check, HorseshoeCertificate, IntervalChain, Orientation,
    Stretch,
};
pub use pattern::{kfold, Pattern};
pub use plmap::{intersect_union, normalize_union, Interval, PLMap};
pub use render::{render_chains, RenderStyle};
