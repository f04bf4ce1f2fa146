//! Exact enumeration of fertility fibres of decorated rooted trees.
//!
//! The fertility map sends a decorated rooted tree to the multi-index that
//! counts its vertices by (decoration, fertility - 1). This crate counts the
//! trees over a given multi-index in several ways (labelled, weighted by
//! automorphisms, up to isomorphism), solves the generating-series equations
//! those counts satisfy, and computes the coefficients of the lowering
//! derivation that appear in the coproduct of the multi-index Hopf algebra.
//! Every quantity has an independent brute-force route in [`oracle`].

pub mod arith;
pub mod coproduct;
pub mod error;
pub mod lowering;
pub mod multiindex;
#[doc(hidden)]
pub mod mutation;
pub mod oracle;
pub mod ordinary;
pub mod series;
pub mod trees;
pub mod weighted;

pub use arith::Rational;
pub use error::{Error, Result};
pub use multiindex::{find_shift, Alphabet, Decoration, MultiIndex, ShiftResult, Slot};
pub use series::TruncatedSeries;
pub use trees::DecoratedTree;
