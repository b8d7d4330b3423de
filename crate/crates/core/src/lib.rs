//! Realizability of branch data for branched coverings between closed surfaces.
//!
//! A branch datum fixes the cover and base surfaces, the degree and the local
//! degrees over each branching point. This crate checks the necessary
//! compatibility conditions, applies a battery of closed-form existence and
//! non-existence criteria, and falls back to an exhaustive permutation search
//! that either produces an explicit witness or certifies that none exists.

pub mod blocks;
pub mod catalog;
pub mod criteria;
pub mod datum;
pub mod dessin;
pub mod error;
pub mod partition;
pub mod perm;
pub mod realizer;
pub mod surface;
pub mod union_find;

pub use datum::{infer_cover, BranchDatum, CompatibilityReport, DatumError};
pub use error::ParseError;
pub use partition::{partitions_of, Partition};
pub use perm::{class_iterator, class_representative, compose, is_transitive, Permutation};
pub use surface::Surface;
