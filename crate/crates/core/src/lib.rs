//! Coincidences between k-generalized Lucas sequences.
//!
//! The crate computes the sequences exactly, encloses the dominant root of
//! their characteristic polynomial in certified balls, evaluates the height
//! and linear-forms-in-logarithms bounds that cap a hypothetical
//! coincidence, reduces those bounds with continued fractions, and finally
//! runs the brute-force searches that close each case.

pub mod bigseq;
pub mod charpoly;
mod decimal;
pub mod error;
pub mod linforms;
pub mod pipeline;
pub mod precreal;
pub mod reduction;

pub use error::{Error, Result};
