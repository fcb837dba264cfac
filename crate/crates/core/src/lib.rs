//! Exact computational tools for Dirac cohomology bookkeeping on
//! equal-rank real reductive groups.

pub mod error;
pub mod induction;
pub mod exact;
pub mod presets;
pub mod realform;
pub mod rootsys;
pub mod series;
pub mod spin;

pub use error::{Error, Result};
