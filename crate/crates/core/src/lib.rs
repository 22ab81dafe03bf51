//! Exact quench dynamics of the Lipkin-Meshkov-Glick model in the maximal
//! spin sector, with basis-dependent rugosity diagnostics.

pub mod compensated;
pub mod diagnostics;
mod error;
pub mod spectral;
pub mod spin;
pub mod texture;

pub use error::{Error, Result};
