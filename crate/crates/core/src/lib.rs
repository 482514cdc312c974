//! Summation polynomials over binary fields, their Weil descent into
//! Boolean polynomial systems, and first fall degree computations.

pub mod boolpoly;
pub mod descent;
pub mod ecurve;
pub mod error;
pub mod experiment;
pub mod fieldalg;
pub mod firstfall;
pub mod groebner;
pub mod mpoly;
pub mod semaev;

pub use error::{Error, Result};
