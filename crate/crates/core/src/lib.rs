//! Exact q-series arithmetic, Wronskians of modular invariant spaces,
//! symmetric-power differential operators and supersingular polynomials.

pub mod detmod;
pub mod error;
pub mod etaprod;
pub mod modpoly;
pub mod par;
pub mod partitions;
pub mod poly;
pub mod qseries;
pub mod rat;
pub mod ssing;
pub mod symmpow;
pub mod verify;
pub mod wronskian;

pub use error::{Error, Result};
pub use qseries::QSeries;
