//! Exact computations behind recognition by spectrum of finite simple
//! linear and unitary groups: integer and cyclotomic arithmetic, spectra,
//! prime graphs and exhaustive case verification.

pub mod caselab;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod gkgraph;
pub mod intarith;
pub mod polyring;
pub mod primpart;
pub mod report;
pub mod specgen;

pub use error::{Error, Result};
pub use polyring::Sign;
