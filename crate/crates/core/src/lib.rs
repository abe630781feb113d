//! Numerical verification toolkit for Haar integrals over compact classical
//! groups, Berezin kernels on real, complex and quaternionic matrix balls, and
//! the Plancherel densities attached to them.

// `!(x > 0.0)` is the NaN-rejecting guard used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod berezin;
pub mod catalog;
pub mod compact;
pub mod error;
pub mod integrals;
pub mod ledger;
pub mod mc;
pub mod plancherel;
pub mod quadrature;
pub mod special;
pub mod stats;

pub use error::{Error, Result};

/// Library version, echoed in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
