//! Exact q-series engine and identity-verification harness.
//!
//! The crate expands both sides of Hecke-type q-series identities as
//! truncated formal series with exact rational (or two-parameter Laurent
//! polynomial) coefficients and asserts coefficientwise equality. A registry
//! catalogues the identities; a small CLI drives verification runs, partition
//! inequality checks, and series expansion.

pub mod cli;
pub mod error;
pub mod hecke;
pub mod hypergeom;
pub mod identities;
pub mod partitions;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
