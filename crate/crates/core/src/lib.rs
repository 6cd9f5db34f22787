//! Exact computation of seed patterns of cluster algebras: C-, G-, F- and
//! H-matrices, F-polynomials, their behaviour under mutation of the final
//! and of the initial seed, and mechanical checks of the identities that
//! relate them.
//!
//! Indices are 0-based in this library. The command-line and browser front
//! ends translate from the 1-based labels users type.

pub mod error;
pub mod initial_seed;
pub mod intmat;
pub mod poly;
pub mod principal_ext;
pub mod pattern;
pub mod semifield;
pub mod separation;
pub mod suite;
pub mod tables;

pub use error::{Error, Result};
pub use intmat::{ExchangeMatrix, IntMatrix};
pub use poly::SparsePoly;
