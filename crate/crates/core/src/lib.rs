//! Finite quantum mechanics on a circle with d α-uniformly distributed points.

pub mod cli;
pub mod deformed;
pub mod eigen;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod operators;
pub mod spectral;
pub mod verification;

pub use error::{Error, Result};
