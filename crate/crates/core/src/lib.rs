//! Finite-volume laboratory for magnetic Schrödinger operators: lattice
//! discretisation, dense spectral data, spectral shift functions and
//! alloy-type Wegner estimates.

pub mod disorder;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod numerics;
pub mod rng;
pub mod spectral;
pub mod ssf;
pub mod wegner;

pub use error::{Error, Result};
