//! Exact computation of the destabilization invariant `eta_beta(D)` of log Fano
//! pairs, the Donaldson-Futaki coefficients of the basic log semi test
//! configuration, and an independent lattice-point oracle for toric surfaces.

pub mod builtins;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod stability;
pub mod toric;
pub mod zariski;

pub use error::{Error, Result};
