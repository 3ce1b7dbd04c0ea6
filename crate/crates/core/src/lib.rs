//! Symbolic-numeric checks for three-dimensional path geometries with
//! constant torsion and their dispersionless Lax pairs.

pub mod error;
pub mod invariants;
pub mod jetfield;
pub mod lambdacollect;
pub mod laxlab;
pub mod suite;
pub mod symcore;
pub mod verify;

pub use error::{Error, Result};
