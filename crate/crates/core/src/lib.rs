//! Extended affine Weyl group, Serre weight and local-model computations for GSp4.

pub mod adjacency;
pub mod admissible;
pub mod affine_weyl;
pub mod bm_cycles;
pub mod cli;
pub mod error;
pub mod gsp4_base;
pub mod local_model;
pub mod serre_weights;

pub use error::{Error, Result};
