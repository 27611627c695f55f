//! Std-side companion to `fse-core`: PGM files, sweep CSV output, timing,
//! and the wavefront-parallel concealment scheduler used by the `fse` binary.

pub mod csv;
pub mod parallel;
pub mod pgm;
pub mod timing;

mod error;

pub use error::{Error, Result};
