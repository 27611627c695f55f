//! Frequency selective extrapolation for concealing lost image blocks.
//!
//! The crate is `no_std` and only needs `alloc`. It contains the whole
//! numerical pipeline: area weighting, the low-pass residual filter used by
//! the XFSE variant, the frequency-domain pursuit iteration, block-loss
//! patterns, the whole-image concealment driver and PSNR evaluation.
//! File formats, timing and the command line live in the `fse` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

pub mod conceal;
pub mod fft;
pub mod filter;
pub mod image;
pub mod metrics;
pub mod patterns;
pub mod spectral;
pub mod weighting;

pub use conceal::{conceal_image, BlockOrigin, ConcealConfig, Concealer, Concealment, Method};
pub use error::{Error, Result};
pub use filter::FilterResponse;
pub use image::Image;
pub use metrics::{psnr, sweep, SweepRecord};
pub use patterns::{gen_mask, loss_rate, mask_from_image, LossMask, PatternKind, PatternSpec, SampleState};
pub use spectral::{ExtrapolationArea, IterationConfig, SpectralModel};
pub use weighting::{AreaClass, WeightGrid, WeightSpectrum};

pub use num_complex::Complex64;
