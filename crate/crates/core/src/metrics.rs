//! Whole-image PSNR and iteration sweeps.

use alloc::vec::Vec;

use crate::conceal::{Concealer, ConcealConfig};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::patterns::LossMask;

/// `10·log10(255² / MSE)` over all samples; `+∞` for identical images.
pub fn psnr(reference: &Image, test: &Image) -> Result<f64> {
    if (reference.width(), reference.height()) != (test.width(), test.height()) {
        return Err(Error::Dimension("PSNR needs images of equal size"));
    }
    let sse: f64 = reference
        .samples()
        .iter()
        .zip(test.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let mse = sse / reference.samples().len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(255.0 * 255.0 / mse))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub iteration: usize,
    pub psnr: f64,
    /// Final weighted residual energy, mean over blocks.
    pub weighted_error: f64,
}

/// Conceals once per iteration count; PSNR is taken on the 8-bit output.
///
/// Blocks later in raster order reuse earlier reconstructions, so a longer
/// run is not a continuation of a shorter one and every grid point is a full
/// pass.
pub fn sweep(
    reference: &Image,
    mask: &LossMask,
    cfg: &ConcealConfig,
    grid: &[usize],
) -> Result<Vec<SweepRecord>> {
    if grid.is_empty() {
        return Err(Error::Parameter("iteration grid is empty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("iteration grid must be strictly ascending"));
    }
    grid.iter()
        .map(|&iterations| {
            let cfg = cfg.clone().with_iterations(iterations);
            let out = Concealer::new(&cfg, reference.width(), reference.height())?
                .conceal(reference, mask)?;
            Ok(SweepRecord {
                iteration: iterations,
                psnr: psnr(reference, &out.image.quantized())?,
                weighted_error: out.mean_weighted_error,
            })
        })
        .collect()
}
