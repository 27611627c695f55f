//! Wavefront scheduling over worker threads.
//!
//! Blocks on one wavefront have disjoint read/write footprints (see
//! [`Concealer::wavefront`]), so they are extrapolated concurrently against
//! the same state and committed afterwards. The output is identical to the
//! sequential raster pass.

use std::num::NonZeroUsize;
use std::thread;

use fse_core::conceal::BlockOutcome;
use fse_core::{ConcealConfig, Concealer, Concealment, Image, LossMask};

use crate::Result;

pub fn conceal_parallel(
    img: &Image,
    mask: &LossMask,
    cfg: &ConcealConfig,
    threads: NonZeroUsize,
) -> Result<Concealment> {
    let concealer = Concealer::new(cfg, img.width(), img.height())?;
    if threads.get() == 1 {
        return Ok(concealer.conceal(img, mask)?);
    }
    let out = concealer.conceal_wavefronts(img, mask, |wave, plane, working| {
        let chunk = wave.len().div_ceil(threads.get()).max(1);
        thread::scope(|scope| {
            let handles: Vec<_> = wave
                .chunks(chunk)
                .map(|blocks| {
                    let concealer = &concealer;
                    scope.spawn(move || {
                        blocks
                            .iter()
                            .map(|&b| concealer.extrapolate_block(plane, working, b))
                            .collect::<fse_core::Result<Vec<BlockOutcome>>>()
                    })
                })
                .collect();
            let mut outcomes = Vec::with_capacity(wave.len());
            for h in handles {
                outcomes.extend(h.join().expect("worker thread panicked")?);
            }
            Ok(outcomes)
        })
    })?;
    Ok(out)
}
