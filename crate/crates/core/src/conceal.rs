//! Whole-image concealment.
//!
//! Lost blocks are visited in raster order. Each block is extrapolated from
//! an area centred on it, the model is written into the lost samples, and
//! those samples become "reconstructed" support (weighted by `delta`) for the
//! blocks that follow.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::{self, FilterResponse};
use crate::image::Image;
use crate::patterns::{LossMask, SampleState};
use crate::spectral::{BlockRect, ExtrapolationArea, Extrapolator, IterationConfig};
use crate::weighting::{AreaClass, RadialDecay};

/// Value written into a lost block whose area holds no usable samples.
pub const ISOLATED_FILL: f64 = 128.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fse,
    Xfse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcealConfig {
    pub block_size: usize,
    pub area_size: usize,
    /// Transform size; the area is zero-weight padded up to it. `None` uses `area_size`.
    pub transform_size: Option<usize>,
    pub method: Method,
    pub iterations: usize,
    pub gamma: f64,
    pub rho_hat: f64,
    pub delta: f64,
    pub filter_gain: f64,
    pub filter_f0: f64,
    /// Use the unit response even for [`Method::Xfse`].
    pub unit_filter: bool,
    pub gamma_on_residual: bool,
}

impl Default for ConcealConfig {
    fn default() -> Self {
        Self {
            block_size: 16,
            area_size: 48,
            transform_size: None,
            method: Method::Xfse,
            iterations: 1000,
            gamma: crate::spectral::DEFAULT_GAMMA,
            rho_hat: 0.8,
            delta: 0.5,
            filter_gain: filter::DEFAULT_GAIN,
            filter_f0: filter::DEFAULT_F0,
            unit_filter: false,
            gamma_on_residual: true,
        }
    }
}

impl ConcealConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn transform(&self) -> usize {
        self.transform_size.unwrap_or(self.area_size)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::Parameter("block size must be positive"));
        }
        if self.area_size <= self.block_size || (self.area_size - self.block_size) % 2 != 0 {
            return Err(Error::Parameter(
                "area size must exceed the block size by an even number of samples",
            ));
        }
        let transform = self.transform();
        if transform < self.area_size || (transform - self.area_size) % 2 != 0 {
            return Err(Error::Parameter(
                "transform size must be at least the area size with even padding",
            ));
        }
        Ok(())
    }

    fn filter(&self) -> Result<FilterResponse> {
        let t = self.transform();
        match self.method {
            Method::Xfse if !self.unit_filter => {
                filter::build_filter(t, t, self.filter_gain, self.filter_f0)
            }
            _ => Ok(filter::unit_filter(t, t)),
        }
    }
}

/// Top-left corner of a block in image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockOrigin {
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub origin: BlockOrigin,
    /// Model values over the block, clipped to the image, row-major.
    pub values: Vec<f64>,
    pub width: usize,
    pub height: usize,
    /// No usable samples in the area; `values` holds [`ISOLATED_FILL`].
    pub isolated: bool,
    pub weighted_error: f64,
    pub imag_residue: f64,
}

#[derive(Debug, Clone)]
pub struct Concealment {
    /// Concealed image; replaced samples are clamped to `[0, 255]`.
    pub image: Image,
    /// Working mask after the pass: no sample is left lost.
    pub mask: LossMask,
    pub blocks: usize,
    /// Blocks that fell back to [`ISOLATED_FILL`].
    pub isolated: Vec<BlockOrigin>,
    /// Final `E^{(ν)}` averaged over the extrapolated (non-isolated) blocks.
    pub mean_weighted_error: f64,
    pub max_imag_residue: f64,
}

/// Per-image concealment state shared by every block: configuration,
/// weight decay table, filter and transform plan.
#[derive(Debug, Clone)]
pub struct Concealer {
    cfg: ConcealConfig,
    width: usize,
    height: usize,
    size: usize,
    // Offset from the window origin to the block origin.
    reach: usize,
    pad: usize,
    decay: RadialDecay,
    iteration: IterationConfig,
    extrapolator: Extrapolator,
}

impl Concealer {
    pub fn new(cfg: &ConcealConfig, width: usize, height: usize) -> Result<Self> {
        cfg.validate()?;
        let size = cfg.transform();
        let pad = (size - cfg.area_size) / 2;
        let reach = pad + (cfg.area_size - cfg.block_size) / 2;
        let iteration = IterationConfig {
            max_iterations: cfg.iterations,
            gamma: cfg.gamma,
            filter: cfg.filter()?,
            gamma_on_residual: cfg.gamma_on_residual,
        };
        iteration.validate()?;
        if !(0.0..=1.0).contains(&cfg.delta) {
            return Err(Error::Parameter("delta must lie in [0, 1]"));
        }
        Ok(Self {
            cfg: cfg.clone(),
            width,
            height,
            size,
            reach,
            pad,
            decay: RadialDecay::new(size, size, cfg.rho_hat)?,
            iteration,
            extrapolator: Extrapolator::new(size, size),
        })
    }

    pub fn config(&self) -> &ConcealConfig {
        &self.cfg
    }

    pub fn iteration_config(&self) -> &IterationConfig {
        &self.iteration
    }

    /// Blocks holding at least one lost sample, in raster order.
    pub fn lost_blocks(&self, mask: &LossMask) -> Vec<BlockOrigin> {
        let bs = self.cfg.block_size;
        let mut blocks = Vec::new();
        for y in (0..self.height).step_by(bs) {
            for x in (0..self.width).step_by(bs) {
                let lost = (y..(y + bs).min(self.height)).any(|yy| {
                    (x..(x + bs).min(self.width)).any(|xx| mask.get(xx, yy) == SampleState::Lost)
                });
                if lost {
                    blocks.push(BlockOrigin { x, y });
                }
            }
        }
        blocks
    }

    /// Wavefront index. Blocks sharing an index never read each other's
    /// samples, and every block a block reads from that precedes it in raster
    /// order has a smaller index.
    pub fn wavefront(&self, origin: BlockOrigin) -> usize {
        let bs = self.cfg.block_size;
        let radius = self.reach.div_ceil(bs);
        (radius + 1) * (origin.y / bs) + origin.x / bs
    }

    pub fn assemble_area(
        &self,
        plane: &[f64],
        mask: &LossMask,
        origin: BlockOrigin,
    ) -> Result<ExtrapolationArea> {
        let size = self.size;
        let (area_lo, area_hi) = (self.pad, self.pad + self.cfg.area_size);
        let mut signal = vec![0.0; size * size];
        let mut classes = vec![AreaClass::Loss; size * size];
        for m in area_lo..area_hi {
            let Some(y) = (origin.y + m).checked_sub(self.reach).filter(|&y| y < self.height)
            else {
                continue;
            };
            for n in area_lo..area_hi {
                let Some(x) = (origin.x + n).checked_sub(self.reach).filter(|&x| x < self.width)
                else {
                    continue;
                };
                let i = m * size + n;
                match mask.get(x, y) {
                    SampleState::Lost => {}
                    SampleState::Known => {
                        classes[i] = AreaClass::Support;
                        signal[i] = plane[y * self.width + x];
                    }
                    SampleState::Reconstructed => {
                        classes[i] = AreaClass::Reconstructed;
                        signal[i] = plane[y * self.width + x];
                    }
                }
            }
        }
        let weights = self.decay.weights(&classes, self.cfg.delta)?;
        let bs = self.cfg.block_size;
        let block = BlockRect {
            top: self.reach,
            left: self.reach,
            height: bs.min(self.height - origin.y),
            width: bs.min(self.width - origin.x),
        };
        ExtrapolationArea::new(signal, classes, weights, block)
    }

    /// Extrapolates one block from the current state without modifying it.
    pub fn extrapolate_block(
        &self,
        plane: &[f64],
        mask: &LossMask,
        origin: BlockOrigin,
    ) -> Result<BlockOutcome> {
        let bs = self.cfg.block_size;
        let (width, height) = (bs.min(self.width - origin.x), bs.min(self.height - origin.y));
        let isolated = || BlockOutcome {
            origin,
            values: vec![ISOLATED_FILL; width * height],
            width,
            height,
            isolated: true,
            weighted_error: 0.0,
            imag_residue: 0.0,
        };
        let area = match self.assemble_area(plane, mask, origin) {
            Ok(area) => area,
            Err(Error::DegenerateArea) => return Ok(isolated()),
            Err(e) => return Err(e),
        };
        let model = match self.extrapolator.run(&area, &self.iteration) {
            Ok(model) => model,
            Err(Error::DegenerateArea) => return Ok(isolated()),
            Err(e) => return Err(e),
        };
        let mut values = Vec::with_capacity(width * height);
        for dy in 0..height {
            let start = (self.reach + dy) * self.size + self.reach;
            values.extend_from_slice(&model.samples[start..start + width]);
        }
        Ok(BlockOutcome {
            origin,
            values,
            width,
            height,
            isolated: false,
            weighted_error: model.final_error,
            imag_residue: model.imag_residue,
        })
    }

    /// Writes a block's model into its lost samples and marks them reconstructed.
    pub fn commit(&self, plane: &mut [f64], mask: &mut LossMask, outcome: &BlockOutcome) {
        let BlockOrigin { x, y } = outcome.origin;
        for dy in 0..outcome.height {
            for dx in 0..outcome.width {
                if mask.get(x + dx, y + dy) == SampleState::Lost {
                    plane[(y + dy) * self.width + x + dx] = outcome.values[dy * outcome.width + dx];
                    mask.set(x + dx, y + dy, SampleState::Reconstructed);
                }
            }
        }
    }

    fn check_inputs(&self, img: &Image, mask: &LossMask) -> Result<()> {
        if (img.width(), img.height()) != (self.width, self.height)
            || (mask.width(), mask.height()) != (self.width, self.height)
        {
            return Err(Error::Dimension("image and mask sizes differ"));
        }
        if mask.lost_count() == 0 {
            return Err(Error::NothingToConceal);
        }
        Ok(())
    }

    /// Sequential raster-order pass.
    pub fn conceal(&self, img: &Image, mask: &LossMask) -> Result<Concealment> {
        self.check_inputs(img, mask)?;
        let mut plane = img.samples().to_vec();
        let mut working = mask.clone();
        let blocks = self.lost_blocks(mask);
        let mut outcomes = Vec::with_capacity(blocks.len());
        for &origin in &blocks {
            let outcome = self.extrapolate_block(&plane, &working, origin)?;
            self.commit(&mut plane, &mut working, &outcome);
            outcomes.push(outcome);
        }
        self.finish(img, mask, plane, working, &outcomes)
    }

    /// Pass driven wave by wave. `run_wave` receives the blocks of one
    /// wavefront together with the current state and must return one outcome
    /// per block, each computed by [`Concealer::extrapolate_block`] against
    /// that state. The result equals [`Concealer::conceal`].
    pub fn conceal_wavefronts<F>(&self, img: &Image, mask: &LossMask, mut run_wave: F) -> Result<Concealment>
    where
        F: FnMut(&[BlockOrigin], &[f64], &LossMask) -> Result<Vec<BlockOutcome>>,
    {
        self.check_inputs(img, mask)?;
        let mut plane = img.samples().to_vec();
        let mut working = mask.clone();
        let mut blocks = self.lost_blocks(mask);
        blocks.sort_by_key(|b| (self.wavefront(*b), b.y, b.x));
        let mut outcomes = Vec::with_capacity(blocks.len());
        for wave in blocks.chunk_by(|a, b| self.wavefront(*a) == self.wavefront(*b)) {
            let results = run_wave(wave, &plane, &working)?;
            if results.len() != wave.len() {
                return Err(Error::Dimension("wave executor returned the wrong number of blocks"));
            }
            for outcome in results {
                self.commit(&mut plane, &mut working, &outcome);
                outcomes.push(outcome);
            }
        }
        outcomes.sort_by_key(|o| (o.origin.y, o.origin.x));
        self.finish(img, mask, plane, working, &outcomes)
    }

    fn finish(
        &self,
        img: &Image,
        original: &LossMask,
        plane: Vec<f64>,
        working: LossMask,
        outcomes: &[BlockOutcome],
    ) -> Result<Concealment> {
        let samples = plane
            .iter()
            .zip(img.samples())
            .zip(original.states())
            .map(|((&model, &known), state)| match state {
                SampleState::Lost => model.clamp(0.0, 255.0),
                _ => known,
            })
            .collect();
        let extrapolated: Vec<&BlockOutcome> = outcomes.iter().filter(|o| !o.isolated).collect();
        let mean_weighted_error = if extrapolated.is_empty() {
            0.0
        } else {
            extrapolated.iter().map(|o| o.weighted_error).sum::<f64>() / extrapolated.len() as f64
        };
        Ok(Concealment {
            image: Image::new(self.width, self.height, samples)?,
            mask: working,
            blocks: outcomes.len(),
            isolated: outcomes.iter().filter(|o| o.isolated).map(|o| o.origin).collect(),
            mean_weighted_error,
            max_imag_residue: outcomes.iter().map(|o| o.imag_residue).fold(0.0, f64::max),
        })
    }
}

pub fn conceal_image(img: &Image, mask: &LossMask, cfg: &ConcealConfig) -> Result<Concealment> {
    Concealer::new(cfg, img.width(), img.height())?.conceal(img, mask)
}

pub fn assemble_area(
    img: &Image,
    mask: &LossMask,
    origin: BlockOrigin,
    cfg: &ConcealConfig,
) -> Result<ExtrapolationArea> {
    Concealer::new(cfg, img.width(), img.height())?.assemble_area(img.samples(), mask, origin)
}
