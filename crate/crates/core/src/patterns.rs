//! Block-loss masks and the per-sample support/loss/reconstructed states.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleState {
    Known,
    Lost,
    /// Concealed earlier in the current pass. Never stored on disk.
    Reconstructed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossMask {
    width: usize,
    height: usize,
    states: Vec<SampleState>,
}

impl LossMask {
    pub fn all_known(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension("mask width and height must be positive"));
        }
        Ok(Self { width, height, states: vec![SampleState::Known; width * height] })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn states(&self) -> &[SampleState] {
        &self.states
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> SampleState {
        self.states[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, state: SampleState) {
        self.states[y * self.width + x] = state;
    }

    /// Marks the `size × size` block at `(x, y)` lost, clipped to the mask.
    pub fn mark_block_lost(&mut self, x: usize, y: usize, size: usize) {
        for yy in y..(y + size).min(self.height) {
            for xx in x..(x + size).min(self.width) {
                self.set(xx, yy, SampleState::Lost);
            }
        }
    }

    pub fn lost_count(&self) -> usize {
        self.states.iter().filter(|&&s| s == SampleState::Lost).count()
    }

    /// Renders the on-disk form: lost as 0, everything else as 255.
    pub fn to_image(&self) -> Image {
        let samples = self
            .states
            .iter()
            .map(|s| if *s == SampleState::Lost { 0.0 } else { 255.0 })
            .collect();
        Image::new(self.width, self.height, samples).expect("mask dimensions are valid")
    }

    /// Number of full blocks and how many of them are entirely lost.
    pub fn block_loss(&self, block_size: usize) -> (usize, usize) {
        let (bw, bh) = (self.width / block_size, self.height / block_size);
        let mut lost = 0;
        for by in 0..bh {
            for bx in 0..bw {
                let all_lost = (0..block_size).all(|dy| {
                    (0..block_size).all(|dx| {
                        self.get(bx * block_size + dx, by * block_size + dy) == SampleState::Lost
                    })
                });
                lost += usize::from(all_lost);
            }
        }
        (bw * bh, lost)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// Isolated blocks, about 25% of all full blocks.
    Dispersed,
    /// Block checkerboard, 50% of all full blocks.
    Consecutive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternSpec {
    pub kind: PatternKind,
    pub block_size: usize,
    /// `None` gives the canonical grid. A seed randomizes the dispersed
    /// grid's phases while keeping its rate and isolation.
    pub seed: Option<u64>,
}

impl PatternSpec {
    pub fn new(kind: PatternKind) -> Self {
        Self { kind, block_size: 16, seed: None }
    }
}

/// Generates a block-aligned loss mask. Partial border blocks are never lost.
///
/// The dispersed pattern loses every other block in every other block row,
/// with the column phase alternating between lossy rows, so lost blocks are
/// never edge-adjacent. The consecutive pattern is a checkerboard at block
/// granularity.
pub fn gen_mask(spec: &PatternSpec, width: usize, height: usize) -> Result<LossMask> {
    let bs = spec.block_size;
    if bs == 0 {
        return Err(Error::Parameter("block size must be positive"));
    }
    if width < bs || height < bs {
        return Err(Error::Dimension("image is smaller than one block"));
    }
    let mut mask = LossMask::all_known(width, height)?;
    let (blocks_x, blocks_y) = (width / bs, height / bs);

    let mut rng = spec.seed.map(SplitMix64::new);
    let row_parity = rng.as_mut().map_or(0, |r| (r.next() & 1) as usize);

    for by in 0..blocks_y {
        // Column phase of a lossy row; alternates unless randomized.
        let lossy_row = (by + row_parity) % 2 == 0;
        let col_phase = match rng.as_mut() {
            Some(r) if lossy_row => (r.next() & 1) as usize,
            _ => ((by + row_parity) / 2) % 2,
        };
        for bx in 0..blocks_x {
            let lost = match spec.kind {
                PatternKind::Consecutive => (bx + by) % 2 == 0,
                PatternKind::Dispersed => lossy_row && (bx + col_phase) % 2 == 0,
            };
            if lost {
                mask.mark_block_lost(bx * bs, by * bs, bs);
            }
        }
    }
    Ok(mask)
}

/// Interprets an on-disk mask: 0 is lost, 255 is known.
pub fn mask_from_image(mask_img: &Image) -> Result<LossMask> {
    let mut mask = LossMask::all_known(mask_img.width(), mask_img.height())?;
    for y in 0..mask_img.height() {
        for x in 0..mask_img.width() {
            let value = mask_img.get(x, y);
            if value == 0.0 {
                mask.set(x, y, SampleState::Lost);
            } else if value != 255.0 {
                return Err(Error::MaskValue { x, y, value });
            }
        }
    }
    Ok(mask)
}

/// Fraction of samples that are lost.
pub fn loss_rate(mask: &LossMask) -> f64 {
    mask.lost_count() as f64 / (mask.width * mask.height) as f64
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        Self(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}
