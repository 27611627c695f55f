use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Single-channel luminance image with real-valued samples, row-major.
///
/// Samples from 8-bit sources lie in `[0, 255]`; values outside that range
/// are tolerated (a model may overshoot) and are clamped only when the image
/// is quantized for output.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension("image width and height must be positive"));
        }
        if samples.len() != width * height {
            return Err(Error::Dimension("sample count does not match width × height"));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::Parameter("image samples must be finite"));
        }
        Ok(Self { width, height, samples })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| f64::from(b)).collect())
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
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.samples[y * self.width + x] = value;
    }

    /// 8-bit levels: round to nearest (ties away from zero), then clamp to `[0, 255]`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.samples.iter().map(|&s| quantize(s)).collect()
    }

    /// The image as it would be stored on disk.
    pub fn quantized(&self) -> Image {
        let samples = self.samples.iter().map(|&s| f64::from(quantize(s))).collect();
        Image { width: self.width, height: self.height, samples }
    }
}

#[inline]
pub(crate) fn quantize(sample: f64) -> u8 {
    libm::round(sample).clamp(0.0, 255.0) as u8
}
