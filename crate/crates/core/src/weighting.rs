//! Spatial weighting of an extrapolation area and its transform.
//!
//! Known samples decay exponentially with their distance to the area centre,
//! previously concealed samples get the same decay scaled by `delta`, and lost
//! samples get weight zero.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::{ComplexGrid, Dft2d};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AreaClass {
    /// Originally received sample.
    Support,
    /// Unknown sample, excluded from the model fit.
    Loss,
    /// Sample concealed while processing an earlier block.
    Reconstructed,
}

/// `rho_hat^d` for every position of a `rows × cols` area, where `d` is the
/// distance to `((rows-1)/2, (cols-1)/2)`.
#[derive(Debug, Clone)]
pub struct RadialDecay {
    rows: usize,
    cols: usize,
    rho_hat: f64,
    decay: Vec<f64>,
}

impl RadialDecay {
    pub fn new(rows: usize, cols: usize, rho_hat: f64) -> Result<Self> {
        if !(rho_hat > 0.0 && rho_hat < 1.0) {
            return Err(Error::Parameter("rho_hat must lie in (0, 1)"));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("area dimensions must be positive"));
        }
        let (cm, cn) = ((rows as f64 - 1.0) / 2.0, (cols as f64 - 1.0) / 2.0);
        let mut decay = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            for n in 0..cols {
                let d = libm::hypot(m as f64 - cm, n as f64 - cn);
                decay.push(libm::pow(rho_hat, d));
            }
        }
        Ok(Self { rows, cols, rho_hat, decay })
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.decay
    }

    /// Weights for a classified area.
    pub fn weights(&self, classes: &[AreaClass], delta: f64) -> Result<WeightGrid> {
        if classes.len() != self.rows * self.cols {
            return Err(Error::Dimension("class grid does not match the area size"));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Parameter("delta must lie in [0, 1]"));
        }
        let values = classes
            .iter()
            .zip(&self.decay)
            .map(|(class, &d)| match class {
                AreaClass::Support => d,
                AreaClass::Reconstructed => delta * d,
                AreaClass::Loss => 0.0,
            })
            .collect();
        Ok(WeightGrid { rows: self.rows, cols: self.cols, values, rho_hat: self.rho_hat, delta })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightGrid {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    rho_hat: f64,
    delta: f64,
}

impl WeightGrid {
    /// Wraps an explicit non-negative weight grid, e.g. for synthetic tests.
    pub fn from_values(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::Dimension("weight grid does not match rows × cols"));
        }
        if values.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Parameter("weights must be finite and non-negative"));
        }
        Ok(Self { rows, cols, values, rho_hat: f64::NAN, delta: f64::NAN })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, m: usize, n: usize) -> f64 {
        self.values[m * self.cols + n]
    }

    /// Decay base, `NaN` for grids built with [`WeightGrid::from_values`].
    pub fn rho_hat(&self) -> f64 {
        self.rho_hat
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Builds the weight grid for a classified `rows × cols` area.
pub fn build_weights(
    classes: &[AreaClass],
    rows: usize,
    cols: usize,
    rho_hat: f64,
    delta: f64,
) -> Result<WeightGrid> {
    RadialDecay::new(rows, cols, rho_hat)?.weights(classes, delta)
}

/// Unnormalized forward transform of the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpectrum {
    spectrum: ComplexGrid,
}

impl WeightSpectrum {
    #[inline]
    pub fn grid(&self) -> &ComplexGrid {
        &self.spectrum
    }

    /// `W(0,0)`, the sum of all weights.
    #[inline]
    pub fn dc(&self) -> f64 {
        self.spectrum[(0, 0)].re
    }
}

pub fn weight_spectrum(weights: &WeightGrid) -> WeightSpectrum {
    weight_spectrum_with(&Dft2d::new(weights.rows, weights.cols), weights)
}

pub fn weight_spectrum_with(dft: &Dft2d, weights: &WeightGrid) -> WeightSpectrum {
    let mut spectrum = dft.forward_real(&weights.values);
    // The DC bin of a real grid is real; pin it to the exact weight sum.
    spectrum[(0, 0)] = num_complex::Complex64::new(weights.total(), 0.0);
    WeightSpectrum { spectrum }
}
