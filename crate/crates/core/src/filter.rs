//! Low-pass frequency response applied to the weighted residual in XFSE.
//!
//! The response is shaped after the average power spectrum of natural
//! images, compressed by a logarithm and normalized so that `H(0,0) = 1`:
//!
//! ```text
//! H(k,l) = ln[ G·f0/(2π) / (f0² + fk² + fl²)^{3/2} ] / ln[ G/(2π·f0²) ]
//! ```
//!
//! `fk = min(k, M-k)/M` and `fl = min(l, N-l)/N` are folded, signed
//! frequencies, which makes the response even on the DFT grid.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_GAIN: f64 = 292.9;
pub const DEFAULT_F0: f64 = 0.0098;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    /// `H ≡ 1`; the iteration skips the multiplication entirely (plain FSE).
    Unit,
    LowPass { gain_bits: u64, f0_bits: u64 },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterResponse {
    rows: usize,
    cols: usize,
    kind: FilterKind,
    response: Vec<f64>,
    squared: Vec<f64>,
}

impl FilterResponse {
    fn from_parts(rows: usize, cols: usize, kind: FilterKind, response: Vec<f64>) -> Self {
        let squared = response.iter().map(|h| h * h).collect();
        Self { rows, cols, kind, response, squared }
    }

    /// Arbitrary real non-negative response, always applied by multiplication.
    pub fn from_values(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::Dimension("filter grid does not match rows × cols"));
        }
        if values.iter().any(|h| !(h.is_finite() && *h >= 0.0)) {
            return Err(Error::Parameter("filter response must be finite and non-negative"));
        }
        Ok(Self::from_parts(rows, cols, FilterKind::Custom, values))
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
    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    #[inline]
    pub fn is_unit(&self) -> bool {
        self.kind == FilterKind::Unit
    }

    #[inline]
    pub fn at(&self, k: usize, l: usize) -> f64 {
        self.response[k * self.cols + l]
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.response
    }

    #[inline]
    pub(crate) fn squared(&self) -> &[f64] {
        &self.squared
    }

    /// Fractional bin along the `k` axis (`l = 0`, `k ≤ M/2`) where the response
    /// first drops below `level`, by linear interpolation between bins.
    pub fn axis_crossing(&self, level: f64) -> Option<f64> {
        let profile: Vec<f64> = (0..=self.rows / 2).map(|k| self.at(k, 0)).collect();
        profile.windows(2).enumerate().find_map(|(k, pair)| {
            let (hi, lo) = (pair[0], pair[1]);
            (hi >= level && lo < level).then(|| k as f64 + (hi - level) / (hi - lo))
        })
    }
}

/// Folded normalized frequency of bin `k` on a length-`len` axis.
#[inline]
pub fn folded_frequency(k: usize, len: usize) -> f64 {
    k.min(len - k) as f64 / len as f64
}

pub fn build_filter(rows: usize, cols: usize, gain: f64, f0: f64) -> Result<FilterResponse> {
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension("filter dimensions must be positive"));
    }
    if !(gain > 0.0 && gain.is_finite() && f0 > 0.0 && f0.is_finite()) {
        return Err(Error::Parameter("filter gain and bandwidth must be positive"));
    }
    let denominator = libm::log(gain / (2.0 * PI * f0 * f0));
    if !(denominator > 0.0) {
        return Err(Error::Parameter("filter normalization ln(G/(2π f0²)) must be positive"));
    }
    let numerator_scale = gain * f0 / (2.0 * PI);
    let f0_sq = f0 * f0;
    let mut response = vec![0.0; rows * cols];
    for k in 0..rows {
        let fk = folded_frequency(k, rows);
        for l in 0..cols {
            let fl = folded_frequency(l, cols);
            let h = if k == 0 && l == 0 {
                1.0
            } else {
                let radial = f0_sq + fk * fk + fl * fl;
                libm::log(numerator_scale / libm::pow(radial, 1.5)) / denominator
            };
            if !(h > 0.0) {
                return Err(Error::Parameter("filter response is not positive at every bin"));
            }
            response[k * cols + l] = h;
        }
    }
    let kind = FilterKind::LowPass { gain_bits: gain.to_bits(), f0_bits: f0.to_bits() };
    Ok(FilterResponse::from_parts(rows, cols, kind, response))
}

pub fn unit_filter(rows: usize, cols: usize) -> FilterResponse {
    FilterResponse::from_parts(rows, cols, FilterKind::Unit, vec![1.0; rows * cols])
}
