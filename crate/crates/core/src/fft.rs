//! Two-dimensional discrete Fourier transforms on small grids.
//!
//! Forward transforms are unnormalized, `X(k,l) = Σ x(m,n) e^{-2πj(km/M + ln/N)}`,
//! and the inverse carries the `1/(MN)` factor. With that convention the
//! projection coefficient of a basis function is `MN·R(k,l)/W(0,0)` and the
//! residual update uses `W(k-u, l-v)/(MN)`.
//!
//! Lengths are factored into primes and transformed with a recursive
//! mixed-radix Cooley-Tukey scheme, so any size works; the usual
//! extrapolation area sizes (48, 64) only have factors 2 and 3.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major complex grid with `rows × cols` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension("complex grid length does not match rows × cols"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Dimension("real grid length does not match rows × cols"));
        }
        let data = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_vec(rows, cols, data)
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
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.cols..(k + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, k: usize) -> &mut [Complex64] {
        &mut self.data[k * self.cols..(k + 1) * self.cols]
    }
}

impl Index<(usize, usize)> for ComplexGrid {
    type Output = Complex64;

    #[inline]
    fn index(&self, (k, l): (usize, usize)) -> &Complex64 {
        &self.data[k * self.cols + l]
    }
}

impl IndexMut<(usize, usize)> for ComplexGrid {
    #[inline]
    fn index_mut(&mut self, (k, l): (usize, usize)) -> &mut Complex64 {
        &mut self.data[k * self.cols + l]
    }
}

/// Precomputed 1D forward transform of a fixed length.
#[derive(Debug, Clone)]
pub struct Fft1d {
    len: usize,
    factors: Vec<usize>,
    // e^{-2πj i/len}
    twiddles: Vec<Complex64>,
    max_radix: usize,
}

impl Fft1d {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let factors = factorize(len);
        let max_radix = factors.iter().copied().max().unwrap_or(1);
        let twiddles = (0..len)
            .map(|i| {
                let phase = -2.0 * core::f64::consts::PI * (i as f64) / (len as f64);
                Complex64::new(libm::cos(phase), libm::sin(phase))
            })
            .collect();
        Self { len, factors, twiddles, max_radix }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Forward transform of `input` into `output`. Both must have `len()` entries.
    pub fn forward(&self, input: &[Complex64], output: &mut [Complex64]) {
        assert_eq!(input.len(), self.len);
        assert_eq!(output.len(), self.len);
        if self.len == 1 {
            output[0] = input[0];
            return;
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.max_radix];
        self.work(output, input, 0, 1, &self.factors, 1, &mut scratch);
    }

    #[allow(clippy::too_many_arguments)]
    fn work(
        &self,
        out: &mut [Complex64],
        input: &[Complex64],
        offset: usize,
        stride: usize,
        factors: &[usize],
        tw_stride: usize,
        scratch: &mut [Complex64],
    ) {
        let radix = factors[0];
        let m = out.len() / radix;
        if m == 1 {
            for (q, slot) in out.iter_mut().enumerate() {
                *slot = input[offset + q * stride];
            }
        } else {
            for q in 0..radix {
                self.work(
                    &mut out[q * m..(q + 1) * m],
                    input,
                    offset + q * stride,
                    stride * radix,
                    &factors[1..],
                    tw_stride * radix,
                    scratch,
                );
            }
        }

        let n = self.len;
        // W_N^{tw_stride * m} is the radix-th root of unity at this level.
        let root_step = tw_stride * m;
        let scratch = &mut scratch[..radix];
        for k in 0..m {
            for (q, x) in scratch.iter_mut().enumerate() {
                *x = out[q * m + k] * self.twiddles[(q * k * tw_stride) % n];
            }
            if radix == 2 {
                out[k] = scratch[0] + scratch[1];
                out[m + k] = scratch[0] - scratch[1];
                continue;
            }
            for s in 0..radix {
                let mut acc = scratch[0];
                for (q, x) in scratch.iter().enumerate().skip(1) {
                    acc += *x * self.twiddles[(q * s * root_step) % n];
                }
                out[s * m + k] = acc;
            }
        }
    }
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            factors.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// Separable 2D transform for `rows × cols` grids.
#[derive(Debug, Clone)]
pub struct Dft2d {
    row_fft: Fft1d,
    col_fft: Fft1d,
}

impl Dft2d {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { row_fft: Fft1d::new(cols), col_fft: Fft1d::new(rows) }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.col_fft.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.row_fft.len()
    }

    /// Unnormalized forward transform.
    pub fn forward(&self, grid: &ComplexGrid) -> ComplexGrid {
        assert_eq!((grid.rows(), grid.cols()), (self.rows(), self.cols()));
        let (rows, cols) = (self.rows(), self.cols());
        let mut out = ComplexGrid::zeros(rows, cols);
        for k in 0..rows {
            self.row_fft.forward(grid.row(k), out.row_mut(k));
        }
        let mut column = vec![Complex64::new(0.0, 0.0); rows];
        let mut spectrum = vec![Complex64::new(0.0, 0.0); rows];
        for l in 0..cols {
            for (k, c) in column.iter_mut().enumerate() {
                *c = out[(k, l)];
            }
            self.col_fft.forward(&column, &mut spectrum);
            for (k, c) in spectrum.iter().enumerate() {
                out[(k, l)] = *c;
            }
        }
        out
    }

    /// Unnormalized forward transform of a real row-major grid.
    pub fn forward_real(&self, values: &[f64]) -> ComplexGrid {
        let grid = ComplexGrid::from_real(self.rows(), self.cols(), values)
            .expect("real grid must match the transform size");
        self.forward(&grid)
    }

    /// Inverse transform including the `1/(MN)` normalization.
    pub fn inverse(&self, spectrum: &ComplexGrid) -> ComplexGrid {
        let mut conj = spectrum.clone();
        conj.as_mut_slice().iter_mut().for_each(|c| *c = c.conj());
        let mut out = self.forward(&conj);
        let scale = 1.0 / (self.rows() * self.cols()) as f64;
        out.as_mut_slice().iter_mut().for_each(|c| *c = c.conj() * scale);
        out
    }
}
