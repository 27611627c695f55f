//! Frequency-domain pursuit over an extrapolation area.
//!
//! The model is a sparse sum of 2D Fourier basis functions
//! `φ_{k,l}(m,n) = e^{2πj(km/M + ln/N)} / (MN)`. Each iteration picks the bin
//! with the largest (optionally low-pass weighted) decrease of the weighted
//! residual energy, adds a damped projection coefficient to the model and
//! updates the weighted residual spectrum in place. Nothing is transformed
//! inside the loop; one forward transform seeds the residual and one inverse
//! transform synthesizes the final model.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{ComplexGrid, Dft2d};
use crate::filter::{self, folded_frequency, FilterResponse};
use crate::weighting::{weight_spectrum_with, AreaClass, WeightGrid, WeightSpectrum};

/// Near-equal selection scores within this relative band count as ties.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Iteration stops once the best decrease falls below this fraction of the
/// initial weighted energy.
pub const EARLY_EXIT_RATIO: f64 = 1e-12;

pub const DEFAULT_GAMMA: f64 = 0.25;

/// Region of the area that is written back into the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

#[derive(Debug, Clone)]
pub struct ExtrapolationArea {
    rows: usize,
    cols: usize,
    signal: Vec<f64>,
    classes: Vec<AreaClass>,
    weights: WeightGrid,
    block: BlockRect,
}

impl ExtrapolationArea {
    pub fn new(
        signal: Vec<f64>,
        classes: Vec<AreaClass>,
        weights: WeightGrid,
        block: BlockRect,
    ) -> Result<Self> {
        let (rows, cols) = (weights.rows(), weights.cols());
        if signal.len() != rows * cols || classes.len() != rows * cols {
            return Err(Error::Dimension("area signal, classes and weights differ in size"));
        }
        if block.top + block.height > rows || block.left + block.width > cols {
            return Err(Error::Dimension("block lies outside the extrapolation area"));
        }
        if signal.iter().any(|s| !s.is_finite()) {
            return Err(Error::Parameter("area signal must be finite"));
        }
        let loss_weighted = classes
            .iter()
            .zip(weights.values())
            .any(|(c, &w)| *c == AreaClass::Loss && w != 0.0);
        if loss_weighted {
            return Err(Error::Parameter("lost samples must have zero weight"));
        }
        if classes.iter().all(|c| *c == AreaClass::Loss) {
            return Err(Error::DegenerateArea);
        }
        Ok(Self { rows, cols, signal, classes, weights, block })
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
    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    #[inline]
    pub fn classes(&self) -> &[AreaClass] {
        &self.classes
    }

    #[inline]
    pub fn weights(&self) -> &WeightGrid {
        &self.weights
    }

    #[inline]
    pub fn block(&self) -> BlockRect {
        self.block
    }

    /// `Σ w·s²`, the weighted energy of the initial residual.
    pub fn initial_energy(&self) -> f64 {
        self.signal.iter().zip(self.weights.values()).map(|(s, w)| w * s * s).sum()
    }
}

#[derive(Debug, Clone)]
pub struct IterationConfig {
    pub max_iterations: usize,
    /// Orthogonality deficiency compensation, applied to every projection.
    pub gamma: f64,
    pub filter: FilterResponse,
    /// Damp the residual update by `gamma` as well as the coefficient update.
    /// `false` subtracts the full projection from the residual.
    pub gamma_on_residual: bool,
}

impl IterationConfig {
    /// Plain FSE: unit filter.
    pub fn fse(rows: usize, cols: usize, max_iterations: usize) -> Self {
        Self {
            max_iterations,
            gamma: DEFAULT_GAMMA,
            filter: filter::unit_filter(rows, cols),
            gamma_on_residual: true,
        }
    }

    /// XFSE with the default low-pass response.
    pub fn xfse(rows: usize, cols: usize, max_iterations: usize) -> Result<Self> {
        Ok(Self {
            filter: filter::build_filter(rows, cols, filter::DEFAULT_GAIN, filter::DEFAULT_F0)?,
            ..Self::fse(rows, cols, max_iterations)
        })
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::Parameter("at least one iteration is required"));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Parameter("gamma must lie in (0, 1]"));
        }
        Ok(())
    }

    #[inline]
    fn residual_step(&self) -> f64 {
        if self.gamma_on_residual {
            self.gamma
        } else {
            1.0
        }
    }
}

/// Model coefficients and the weighted residual spectrum `R_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    coeffs: ComplexGrid,
    residual: ComplexGrid,
    iteration: usize,
}

impl SpectralModel {
    /// Starts from an explicit residual spectrum with an empty model.
    pub fn from_residual(residual: ComplexGrid) -> Self {
        let coeffs = ComplexGrid::zeros(residual.rows(), residual.cols());
        Self { coeffs, residual, iteration: 0 }
    }

    #[inline]
    pub fn coeffs(&self) -> &ComplexGrid {
        &self.coeffs
    }

    #[inline]
    pub fn residual(&self) -> &ComplexGrid {
        &self.residual
    }

    #[inline]
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    #[inline]
    fn bins(&self) -> usize {
        self.residual.rows() * self.residual.cols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub u: usize,
    pub v: usize,
    pub delta_e: f64,
}

/// Picks the bin maximizing `|R_w(k,l)·H(k,l)|² / W(0,0)`.
///
/// Scores within [`TIE_TOLERANCE`] of the maximum are tied; ties go to the
/// lowest folded radial frequency, then to the lexicographically smallest bin.
pub fn select_basis(model: &SpectralModel, filter: &FilterResponse, w00: f64) -> Selection {
    let residual = model.residual.as_slice();
    let score = |i: usize| {
        let power = residual[i].norm_sqr();
        if filter.is_unit() {
            power
        } else {
            power * filter.squared()[i]
        }
    };

    let mut best = 0.0f64;
    for i in 0..residual.len() {
        let s = score(i);
        if s > best {
            best = s;
        }
    }

    let (rows, cols) = (model.residual.rows(), model.residual.cols());
    let radius = |i: usize| {
        let (fk, fl) = (folded_frequency(i / cols, rows), folded_frequency(i % cols, cols));
        fk * fk + fl * fl
    };
    let threshold = best * (1.0 - TIE_TOLERANCE);
    let mut chosen = 0usize;
    let mut chosen_radius = f64::INFINITY;
    for i in 0..residual.len() {
        if score(i) >= threshold {
            let r = radius(i);
            // Indices ascend, so strict comparison keeps the lexicographic tie-break.
            if r < chosen_radius {
                chosen = i;
                chosen_radius = r;
            }
        }
    }
    Selection { u: chosen / cols, v: chosen % cols, delta_e: score(chosen) / w00 }
}

/// `Δc = MN·R_w(u,v)·H(u,v) / W(0,0)`.
pub fn project_coefficient(
    model: &SpectralModel,
    u: usize,
    v: usize,
    filter: &FilterResponse,
    w00: f64,
) -> Complex64 {
    let bins = model.bins() as f64;
    let projected = model.residual[(u, v)] * (bins / w00);
    if filter.is_unit() {
        projected
    } else {
        projected * filter.at(u, v)
    }
}

/// Adds `γ·Δc` to `c(u,v)` and subtracts the matching shifted weight
/// spectrum, `step·Δc·W(k-u, l-v)/(MN)`, from every residual bin.
pub fn update_model(
    model: &mut SpectralModel,
    u: usize,
    v: usize,
    delta_c: Complex64,
    weights: &WeightSpectrum,
    cfg: &IterationConfig,
) {
    let (rows, cols) = (model.residual.rows(), model.residual.cols());
    model.coeffs[(u, v)] += delta_c * cfg.gamma;

    let step = delta_c * (cfg.residual_step() / (rows * cols) as f64);
    let w = weights.grid();
    for k in 0..rows {
        let w_row = w.row((k + rows - u) % rows);
        let r_row = model.residual.row_mut(k);
        // Column offset (l - v) mod N, split at the wrap-around.
        let (head, tail) = r_row.split_at_mut(v);
        for (r, wv) in tail.iter_mut().zip(&w_row[..cols - v]) {
            *r -= step * wv;
        }
        for (r, wv) in head.iter_mut().zip(&w_row[cols - v..]) {
            *r -= step * wv;
        }
    }
    model.iteration += 1;
}

/// Running weighted residual energy `E^{(ν)}`, updated in closed form.
#[derive(Debug, Clone, Copy)]
pub struct ErrorTracker {
    energy: f64,
}

impl ErrorTracker {
    pub fn new(initial_energy: f64) -> Self {
        Self { energy: initial_energy }
    }

    #[inline]
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Accounts for subtracting `α·φ_{u,v}` from the residual, where `α` is
    /// the residual step actually applied. `residual_uv` is `R_w(u,v)` before
    /// the update.
    pub fn record(&mut self, residual_uv: Complex64, alpha: Complex64, bins: usize, w00: f64) {
        let bins = bins as f64;
        let cross = (alpha.conj() * residual_uv).re / bins;
        self.energy += -2.0 * cross + alpha.norm_sqr() * w00 / (bins * bins);
    }
}

#[derive(Debug, Clone)]
pub struct Extrapolation {
    /// Real part of the synthesized model, row-major over the area.
    pub samples: Vec<f64>,
    /// `max |Im g| / max |g|` before the imaginary part was dropped.
    pub imag_residue: f64,
    pub iterations: usize,
    pub initial_error: f64,
    pub final_error: f64,
}

/// Transform plan bundled with the iteration for one area size.
#[derive(Debug, Clone)]
pub struct Extrapolator {
    dft: Dft2d,
}

impl Extrapolator {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { dft: Dft2d::new(rows, cols) }
    }

    #[inline]
    pub fn dft(&self) -> &Dft2d {
        &self.dft
    }

    pub fn weight_spectrum(&self, weights: &WeightGrid) -> WeightSpectrum {
        weight_spectrum_with(&self.dft, weights)
    }

    /// `R_w^{(0)} = DFT(w ⊙ s)` with an empty model.
    pub fn init_model(&self, area: &ExtrapolationArea, weights: &WeightSpectrum) -> Result<SpectralModel> {
        if !(weights.dc() > 0.0) {
            return Err(Error::DegenerateArea);
        }
        let weighted: Vec<f64> =
            area.signal.iter().zip(area.weights.values()).map(|(s, w)| s * w).collect();
        Ok(SpectralModel::from_residual(self.dft.forward_real(&weighted)))
    }

    /// `g(m,n) = Σ c(k,l) φ_{k,l}(m,n)`.
    pub fn synthesize(&self, model: &SpectralModel) -> ComplexGrid {
        self.dft.inverse(&model.coeffs)
    }

    /// `E = Σ w·|r|²`, recovered from `R_w` by inverse transform.
    pub fn weighted_error(&self, model: &SpectralModel, weights: &WeightGrid) -> f64 {
        let weighted = self.dft.inverse(&model.residual);
        weighted
            .as_slice()
            .iter()
            .zip(weights.values())
            .filter(|(_, &w)| w > 0.0)
            .map(|(wr, &w)| wr.norm_sqr() / w)
            .sum()
    }

    pub fn run(&self, area: &ExtrapolationArea, cfg: &IterationConfig) -> Result<Extrapolation> {
        cfg.validate()?;
        if (area.rows, area.cols) != (self.dft.rows(), self.dft.cols())
            || (cfg.filter.rows(), cfg.filter.cols()) != (area.rows, area.cols)
        {
            return Err(Error::Dimension("area, filter and transform sizes differ"));
        }
        let spectrum = self.weight_spectrum(&area.weights);
        let mut model = self.init_model(area, &spectrum)?;
        let w00 = spectrum.dc();
        let initial_error = area.initial_energy();
        let floor = EARLY_EXIT_RATIO * initial_error;
        let mut tracker = ErrorTracker::new(initial_error);
        let bins = model.bins();

        for _ in 0..cfg.max_iterations {
            let sel = select_basis(&model, &cfg.filter, w00);
            if sel.delta_e <= floor {
                break;
            }
            let delta_c = project_coefficient(&model, sel.u, sel.v, &cfg.filter, w00);
            let residual_uv = model.residual[(sel.u, sel.v)];
            update_model(&mut model, sel.u, sel.v, delta_c, &spectrum, cfg);
            tracker.record(residual_uv, delta_c * cfg.residual_step(), bins, w00);
        }

        let g = self.synthesize(&model);
        let (mut peak, mut peak_imag) = (0.0f64, 0.0f64);
        for c in g.as_slice() {
            peak = peak.max(c.norm());
            peak_imag = peak_imag.max(c.im.abs());
        }
        Ok(Extrapolation {
            samples: g.as_slice().iter().map(|c| c.re).collect(),
            imag_residue: if peak > 0.0 { peak_imag / peak } else { 0.0 },
            iterations: model.iteration,
            initial_error,
            final_error: tracker.energy().max(0.0),
        })
    }
}

pub fn init_model(area: &ExtrapolationArea, weights: &WeightSpectrum) -> Result<SpectralModel> {
    Extrapolator::new(area.rows, area.cols).init_model(area, weights)
}

pub fn run_extrapolation(area: &ExtrapolationArea, cfg: &IterationConfig) -> Result<Extrapolation> {
    Extrapolator::new(area.rows, area.cols).run(area, cfg)
}

pub fn weighted_error(model: &SpectralModel, weights: &WeightGrid) -> f64 {
    Extrapolator::new(weights.rows(), weights.cols()).weighted_error(model, weights)
}
