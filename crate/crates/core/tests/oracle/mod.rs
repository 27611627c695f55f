//! Sample-domain reference for the pursuit iteration.
//!
//! Everything here is evaluated by direct summation over the area with
//! explicitly tabulated basis functions; no transform from the library is
//! used. It is quadratic in the number of samples, so keep instances small.

#![allow(dead_code)]

use std::f64::consts::PI;

use fse_core::weighting::build_weights;
use fse_core::{AreaClass, Complex64};
use rand::Rng;

pub struct Instance {
    pub rows: usize,
    pub cols: usize,
    pub signal: Vec<f64>,
    pub classes: Vec<AreaClass>,
    pub weights: Vec<f64>,
}

/// Random classes (at least one support sample), weights from random
/// `rho_hat`/`delta`, and signal values in `[0, 255)`; lost samples carry
/// garbage that a correct implementation must ignore.
pub fn random_instance<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Instance {
    let loss_rate = rng.gen_range(0.0..0.6);
    let mut classes: Vec<AreaClass> = (0..rows * cols)
        .map(|_| {
            let x: f64 = rng.gen();
            if x < loss_rate {
                AreaClass::Loss
            } else if x < loss_rate + 0.15 {
                AreaClass::Reconstructed
            } else {
                AreaClass::Support
            }
        })
        .collect();
    let keep = rng.gen_range(0..rows * cols);
    classes[keep] = AreaClass::Support;
    let rho = rng.gen_range(0.5..0.95);
    let delta = rng.gen_range(0.0..=1.0);
    let weights = build_weights(&classes, rows, cols, rho, delta).unwrap().values().to_vec();
    let signal = (0..rows * cols).map(|_| rng.gen_range(0.0..255.0)).collect();
    Instance { rows, cols, signal, classes, weights }
}

pub fn brute_dft(rows: usize, cols: usize, x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for k in 0..rows {
        for l in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..rows {
                for n in 0..cols {
                    let phase = -2.0
                        * PI
                        * (((k * m) % rows) as f64 / rows as f64
                            + ((l * n) % cols) as f64 / cols as f64);
                    acc += x[m * cols + n] * Complex64::from_polar(1.0, phase);
                }
            }
            out[k * cols + l] = acc;
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub u: usize,
    pub v: usize,
    pub delta_c: Complex64,
    pub delta_e: f64,
}

pub struct SpatialPursuit {
    pub rows: usize,
    pub cols: usize,
    /// `phi[(k*cols + l) * MN + m*cols + n] = φ_{k,l}(m,n)`.
    phi: Vec<Complex64>,
    pub weights: Vec<f64>,
    window: Vec<f64>,
    pub residual: Vec<Complex64>,
    pub coeffs: Vec<Complex64>,
    filter: Vec<f64>,
    gamma: f64,
    gamma_on_residual: bool,
}

impl SpatialPursuit {
    pub fn new(inst: &Instance, filter: Vec<f64>, gamma: f64) -> Self {
        let (rows, cols) = (inst.rows, inst.cols);
        let bins = rows * cols;
        let mut phi = Vec::with_capacity(bins * bins);
        for k in 0..rows {
            for l in 0..cols {
                for m in 0..rows {
                    for n in 0..cols {
                        let phase = 2.0
                            * PI
                            * (((k * m) % rows) as f64 / rows as f64
                                + ((l * n) % cols) as f64 / cols as f64);
                        phi.push(Complex64::from_polar(1.0 / bins as f64, phase));
                    }
                }
            }
        }
        let window: Vec<f64> =
            inst.classes.iter().map(|c| if *c == AreaClass::Loss { 0.0 } else { 1.0 }).collect();
        let residual = inst
            .signal
            .iter()
            .zip(&window)
            .map(|(s, b)| Complex64::new(s * b, 0.0))
            .collect();
        Self {
            rows,
            cols,
            phi,
            weights: inst.weights.clone(),
            window,
            residual,
            coeffs: vec![Complex64::new(0.0, 0.0); bins],
            filter,
            gamma,
            gamma_on_residual: true,
        }
    }

    pub fn undamped_residual(mut self) -> Self {
        self.gamma_on_residual = false;
        self
    }

    fn basis(&self, bin: usize) -> &[Complex64] {
        let bins = self.rows * self.cols;
        &self.phi[bin * bins..(bin + 1) * bins]
    }

    /// `Σ φ* w φ` for one bin.
    fn gram(&self, bin: usize) -> f64 {
        self.basis(bin).iter().zip(&self.weights).map(|(p, w)| w * p.norm_sqr()).sum()
    }

    /// Weighted projection coefficient of the residual on `φ_bin`, times `H`.
    pub fn coefficient(&self, bin: usize) -> Complex64 {
        let num: Complex64 = self
            .basis(bin)
            .iter()
            .zip(&self.residual)
            .zip(&self.weights)
            .map(|((p, r), w)| r * p.conj() * *w)
            .sum();
        num / self.gram(bin) * self.filter[bin]
    }

    /// `|Δc|² Σ φ* w φ` with the filtered coefficient.
    pub fn decrease(&self, bin: usize) -> f64 {
        self.coefficient(bin).norm_sqr() * self.gram(bin)
    }

    /// Exhaustive argmax with the library's tie rule.
    pub fn select(&self) -> (usize, usize, f64) {
        let bins = self.rows * self.cols;
        let scores: Vec<f64> = (0..bins).map(|b| self.decrease(b)).collect();
        let best = scores.iter().cloned().fold(0.0, f64::max);
        let radius = |b: usize| {
            let fk = (b / self.cols).min(self.rows - b / self.cols) as f64 / self.rows as f64;
            let fl = (b % self.cols).min(self.cols - b % self.cols) as f64 / self.cols as f64;
            fk * fk + fl * fl
        };
        let chosen = (0..bins)
            .filter(|&b| scores[b] >= best * (1.0 - 1e-10))
            .min_by(|&a, &b| radius(a).partial_cmp(&radius(b)).unwrap().then(a.cmp(&b)))
            .unwrap();
        (chosen / self.cols, chosen % self.cols, scores[chosen])
    }

    /// Applies `c(u,v) += γΔc` and `r ← (r − γΔc φ_{u,v})·b`.
    pub fn apply(&mut self, u: usize, v: usize, delta_c: Complex64) {
        let bin = u * self.cols + v;
        self.coeffs[bin] += delta_c * self.gamma;
        let step = if self.gamma_on_residual { delta_c * self.gamma } else { delta_c };
        let basis = self.basis(bin).to_vec();
        for ((r, p), b) in self.residual.iter_mut().zip(&basis).zip(&self.window) {
            *r = (*r - step * p) * *b;
        }
    }

    pub fn step(&mut self) -> Step {
        let (u, v, delta_e) = self.select();
        let delta_c = self.coefficient(u * self.cols + v);
        self.apply(u, v, delta_c);
        Step { u, v, delta_c, delta_e }
    }

    pub fn energy(&self) -> f64 {
        self.residual.iter().zip(&self.weights).map(|(r, w)| w * r.norm_sqr()).sum()
    }

    pub fn weighted_residual_spectrum(&self) -> Vec<Complex64> {
        let wr: Vec<Complex64> =
            self.residual.iter().zip(&self.weights).map(|(r, w)| r * *w).collect();
        brute_dft(self.rows, self.cols, &wr)
    }

    /// `g(m,n) = Σ c_{k,l} φ_{k,l}(m,n)`.
    pub fn model(&self) -> Vec<Complex64> {
        let bins = self.rows * self.cols;
        let mut g = vec![Complex64::new(0.0, 0.0); bins];
        for (bin, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (gv, p) in g.iter_mut().zip(self.basis(bin)) {
                *gv += c * p;
            }
        }
        g
    }
}

/// `|a − b| ≤ tol·max(1, |b|)`.
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}
