//! Direct numerical evaluation of the loss channel as a Gaussian convolution
//! in phase space:
//!
//! ```text
//! W_ε(λ) = 2/(πε) ∫ d²λ' W_0(λ') exp(−2|λ − √η λ'|² / ε)
//! ```
//!
//! Tensor-product trapezoid rule over a square covering the support of
//! `W_0`. For smooth, Gaussian-localised integrands the trapezoid rule
//! converges geometrically, so two successive halvings of the step are a
//! reliable error estimate.

use super::{CatParams, NoiseParam, PhasePoint};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Absolute agreement required between two successive refinements.
    pub tol: f64,
    /// Margin added to the cat amplitude to get the domain half-width.
    pub margin: f64,
    /// Upper limit on the initial grid step.
    pub max_step: f64,
    /// Number of step halvings attempted before giving up.
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            margin: 6.0,
            max_step: 0.2,
            max_refinements: 3,
        }
    }
}

/// Convolves the pure cat Wigner function with the loss kernel.
///
/// Requires ε ∈ (0, 1]; the kernel degenerates into a delta at ε = 0.
pub fn convolve_wigner_quadrature(
    cat: &CatParams,
    noise: NoiseParam,
    lam: PhasePoint,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let half_width = cat.alpha().abs() + cfg.margin;
    convolve_quadrature(|p| super::cat_wigner(cat, p), half_width, noise, lam, cfg)
}

/// Convolves an arbitrary Wigner function supported (to numerical
/// precision) in `[−half_width, half_width]²` with the loss kernel.
pub fn convolve_quadrature<F>(
    wigner: F,
    half_width: f64,
    noise: NoiseParam,
    lam: PhasePoint,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(PhasePoint) -> f64,
{
    let eps = noise.epsilon();
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon", "quadrature needs epsilon > 0"));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::invalid(
            "half_width",
            format!("must be positive, got {half_width}"),
        ));
    }
    let sqrt_eta = noise.eta().sqrt();

    // Kernel standard deviation in λ' coordinates; infinite at ε = 1.
    let kernel_sigma = if sqrt_eta > 0.0 {
        0.5 * eps.sqrt() / sqrt_eta
    } else {
        f64::INFINITY
    };
    let step = cfg.max_step.min(0.8 * kernel_sigma);
    let mut points = ((2.0 * half_width / step).ceil() as usize).max(16);

    let integrand = |p: PhasePoint| {
        let dx = lam.re - sqrt_eta * p.re;
        let dy = lam.im - sqrt_eta * p.im;
        wigner(p) * (-2.0 * (dx * dx + dy * dy) / eps).exp()
    };

    let mut coarse = trapezoid_2d(&integrand, half_width, points);
    let mut difference = f64::INFINITY;
    for _ in 0..cfg.max_refinements {
        points *= 2;
        let fine = trapezoid_2d(&integrand, half_width, points);
        difference = (fine - coarse).abs() * 2.0 / (PI * eps);
        if difference <= cfg.tol {
            return Ok(2.0 / (PI * eps) * fine);
        }
        coarse = fine;
    }
    Err(Error::QuadratureNonConvergence {
        difference,
        target: cfg.tol,
    })
}

fn trapezoid_2d<F>(f: &F, half_width: f64, intervals: usize) -> f64
where
    F: Fn(PhasePoint) -> f64,
{
    let h = 2.0 * half_width / intervals as f64;
    let node = |i: usize| -half_width + h * i as f64;
    let weight = |i: usize| if i == 0 || i == intervals { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for i in 0..=intervals {
        let x = node(i);
        let mut row = 0.0;
        for j in 0..=intervals {
            row += weight(j) * f(PhasePoint::new(x, node(j)));
        }
        total += weight(i) * row;
    }
    total * h * h
}
