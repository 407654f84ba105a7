//! Closed-form phase-space description of cat states and of their evolution
//! through the pure-loss channel.
//!
//! A cat state `(|−α⟩ + ξ|α⟩)/N` is a sum of four coherent dyads. The loss
//! channel maps each dyad `|a⟩⟨b|` to `⟨b|a⟩^ε |√η a⟩⟨√η b|` (η = 1 − ε), so
//! the evolved Wigner function keeps the same four-term shape with shrunken
//! centres `±α√η` and an interference term damped by `exp(−2α²ε)`:
//!
//! ```text
//! W_ε(x + ip) = 2/(πN²) · [ e^{−2((x+A)²+p²)} + ξ² e^{−2((x−A)²+p²)}
//!                          + 2ξ e^{−2α²ε} e^{−2(x²+p²)} cos(4Ap) ],   A = α√η
//! ```
//!
//! The formula is regular at ε = 0 (identity channel) and collapses to the
//! vacuum at ε = 1.

mod quadrature;

pub use quadrature::{convolve_quadrature, convolve_wigner_quadrature, QuadratureConfig};

use crate::error::{Error, Result};
use crate::TWO_OVER_PI;
use serde::{Deserialize, Serialize};

/// Smallest admissible N². Below this the odd cat at α → 0 has no
/// meaningful normalisation.
pub const MIN_NORM_SQ: f64 = 1e-12;

/// Parameters of `(|−α⟩ + ξ|α⟩)/N` with real α and ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    alpha: f64,
    xi: f64,
    norm: f64,
}

impl CatParams {
    pub fn new(alpha: f64, xi: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid(
                "alpha",
                format!("must be finite, got {alpha}"),
            ));
        }
        if !xi.is_finite() {
            return Err(Error::invalid("xi", format!("must be finite, got {xi}")));
        }
        let norm_sq = Self::norm_sq_of(alpha, xi);
        if !(norm_sq >= MIN_NORM_SQ) {
            return Err(Error::Degenerate { alpha, xi, norm_sq });
        }
        Ok(Self {
            alpha,
            xi,
            norm: norm_sq.sqrt(),
        })
    }

    /// Odd cat, ξ = −1.
    pub fn odd(alpha: f64) -> Result<Self> {
        Self::new(alpha, -1.0)
    }

    /// Even cat, ξ = +1.
    pub fn even(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn vacuum() -> Self {
        Self {
            alpha: 0.0,
            xi: 1.0,
            norm: 2.0,
        }
    }

    fn norm_sq_of(alpha: f64, xi: f64) -> f64 {
        // 1 + ξ² + 2ξe^{−2α²}, rearranged so the odd-cat cancellation is exact.
        (1.0 + xi).powi(2) + 2.0 * xi * (-2.0 * alpha * alpha).exp_m1()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm * self.norm
    }
}

/// Loss parameter ε = 1 − e^{−γt} of the pure-loss channel.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct NoiseParam(f64);

impl NoiseParam {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::invalid(
                "epsilon",
                format!("must lie in [0, 1], got {epsilon}"),
            ));
        }
        Ok(Self(epsilon))
    }

    pub const fn identity() -> Self {
        Self(0.0)
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }

    /// Transmissivity η = 1 − ε.
    pub fn eta(self) -> f64 {
        1.0 - self.0
    }

    /// Loss equivalent to applying `self` and then `other`.
    pub fn compose(self, other: NoiseParam) -> NoiseParam {
        NoiseParam(1.0 - self.eta() * other.eta())
    }
}

/// Phase-space point λ = re + i·im.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub re: f64,
    pub im: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// First- and second-order photon moments entering the witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// ⟨a†a⟩
    pub nbar: f64,
    /// ⟨a²⟩, real for real-amplitude cats.
    pub a2: f64,
}

pub fn cat_wigner(cat: &CatParams, lam: PhasePoint) -> f64 {
    lossy_cat_wigner(cat, NoiseParam::identity(), lam)
}

/// `(e^{−2A²}, e^{−2α²ε} − e^{−2A²})` with the difference free of
/// cancellation when the two exponents are close.
fn dyad_weights(alpha: f64, noise: NoiseParam) -> (f64, f64) {
    let a2 = alpha * alpha;
    let cross = (-2.0 * a2 * noise.eta()).exp();
    let gap = 2.0 * a2 * (noise.eta() - noise.epsilon());
    let excess = if gap.abs() <= 1.0 {
        cross * gap.exp_m1()
    } else {
        (-2.0 * a2 * noise.epsilon()).exp() - cross
    };
    (cross, excess)
}

/// Written as `(u + ξv)² + 2ξ e^{−2|λ|²} (…)` with `u, v` the square roots of
/// the two Gaussian lobes. Expanding the square recovers the four-term form;
/// this arrangement keeps full relative precision for odd cats at small α,
/// where the lobes and the fringe nearly cancel.
pub fn lossy_cat_wigner(cat: &CatParams, noise: NoiseParam, lam: PhasePoint) -> f64 {
    let xi = cat.xi;
    let shrunk = cat.alpha * noise.eta().sqrt();
    let (cross, excess) = dyad_weights(cat.alpha, noise);
    let (x, p) = (lam.re, lam.im);
    let p2 = p * p;

    let u = (-((x + shrunk).powi(2) + p2)).exp();
    let v = (-((x - shrunk).powi(2) + p2)).exp();
    let kick = 2.0 * x * shrunk;
    let u_minus_v = if kick.abs() <= 20.0 {
        -2.0 * (-(x * x + shrunk * shrunk + p2)).exp() * kick.sinh()
    } else {
        u - v
    };
    let lobes = u_minus_v + (1.0 + xi) * v;

    let theta = 4.0 * shrunk * p;
    let half = (0.5 * theta).sin();
    let fringe = excess * theta.cos() - 2.0 * cross * half * half;

    TWO_OVER_PI / cat.norm_sq() * (lobes * lobes + 2.0 * xi * (-2.0 * (x * x + p2)).exp() * fringe)
}

/// `ln[W_ε(i·p) / ((2/π)e^{−2p²})]`, the log of the Wigner function on the
/// imaginary axis relative to the vacuum; `None` where `W` is not positive.
///
/// The ratio is `1 + D/N²` with
///
/// ```text
/// D = ((1−ξ)² − 2ξ·expm1(−2α²ε))·expm1(−2A²) − 4ξ e^{−2α²ε} sin²(2Ap)
/// ```
///
/// Every term of `D` vanishes as the state approaches the vacuum, so the
/// logarithm keeps full relative precision there.
pub fn lossy_cat_log_vacuum_ratio_imag(cat: &CatParams, noise: NoiseParam, p: f64) -> Option<f64> {
    let xi = cat.xi;
    let a2 = cat.alpha * cat.alpha;
    let shrunk = cat.alpha * noise.eta().sqrt();
    let kept = -2.0 * a2 * noise.epsilon();
    let half = (2.0 * shrunk * p).sin();
    let lobes = ((1.0 - xi).powi(2) - 2.0 * xi * kept.exp_m1()) * (-2.0 * shrunk * shrunk).exp_m1();
    let ratio = (lobes - 4.0 * xi * kept.exp() * half * half) / cat.norm_sq();
    (ratio > -1.0).then(|| ratio.ln_1p())
}

/// `ln W_ε(i·p)`, or `None` where the Wigner function is not positive.
///
/// Stays finite long after `W` itself underflows.
pub fn lossy_cat_log_wigner_imag(cat: &CatParams, noise: NoiseParam, p: f64) -> Option<f64> {
    lossy_cat_log_vacuum_ratio_imag(cat, noise, p).map(|r| TWO_OVER_PI.ln() - 2.0 * p * p + r)
}

pub fn initial_moments(cat: &CatParams) -> Moments {
    let a2 = cat.alpha * cat.alpha;
    let xi = cat.xi;
    // 1 + ξ² − 2ξe^{−2α²}
    let numer = (1.0 - xi).powi(2) - 2.0 * xi * (-2.0 * a2).exp_m1();
    Moments {
        nbar: a2 * numer / cat.norm_sq(),
        a2,
    }
}

pub fn evolved_moments(m0: Moments, noise: NoiseParam) -> Moments {
    let eta = noise.eta();
    Moments {
        nbar: eta * m0.nbar,
        a2: eta * m0.a2,
    }
}
