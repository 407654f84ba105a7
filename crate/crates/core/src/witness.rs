//! Gaussian-hull bound and the non-Gaussianity witness
//!
//! ```text
//! Δ = W[U ρ_ε U†](0) − (2/π)·exp(−2 n̄(n̄ + 1)),   n̄ = Tr[U ρ_ε U† a†a]
//! ```
//!
//! with `U = D(iβ) S(s)` and `S(s)† a S(s) = μ a + ν a†` (μ = cosh s,
//! ν = sinh s). Δ < 0 rules out every mixture of Gaussian states.

use crate::error::{Error, Result};
use crate::phase_space::{
    evolved_moments, initial_moments, lossy_cat_log_vacuum_ratio_imag, lossy_cat_wigner, CatParams,
    Moments, NoiseParam, PhasePoint,
};
use crate::TWO_OVER_PI;
use serde::{Deserialize, Serialize};

/// Auxiliary Gaussian unitary `D(iβ) S(s)`: squeeze first, then displace
/// along the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GaussianOp {
    pub s: f64,
    pub beta: f64,
}

impl GaussianOp {
    pub const IDENTITY: GaussianOp = GaussianOp { s: 0.0, beta: 0.0 };

    pub const fn new(s: f64, beta: f64) -> Self {
        Self { s, beta }
    }

    pub const fn squeeze(s: f64) -> Self {
        Self { s, beta: 0.0 }
    }

    pub fn mu(&self) -> f64 {
        self.s.cosh()
    }

    pub fn nu(&self) -> f64 {
        self.s.sinh()
    }

    /// The point mapped onto the origin by the op's phase-space action.
    ///
    /// The op sends λ to `μλ + νλ* + iβ`; solving for the origin gives
    /// `λ* = −iβ·e^{s}`.
    pub fn origin_preimage(&self) -> PhasePoint {
        PhasePoint::new(0.0, -self.beta * self.s.exp())
    }
}

/// One evaluation of the witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub alpha: f64,
    pub xi: f64,
    pub epsilon: f64,
    pub op: GaussianOp,
    /// Origin Wigner value after the op.
    pub w0: f64,
    /// Mean photon number after the op.
    pub nbar_op: f64,
    pub bound: f64,
    pub delta: f64,
}

/// Lower bound on `W(0)` over the Gaussian convex hull at mean photon number
/// `nbar`.
pub fn hull_bound(nbar: f64) -> Result<f64> {
    if !(nbar >= 0.0) {
        return Err(Error::invalid(
            "nbar",
            format!("must be non-negative, got {nbar}"),
        ));
    }
    Ok(TWO_OVER_PI * (-2.0 * nbar * (nbar + 1.0)).exp())
}

/// Mean photon number of `D(iβ) S(s) ρ S(s)† D(iβ)†`.
///
/// The cross term between the displacement and `⟨a⟩` vanishes because `⟨a⟩`
/// is real for real-amplitude cats.
pub fn op_photon_number(m: Moments, op: GaussianOp) -> f64 {
    let (mu, nu) = (op.mu(), op.nu());
    (mu * mu + nu * nu) * m.nbar + 2.0 * mu * nu * m.a2 + nu * nu + op.beta * op.beta
}

pub fn op_wigner_origin(cat: &CatParams, noise: NoiseParam, op: GaussianOp) -> f64 {
    lossy_cat_wigner(cat, noise, op.origin_preimage())
}

pub fn witness_delta(cat: &CatParams, noise: NoiseParam, op: GaussianOp) -> WitnessReport {
    let moments = evolved_moments(initial_moments(cat), noise);
    let nbar_op = op_photon_number(moments, op);
    // Non-negative by construction: (μ²+ν²)n̄ + 2μν⟨a²⟩ ≥ (|μ|−|ν|)²n̄ ≥ 0
    // whenever |⟨a²⟩| ≤ n̄, which holds for every state.
    let bound = TWO_OVER_PI * (-2.0 * nbar_op * (nbar_op + 1.0)).exp();
    let w0 = op_wigner_origin(cat, noise, op);
    WitnessReport {
        alpha: cat.alpha(),
        xi: cat.xi(),
        epsilon: noise.epsilon(),
        op,
        w0,
        nbar_op,
        bound,
        delta: w0 - bound,
    }
}

/// `ln W(0) − ln(bound)` after the op; `−∞` where `W(0) ≤ 0`.
///
/// Has the same sign as Δ everywhere but neither underflows nor cancels.
/// With `p = βe^{s}` the preimage height, `x = sinh(2s)/2` and
/// `d = cosh(2s)·n̄_ε + sinh(2s)·⟨a²⟩_ε` the photons above the squeezed
/// vacuum,
///
/// ```text
/// n̄(n̄ + 1) − p² = (x − β²)² + d·(cosh 2s + d + 2β²)
/// ```
///
/// exactly, so the Gaussian parts of `ln W` and `ln bound`, which can be
/// hundreds while their difference is ~1e-12, never meet in a subtraction.
/// The vacuum saturates the bound on the curve `β² = x`.
pub fn witness_log_margin(cat: &CatParams, noise: NoiseParam, op: GaussianOp) -> f64 {
    let m = evolved_moments(initial_moments(cat), noise);
    let (c2, s2) = ((2.0 * op.s).cosh(), (2.0 * op.s).sinh());
    let b2 = op.beta * op.beta;
    let excess = c2 * m.nbar + s2 * m.a2;
    let gap = 0.5 * s2 - b2;
    let photon_term = gap * gap + excess * (c2 + excess + 2.0 * b2);
    match lossy_cat_log_vacuum_ratio_imag(cat, noise, op.origin_preimage().im) {
        Some(r) => r + 2.0 * photon_term,
        None => f64::NEG_INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hull_bound_examples() {
        assert_abs_diff_eq!(hull_bound(0.0).unwrap(), TWO_OVER_PI, epsilon = 0.0);
        assert_abs_diff_eq!(
            hull_bound(1.0).unwrap(),
            TWO_OVER_PI * (-4.0f64).exp(),
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(
            hull_bound(0.5).unwrap(),
            TWO_OVER_PI * (-1.5f64).exp(),
            epsilon = 1e-16
        );
        assert!(hull_bound(-1e-3).is_err());
        assert!(hull_bound(f64::NAN).is_err());
    }

    #[test]
    fn hull_bound_strictly_decreasing() {
        let values: Vec<f64> = (0..200)
            .map(|k| hull_bound(k as f64 * 0.01).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn photon_number_reductions() {
        let m = Moments { nbar: 0.8, a2: 0.3 };
        assert_eq!(op_photon_number(m, GaussianOp::IDENTITY), 0.8);
        let vac = Moments { nbar: 0.0, a2: 0.0 };
        assert_abs_diff_eq!(
            op_photon_number(vac, GaussianOp::squeeze(1.0)),
            1.0f64.sinh().powi(2),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            op_photon_number(m, GaussianOp::new(0.0, 0.7)),
            0.8 + 0.49,
            epsilon = 1e-15
        );
        // β = 0 is the squeezed-odd-cat expression term by term.
        let s: f64 = 0.37;
        let (mu, nu) = (s.cosh(), s.sinh());
        assert_abs_diff_eq!(
            op_photon_number(m, GaussianOp::squeeze(s)),
            (mu * mu + nu * nu) * 0.8 + 2.0 * mu * nu * 0.3 + nu * nu,
            epsilon = 1e-15
        );
    }

    #[test]
    fn squeezing_leaves_origin_fixed() {
        let cat = CatParams::even(1.2).unwrap();
        let noise = NoiseParam::new(0.35).unwrap();
        let w = op_wigner_origin(&cat, noise, GaussianOp::IDENTITY);
        for &s in &[-1.5, -0.3, 0.2, 1.9] {
            assert_abs_diff_eq!(
                op_wigner_origin(&cat, noise, GaussianOp::squeeze(s)),
                w,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn large_displacement_kills_origin_value() {
        let cat = CatParams::even(1.0).unwrap();
        let w = op_wigner_origin(&cat, NoiseParam::identity(), GaussianOp::new(0.0, 40.0));
        assert_eq!(w, 0.0);
    }

    #[test]
    fn vacuum_saturates_bound() {
        for &eps in &[0.0, 0.3, 1.0] {
            let r = witness_delta(
                &CatParams::vacuum(),
                NoiseParam::new(eps).unwrap(),
                GaussianOp::IDENTITY,
            );
            assert_eq!(r.delta, 0.0);
            assert_eq!(r.delta, r.w0 - r.bound);
        }
    }

    #[test]
    fn pure_odd_cat_identity_delta() {
        let r = witness_delta(
            &CatParams::odd(1.0).unwrap(),
            NoiseParam::identity(),
            GaussianOp::IDENTITY,
        );
        let coth = 1.0 / 1.0f64.tanh();
        let expected = -TWO_OVER_PI * (1.0 + (-2.0 * coth * (coth + 1.0)).exp());
        assert_abs_diff_eq!(r.delta, expected, epsilon = 1e-14);
        assert!(r.delta < 0.0);
    }

    #[test]
    fn log_margin_has_sign_of_delta() {
        let cat = CatParams::even(0.6).unwrap();
        for &eps in &[0.1, 0.5, 0.6, 0.9] {
            let noise = NoiseParam::new(eps).unwrap();
            for &(s, beta) in &[(0.0, 0.0), (0.5, 0.9), (0.2, 0.4), (-0.3, 1.2)] {
                let op = GaussianOp::new(s, beta);
                let d = witness_delta(&cat, noise, op).delta;
                let m = witness_log_margin(&cat, noise, op);
                assert_eq!(d < 0.0, m < 0.0, "eps={eps} op={op:?} delta={d} margin={m}");
                if m.is_finite() {
                    let r = witness_delta(&cat, noise, op);
                    assert_abs_diff_eq!(m, (r.w0 / r.bound).ln(), epsilon = 1e-10);
                }
            }
        }
    }
}
