//! Truncated Fock-space simulator used as an independent check of the
//! phase-space formulas.
//!
//! Nothing here reuses the coherent-dyad structure of the closed forms:
//! states are built from their number-basis amplitudes, loss is the
//! amplitude-damping Kraus sum, Gaussian unitaries are exponentials of
//! truncated generators, and Wigner values come from displaced parity.

mod ops;

pub use ops::{
    apply_gaussian_op, apply_unitary, displacement_matrix, gaussian_op_matrices, squeeze_matrix,
    GaussianUnitary, AUTO_LEAK_TARGET, MAX_AUTO_CUTOFF,
};

use crate::error::{Error, Result};
use crate::phase_space::{CatParams, NoiseParam, PhasePoint};
use crate::witness::GaussianOp;
use crate::TWO_OVER_PI;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Probability allowed to fall outside the cutoff before an operation fails.
pub const TAIL_THRESHOLD: f64 = 1e-10;

/// Extra levels carried while exponentiating generators.
pub const GUARD_BAND: usize = 15;

/// Minimum cutoff for a state whose photon number is about `m`:
/// `max(30, ⌈m + 8√m + 20⌉)`.
pub fn cutoff_rule(m: f64) -> usize {
    let m = m.max(0.0);
    ((m + 8.0 * m.sqrt() + 20.0).ceil() as usize).max(30)
}

/// Density matrix on `{|0⟩, …, |n_cut⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    rho: DMatrix<Complex64>,
    tail_mass: f64,
}

impl FockState {
    /// Wraps a density matrix, renormalising it when the missing trace is
    /// below [`TAIL_THRESHOLD`].
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::invalid(
                "rho",
                "density matrix must be square and non-empty",
            ));
        }
        let trace = rho.trace().re;
        Self::renormalised(rho, 1.0 - trace)
    }

    fn renormalised(mut rho: DMatrix<Complex64>, tail_mass: f64) -> Result<Self> {
        let n_cut = rho.nrows() - 1;
        if tail_mass > TAIL_THRESHOLD {
            return Err(Error::CutoffTooSmall {
                n_cut,
                tail_mass,
                threshold: TAIL_THRESHOLD,
            });
        }
        let trace = rho.trace().re;
        rho /= Complex64::new(trace, 0.0);
        Ok(Self {
            rho,
            tail_mass: tail_mass.max(0.0),
        })
    }

    pub fn vacuum(n_cut: usize) -> Self {
        let mut rho = DMatrix::zeros(n_cut + 1, n_cut + 1);
        rho[(0, 0)] = Complex64::new(1.0, 0.0);
        Self {
            rho,
            tail_mass: 0.0,
        }
    }

    pub fn number(n: usize, n_cut: usize) -> Result<Self> {
        if n > n_cut {
            return Err(Error::invalid("n", format!("{n} exceeds cutoff {n_cut}")));
        }
        let mut rho = DMatrix::zeros(n_cut + 1, n_cut + 1);
        rho[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            rho,
            tail_mass: 0.0,
        })
    }

    /// Thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64, n_cut: usize) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::invalid(
                "nbar",
                format!("must be non-negative, got {nbar}"),
            ));
        }
        let q = nbar / (1.0 + nbar);
        let mut rho = DMatrix::zeros(n_cut + 1, n_cut + 1);
        let mut p = 1.0 - q;
        for n in 0..=n_cut {
            rho[(n, n)] = Complex64::new(p, 0.0);
            p *= q;
        }
        let tail = q.powi(n_cut as i32 + 1);
        Self::renormalised(rho, tail)
    }

    /// Pure state from number-basis amplitudes; `tail_mass` is measured
    /// against unit norm.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        let psi = nalgebra::DVector::from_column_slice(amplitudes);
        let rho = &psi * psi.adjoint();
        Self::renormalised(rho, 1.0 - norm_sq)
    }

    pub fn n_cut(&self) -> usize {
        self.rho.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn population(&self, n: usize) -> f64 {
        if n < self.dim() {
            self.rho[(n, n)].re
        } else {
            0.0
        }
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_mn|² for Hermitian ρ.
        self.rho.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest entry of `|ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.rho.adjoint();
        (&self.rho - adj)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Copy of the state on a larger cutoff, padded with zeros.
    pub fn embed(&self, n_cut: usize) -> Self {
        let dim = n_cut + 1;
        if dim <= self.dim() {
            return self.clone();
        }
        let mut rho = DMatrix::zeros(dim, dim);
        rho.view_mut((0, 0), (self.dim(), self.dim()))
            .copy_from(&self.rho);
        Self {
            rho,
            tail_mass: self.tail_mass,
        }
    }
}

/// Number-basis amplitudes of the cat, built by recurrence:
/// `c_n = e^{−α²/2} ((−α)^n + ξα^n) / (N √n!)`.
pub fn cat_amplitudes(cat: &CatParams, n_cut: usize) -> Vec<Complex64> {
    let alpha = cat.alpha();
    let mut coherent = (-0.5 * alpha * alpha).exp();
    (0..=n_cut)
        .map(|n| {
            if n > 0 {
                coherent *= alpha / (n as f64).sqrt();
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(coherent * (sign + cat.xi()) / cat.norm(), 0.0)
        })
        .collect()
}

pub fn cat_fock(cat: &CatParams, n_cut: usize) -> Result<FockState> {
    FockState::pure(&cat_amplitudes(cat, n_cut))
}

/// Pure-loss channel as a Kraus sum,
/// `K_k = Σ_n √C(n,k) η^{(n−k)/2} ε^{k/2} |n−k⟩⟨n|`.
///
/// Kraus operators only lower the photon number, so the truncated map is
/// exactly trace preserving.
pub fn apply_loss(state: &FockState, noise: NoiseParam) -> FockState {
    let dim = state.dim();
    let eps = noise.epsilon();
    let eta = noise.eta();
    let binom = binomial_table(dim);
    let eta_pow: Vec<f64> = (0..dim).map(|m| eta.powf(0.5 * m as f64)).collect();
    let eps_pow: Vec<f64> = (0..dim).map(|k| eps.powi(k as i32)).collect();
    // Amplitude of the k-th Kraus operator from |m+k⟩ to |m⟩ (without ε^{k/2}).
    let kraus = |m: usize, k: usize| binom[m + k][k].sqrt() * eta_pow[m];

    let rho = state.rho();
    let out = DMatrix::from_fn(dim, dim, |m, n| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..dim - m.max(n) {
            let w = kraus(m, k) * kraus(n, k) * eps_pow[k];
            if w != 0.0 {
                acc += rho[(m + k, n + k)] * w;
            }
        }
        acc
    });
    FockState {
        rho: out,
        tail_mass: state.tail_mass,
    }
}

fn binomial_table(n: usize) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; n]; n];
    for i in 0..n {
        table[i][0] = 1.0;
        for k in 1..=i {
            table[i][k] = table[i - 1][k - 1] + if k < i { table[i - 1][k] } else { 0.0 };
        }
    }
    table
}

/// `W(0) = (2/π) Σ (−1)^n ρ_nn`.
pub fn parity_w0(state: &FockState) -> f64 {
    let alternating: f64 = (0..state.dim())
        .map(|n| {
            if n % 2 == 0 {
                state.population(n)
            } else {
                -state.population(n)
            }
        })
        .sum();
    TWO_OVER_PI * alternating
}

pub fn expectation_nbar(state: &FockState) -> f64 {
    (0..state.dim())
        .map(|n| n as f64 * state.population(n))
        .sum()
}

/// `Tr[ρ a²] = Σ_n √(n(n−1)) ρ_{n, n−2}`.
pub fn expectation_a2_complex(state: &FockState) -> Complex64 {
    (2..state.dim())
        .map(|n| state.rho[(n, n - 2)] * ((n * (n - 1)) as f64).sqrt())
        .sum()
}

/// Real part of `⟨a²⟩`; the imaginary part vanishes for real-amplitude cats.
pub fn expectation_a2(state: &FockState) -> f64 {
    expectation_a2_complex(state).re
}

/// `⟨a⟩ = Σ_n √n ρ_{n, n−1}`.
pub fn expectation_a(state: &FockState) -> Complex64 {
    (1..state.dim())
        .map(|n| state.rho[(n, n - 1)] * (n as f64).sqrt())
        .sum()
}

/// Photon number of `|√n̄ + |λ||²`, used to size the working space for a
/// displacement by λ.
fn displaced_photon_estimate(state: &FockState, lam: PhasePoint) -> f64 {
    (expectation_nbar(state).sqrt() + lam.norm_sq().sqrt()).powi(2)
}

/// Wigner function by displaced parity: shift the state by −λ and read the
/// origin value.
pub fn wigner_at(state: &FockState, lam: PhasePoint) -> Result<f64> {
    let n_work = state
        .n_cut()
        .max(cutoff_rule(displaced_photon_estimate(state, lam)));
    wigner_at_with_cutoff(state, lam, n_work)
}

/// As [`wigner_at`] with an explicit working cutoff.
pub fn wigner_at_with_cutoff(state: &FockState, lam: PhasePoint, n_work: usize) -> Result<f64> {
    let shift =
        GaussianUnitary::displacement(PhasePoint::new(-lam.re, -lam.im), n_work.max(state.n_cut()));
    let shifted = apply_unitary(state, &shift)?;
    Ok(parity_w0(&shifted))
}

/// Everything the witness needs, computed in the number basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockWitness {
    pub w0: f64,
    pub nbar: f64,
    pub bound: f64,
    pub delta: f64,
}

/// Evaluates the witness for `state` under `D(iβ)S(s)` entirely in the
/// number basis.
pub fn fock_witness(
    state: &FockState,
    op: GaussianOp,
    cutoff: Option<usize>,
) -> Result<FockWitness> {
    let transformed = apply_gaussian_op(state, op, cutoff)?;
    let w0 = parity_w0(&transformed);
    let nbar = expectation_nbar(&transformed);
    let bound = TWO_OVER_PI * (-2.0 * nbar * (nbar + 1.0)).exp();
    Ok(FockWitness {
        w0,
        nbar,
        bound,
        delta: w0 - bound,
    })
}

/// Lossy cat → Gaussian op → parity and photon number, with the cutoff taken
/// from the rule unless overridden.
pub fn fock_cat_witness(
    cat: &CatParams,
    noise: NoiseParam,
    op: GaussianOp,
    cutoff: Option<usize>,
) -> Result<FockWitness> {
    let n_cut = cutoff.unwrap_or_else(|| cutoff_rule(cat.alpha() * cat.alpha()));
    let state = apply_loss(&cat_fock(cat, n_cut)?, noise);
    fock_witness(&state, op, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cutoff_rule_values() {
        assert_eq!(cutoff_rule(0.0), 30);
        assert_eq!(cutoff_rule(16.0), 68);
        assert_eq!(cutoff_rule(100.0), 200);
    }

    #[test]
    fn vacuum_cat() {
        let s = cat_fock(&CatParams::vacuum(), 30).unwrap();
        assert_abs_diff_eq!(s.population(0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.purity(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn odd_cat_has_odd_support() {
        let s = cat_fock(&CatParams::odd(1.0).unwrap(), 40).unwrap();
        for n in (0..=40).step_by(2) {
            assert_eq!(s.population(n), 0.0);
        }
        assert!(s.tail_mass() < 1e-12);
    }

    #[test]
    fn even_cat_population_ratio() {
        let s = cat_fock(&CatParams::even(1.0).unwrap(), 40).unwrap();
        assert_abs_diff_eq!(s.population(2) / s.population(0), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn small_cutoff_reported() {
        let r = cat_fock(&CatParams::even(3.0).unwrap(), 10);
        assert!(matches!(r, Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn single_photon_damping() {
        let one = FockState::number(1, 30).unwrap();
        let noise = NoiseParam::new(0.3).unwrap();
        let out = apply_loss(&one, noise);
        assert_abs_diff_eq!(out.population(1), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(out.population(0), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(
            parity_w0(&out),
            TWO_OVER_PI * (2.0 * 0.3 - 1.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_loss_is_identity() {
        let s = cat_fock(&CatParams::odd(1.3).unwrap(), 40).unwrap();
        let out = apply_loss(&s, NoiseParam::identity());
        assert!((out.rho() - s.rho()).iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn loss_preserves_trace_and_hermiticity() {
        let s = cat_fock(&CatParams::new(1.7, 0.4).unwrap(), 50).unwrap();
        for &eps in &[0.1, 0.5, 0.93, 1.0] {
            let out = apply_loss(&s, NoiseParam::new(eps).unwrap());
            assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-12);
            assert!(out.hermiticity_error() < 1e-14);
            assert!((0..out.dim()).all(|n| out.population(n) >= -1e-14));
        }
    }

    #[test]
    fn parity_and_moments_of_simple_states() {
        let vac = FockState::vacuum(30);
        assert_abs_diff_eq!(parity_w0(&vac), TWO_OVER_PI, epsilon = 0.0);
        assert_eq!((expectation_nbar(&vac), expectation_a2(&vac)), (0.0, 0.0));
        let one = FockState::number(1, 30).unwrap();
        assert_abs_diff_eq!(parity_w0(&one), -TWO_OVER_PI, epsilon = 0.0);
        assert_eq!((expectation_nbar(&one), expectation_a2(&one)), (1.0, 0.0));
    }

    #[test]
    fn thermal_state() {
        let t = FockState::thermal(0.5, 60).unwrap();
        assert_abs_diff_eq!(expectation_nbar(&t), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(parity_w0(&t), TWO_OVER_PI / 2.0, epsilon = 1e-12);
        assert!(FockState::thermal(5.0, 30).is_err());
    }

    #[test]
    fn embed_pads_with_zeros() {
        let s = cat_fock(&CatParams::even(0.5).unwrap(), 30).unwrap();
        let big = s.embed(45);
        assert_eq!(big.n_cut(), 45);
        assert_eq!(big.population(40), 0.0);
        assert_abs_diff_eq!(big.trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn vacuum_wigner_by_displaced_parity() {
        let vac = FockState::vacuum(30);
        for &(x, p) in &[(0.0, 0.0), (0.3, -0.4), (1.1, 0.9)] {
            let lam = PhasePoint::new(x, p);
            let expected = TWO_OVER_PI * (-2.0 * lam.norm_sq()).exp();
            assert_abs_diff_eq!(wigner_at(&vac, lam).unwrap(), expected, epsilon = 1e-12);
        }
    }
}
