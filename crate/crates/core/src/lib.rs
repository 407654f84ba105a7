//! Quantum non-Gaussianity witness for Schrödinger cat states sent through a
//! pure-loss bosonic channel.
//!
//! The crate is organised around four modules:
//!
//! * [`phase_space`]: closed-form Wigner functions of (lossy) cat states,
//!   their photon-number moments, and a direct quadrature of the loss
//!   convolution used as an oracle.
//! * [`witness`]: the Gaussian-hull bound on the origin Wigner value and the
//!   witness Δ after an auxiliary displacement and squeezing.
//! * [`optimize`]: optimal auxiliary operations and the largest loss at which
//!   the witness still fires.
//! * [`fock`]: an independent truncated Fock-space simulator that checks
//!   everything above.
//!
//! Wigner functions are normalised so that pure-state extrema are ±2/π; the
//! vacuum reads `(2/π)·exp(−2|λ|²)`, with `λ = x + i·p`.

// Negated comparisons double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod optimize;
pub mod phase_space;
pub mod witness;

pub use error::{Error, Result};
pub use optimize::{
    epsilon_max, optimize_displaced_squeeze, optimize_even, optimize_odd, optimize_squeeze_numeric,
    s_opt_analytic, CatFamily, EpsMaxResult, OptResult, OptimizerConfig, Strategy,
};
pub use phase_space::{
    cat_wigner, convolve_wigner_quadrature, evolved_moments, initial_moments, lossy_cat_wigner,
    CatParams, Moments, NoiseParam, PhasePoint, QuadratureConfig,
};
pub use witness::{
    hull_bound, op_photon_number, op_wigner_origin, witness_delta, witness_log_margin, GaussianOp,
    WitnessReport,
};

/// `2/π`, the magnitude of the origin Wigner value of any parity eigenstate.
pub const TWO_OVER_PI: f64 = std::f64::consts::FRAC_2_PI;
