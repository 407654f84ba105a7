use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("cat state is not normalisable: N² = {norm_sq:e} (alpha = {alpha}, xi = {xi})")]
    Degenerate { alpha: f64, xi: f64, norm_sq: f64 },

    #[error(
        "s_opt is undefined for alpha = {alpha}, epsilon = {epsilon} (log argument {argument:e})"
    )]
    Domain {
        alpha: f64,
        epsilon: f64,
        argument: f64,
    },

    #[error("quadrature did not converge: successive refinements differ by {difference:e} (target {target:e})")]
    QuadratureNonConvergence { difference: f64, target: f64 },

    #[error("optimizer exhausted its budget of {budget} evaluations")]
    OptimizerNonConvergence { budget: usize },

    #[error("Fock cutoff {n_cut} too small: tail mass {tail_mass:e} exceeds {threshold:e}")]
    CutoffTooSmall {
        n_cut: usize,
        tail_mass: f64,
        threshold: f64,
    },

    #[error("Gaussian unitary leaks {leaked:e} of probability into the guard band (cutoff {n_cut}, guard {guard})")]
    UnitarityViolation {
        n_cut: usize,
        guard: usize,
        leaked: f64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Validation problems are caller mistakes; everything else is a
    /// numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Degenerate { .. } | Error::Domain { .. }
        )
    }
}
