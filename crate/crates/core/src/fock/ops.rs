use super::{cutoff_rule, expectation_nbar, FockState, GUARD_BAND, TAIL_THRESHOLD};
use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;
use crate::witness::GaussianOp;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest cutoff the automatic sizing in [`apply_gaussian_op`] will try.
pub const MAX_AUTO_CUTOFF: usize = 400;

/// Guard-band leakage the automatic sizing aims for. Squeezed states have
/// geometric number tails, so leakage at [`TAIL_THRESHOLD`] still biases the
/// photon number by roughly `n_cut · TAIL_THRESHOLD`.
pub const AUTO_LEAK_TARGET: f64 = 1e-14;

/// Unitary on `{|0⟩, …, |n_cut + guard⟩}`. Only the lowest `n_cut + 1`
/// levels are kept after it is applied; the guard band catches leakage.
#[derive(Debug, Clone)]
pub struct GaussianUnitary {
    matrix: DMatrix<Complex64>,
    n_cut: usize,
    guard: usize,
}

fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}

/// `exp(i t Y)` for real symmetric `Y`, through its spectral decomposition.
fn exp_i_symmetric(y: DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let dim = y.nrows();
    let eig = y.symmetric_eigen();
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = eig
        .eigenvalues
        .map(|lam| Complex64::from_polar(1.0, t * lam));
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    let out = scaled * v.transpose();
    debug_assert_eq!(out.nrows(), dim);
    out
}

/// `R(θ) M R(θ)†` with `R(θ) = exp(iθ a†a)`.
fn rotate(m: &mut DMatrix<Complex64>, theta: f64) {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            m[(i, j)] *= Complex64::from_polar(1.0, theta * (i as f64 - j as f64));
        }
    }
}

impl GaussianUnitary {
    /// `D(γ) = exp(γa† − γ*a)`.
    ///
    /// Exponentiated as `R D(i|γ|) R†` with `D(i|γ|) = exp(i|γ|(a + a†))`,
    /// whose generator is real symmetric.
    pub fn displacement(gamma: PhasePoint, n_cut: usize) -> Self {
        let dim = n_cut + GUARD_BAND + 1;
        let r = gamma.norm_sq().sqrt();
        let matrix = if r == 0.0 {
            identity(dim)
        } else {
            let x = DMatrix::from_fn(dim, dim, |i, j| {
                if i.abs_diff(j) == 1 {
                    (i.max(j) as f64).sqrt()
                } else {
                    0.0
                }
            });
            let mut m = exp_i_symmetric(x, r);
            rotate(
                &mut m,
                gamma.im.atan2(gamma.re) - std::f64::consts::FRAC_PI_2,
            );
            m
        };
        Self {
            matrix,
            n_cut,
            guard: GUARD_BAND,
        }
    }

    /// `S(s) = exp(s(a†² − a²)/2)` for real `s`.
    ///
    /// Exponentiated as `R(π/4) exp(−is(a² + a†²)/2) R(π/4)†`.
    pub fn squeeze(s: f64, n_cut: usize) -> Self {
        let dim = n_cut + GUARD_BAND + 1;
        let matrix = if s == 0.0 {
            identity(dim)
        } else {
            let y = DMatrix::from_fn(dim, dim, |i, j| {
                if i.abs_diff(j) == 2 {
                    let hi = i.max(j) as f64;
                    0.5 * (hi * (hi - 1.0)).sqrt()
                } else {
                    0.0
                }
            });
            let mut m = exp_i_symmetric(y, -s);
            rotate(&mut m, std::f64::consts::FRAC_PI_4);
            m
        };
        Self {
            matrix,
            n_cut,
            guard: GUARD_BAND,
        }
    }

    /// `D(iβ)·S(s)`.
    pub fn from_op(op: GaussianOp, n_cut: usize) -> Self {
        let squeeze = Self::squeeze(op.s, n_cut);
        let displace = Self::displacement(PhasePoint::new(0.0, op.beta), n_cut);
        Self {
            matrix: displace.matrix * squeeze.matrix,
            n_cut,
            guard: GUARD_BAND,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Largest entry of `P U†U P − P`, where `P` keeps the lowest `levels`
    /// input levels and the sum over outputs runs up to the cutoff only.
    ///
    /// The full truncated matrix is exactly unitary; this measures how much
    /// of the low block is pushed into the guard band.
    pub fn block_unitarity_deviation(&self, levels: usize) -> f64 {
        let k = levels.min(self.n_cut + 1);
        let block = self.matrix.view((0, 0), (self.n_cut + 1, k)).into_owned();
        let product = block.adjoint() * &block;
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((product[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

pub fn displacement_matrix(gamma: PhasePoint, n_cut: usize) -> GaussianUnitary {
    GaussianUnitary::displacement(gamma, n_cut)
}

pub fn squeeze_matrix(s: f64, n_cut: usize) -> GaussianUnitary {
    GaussianUnitary::squeeze(s, n_cut)
}

pub fn gaussian_op_matrices(op: GaussianOp, n_cut: usize) -> GaussianUnitary {
    GaussianUnitary::from_op(op, n_cut)
}

/// `U ρ U†`, truncated back to the unitary's cutoff.
///
/// Fails when more than [`TAIL_THRESHOLD`] of probability ends up in the
/// guard band.
pub fn apply_unitary(state: &FockState, unitary: &GaussianUnitary) -> Result<FockState> {
    let (out, leaked) = transform(state, unitary)?;
    finish(state, unitary, out, leaked)
}

fn transform(state: &FockState, unitary: &GaussianUnitary) -> Result<(DMatrix<Complex64>, f64)> {
    let dim = unitary.matrix.nrows();
    if state.dim() > dim {
        return Err(Error::invalid(
            "unitary",
            format!(
                "state cutoff {} exceeds unitary dimension {dim}",
                state.n_cut()
            ),
        ));
    }
    let rho = state.embed(dim - 1);
    let out = &unitary.matrix * rho.rho() * unitary.matrix.adjoint();
    let leaked: f64 = (unitary.n_cut + 1..dim).map(|n| out[(n, n)].re).sum();
    Ok((out, leaked))
}

fn finish(
    state: &FockState,
    unitary: &GaussianUnitary,
    out: DMatrix<Complex64>,
    leaked: f64,
) -> Result<FockState> {
    if leaked > TAIL_THRESHOLD {
        return Err(Error::UnitarityViolation {
            n_cut: unitary.n_cut,
            guard: unitary.guard,
            leaked,
        });
    }
    let keep = unitary.n_cut + 1;
    let truncated = out.view((0, 0), (keep, keep)).into_owned();
    FockState::renormalised(truncated, state.tail_mass() + leaked.max(0.0))
}

/// Applies `D(iβ) S(s)`.
///
/// With an explicit `cutoff` that size is used as is. Otherwise the working
/// cutoff starts from the cutoff rule on a rough post-op photon number and
/// grows until the guard-band leakage drops below [`AUTO_LEAK_TARGET`]; at
/// [`MAX_AUTO_CUTOFF`] anything within [`TAIL_THRESHOLD`] is accepted.
pub fn apply_gaussian_op(
    state: &FockState,
    op: GaussianOp,
    cutoff: Option<usize>,
) -> Result<FockState> {
    if let Some(n_cut) = cutoff {
        return apply_unitary(
            state,
            &GaussianUnitary::from_op(op, n_cut.max(state.n_cut())),
        );
    }
    let estimate = (2.0 * op.s.abs()).exp() * (expectation_nbar(state) + 1.0) + op.beta * op.beta;
    // Squeezed number distributions fall off like tanh|s|^n.
    let squeeze_tail = match op.s.abs().tanh() {
        t if t > 0.0 => (AUTO_LEAK_TARGET.ln() / t.ln()).ceil() as usize,
        _ => 0,
    };
    let start = cutoff_rule(estimate).max(squeeze_tail + state.n_cut());
    let mut n_cut = state.n_cut().max(start.min(MAX_AUTO_CUTOFF));
    loop {
        let unitary = GaussianUnitary::from_op(op, n_cut);
        let (out, leaked) = transform(state, &unitary)?;
        if leaked <= AUTO_LEAK_TARGET || n_cut >= MAX_AUTO_CUTOFF {
            return finish(state, &unitary, out, leaked);
        }
        n_cut = (n_cut * 3 / 2).min(MAX_AUTO_CUTOFF);
    }
}
