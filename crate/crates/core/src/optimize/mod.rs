//! Choice of the auxiliary Gaussian operation and the largest detectable
//! loss.
//!
//! For the odd cat with β = 0 the origin value does not depend on the
//! squeezing, so the best squeezing is the one minimising the photon number
//! and has a closed form. With a displacement both terms of the witness move
//! and the search is numeric: a coarse grid over (s, β) followed by
//! Nelder–Mead from the best node.

mod nelder_mead;
mod scalar;

use crate::error::{Error, Result};
use crate::phase_space::{CatParams, NoiseParam};
use crate::witness::{witness_delta, witness_log_margin, GaussianOp, WitnessReport};
use nelder_mead::{Bounds, Termination};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    /// Grid nodes along s, endpoints included.
    pub grid_s: usize,
    /// Grid nodes along β over `[beta_min, beta_max]`; only the β ≥ 0 half is
    /// probed because the witness is even in β.
    pub grid_beta: usize,
    /// Simplex diameter at which local refinement stops.
    pub x_tol: f64,
    /// Objective spread, relative to the best value, at which local
    /// refinement stops.
    pub f_tol: f64,
    /// Witness evaluations allowed for one local refinement.
    pub budget: usize,
    /// First (largest) ε probed by the ε_max scan.
    pub scan_top: f64,
    pub scan_step: f64,
    /// Final width of the ε_max bracket.
    pub bisect_width: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            s_min: -2.0,
            s_max: 2.0,
            beta_min: -3.0,
            beta_max: 3.0,
            grid_s: 41,
            grid_beta: 41,
            x_tol: 1e-6,
            f_tol: 1e-10,
            budget: 10_000,
            scan_top: 1.0 - 1e-4,
            scan_step: 1e-2,
            bisect_width: 1e-5,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.s_min, self.s_max, self.beta_min, self.beta_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("bounds", "grid bounds must be finite"));
        }
        if !(self.s_min < self.s_max) {
            return Err(Error::invalid(
                "grid-s",
                format!("need s_min < s_max, got [{}, {}]", self.s_min, self.s_max),
            ));
        }
        if !(self.beta_min < self.beta_max) || self.beta_max <= 0.0 {
            return Err(Error::invalid(
                "grid-beta",
                format!(
                    "need beta_min < beta_max and beta_max > 0, got [{}, {}]",
                    self.beta_min, self.beta_max
                ),
            ));
        }
        if self.grid_s < 2 || self.grid_beta < 2 {
            return Err(Error::invalid("grid", "need at least two nodes per axis"));
        }
        for (name, v) in [
            ("x_tol", self.x_tol),
            ("f_tol", self.f_tol),
            ("scan_step", self.scan_step),
            ("bisect_width", self.bisect_width),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.scan_top > 0.0 && self.scan_top < 1.0) {
            return Err(Error::invalid(
                "scan_top",
                format!("must lie in (0, 1), got {}", self.scan_top),
            ));
        }
        if self.budget == 0 {
            return Err(Error::invalid("budget", "must be positive"));
        }
        Ok(())
    }

    fn s_nodes(&self) -> Vec<f64> {
        linspace(self.s_min, self.s_max, self.grid_s)
    }

    /// Non-negative β nodes; zero is always included.
    fn beta_nodes(&self) -> Vec<f64> {
        let mut nodes: Vec<f64> = linspace(self.beta_min, self.beta_max, self.grid_beta)
            .into_iter()
            .filter(|&b| b > 0.0)
            .collect();
        nodes.insert(0, 0.0);
        nodes
    }

    fn beta_lo(&self) -> f64 {
        self.beta_min.max(0.0)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub op: GaussianOp,
    pub delta: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Full witness evaluation at `op`.
    pub report: WitnessReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Identity operation.
    None,
    /// Squeezing only.
    Squeeze,
    /// Imaginary displacement after squeezing.
    DispSqueeze,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::None, Strategy::Squeeze, Strategy::DispSqueeze];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::Squeeze => "squeeze",
            Strategy::DispSqueeze => "disp-squeeze",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Strategy::None),
            "squeeze" => Ok(Strategy::Squeeze),
            "disp-squeeze" => Ok(Strategy::DispSqueeze),
            other => Err(Error::invalid(
                "strategy",
                format!("expected none|squeeze|disp-squeeze, got `{other}`"),
            )),
        }
    }
}

/// Parity family of the cat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatFamily {
    Odd,
    Even,
}

impl CatFamily {
    pub fn xi(self) -> f64 {
        match self {
            CatFamily::Odd => -1.0,
            CatFamily::Even => 1.0,
        }
    }

    pub fn from_xi(xi: f64) -> Result<Self> {
        if xi == -1.0 {
            Ok(CatFamily::Odd)
        } else if xi == 1.0 {
            Ok(CatFamily::Even)
        } else {
            Err(Error::invalid(
                "xi",
                format!("cat family needs xi = ±1, got {xi}"),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsMaxResult {
    /// Largest probed ε with a violation (the lower end of the final bracket).
    pub eps_max: f64,
    pub alpha: f64,
    pub xi: f64,
    pub strategy: Strategy,
    /// Width of the final bracket; the upper end showed no violation.
    pub bracket: f64,
    pub evaluations: usize,
}

/// Squeezing that minimises the photon number of the lossy odd cat.
pub fn s_opt_analytic(alpha: f64, epsilon: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    let eta = NoiseParam::new(epsilon)?.eta();
    let a2 = alpha * alpha;
    // 1 − e^{2α²} via expm1 keeps the small-α ratio accurate.
    let one_minus_e = -(2.0 * a2).exp_m1();
    let numer = one_minus_e - 4.0 * a2 * (2.0 * a2).exp() * eta;
    let denom = one_minus_e - 4.0 * a2 * eta;
    let argument = numer / denom;
    if !(argument > 0.0 && argument.is_finite()) {
        return Err(Error::Domain {
            alpha,
            epsilon,
            argument,
        });
    }
    Ok(-0.25 * argument.ln())
}

pub fn optimize_odd(alpha: f64, epsilon: f64) -> Result<OptResult> {
    let cat = CatParams::odd(alpha)?;
    let noise = NoiseParam::new(epsilon)?;
    let s = s_opt_analytic(alpha, epsilon)?;
    let report = witness_delta(&cat, noise, GaussianOp::squeeze(s));
    let unsqueezed = witness_delta(&cat, noise, GaussianOp::IDENTITY);
    // Holds analytically; a failure means the closed form was fed garbage.
    debug_assert!(report.delta <= unsqueezed.delta + 1e-15);
    Ok(OptResult {
        op: report.op,
        delta: report.delta,
        evaluations: 2,
        converged: true,
        report,
    })
}

/// Minimises Δ of the lossy even cat over `D(iβ) S(s)`.
pub fn optimize_even(alpha: f64, epsilon: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    optimize_displaced_squeeze(&CatParams::even(alpha)?, NoiseParam::new(epsilon)?, cfg)
}

/// Grid-plus-simplex minimisation of Δ over `D(iβ) S(s)` for any cat.
pub fn optimize_displaced_squeeze(
    cat: &CatParams,
    noise: NoiseParam,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    cfg.validate()?;
    // Δ alone drifts to far corners where both terms underflow, so the log
    // margin locates violations and Δ then picks between the two optima.
    let seeds = [GaussianOp::IDENTITY];
    let by_delta = search_2d(|op| witness_delta(cat, noise, op).delta, cfg, &seeds);
    let by_margin = search_2d(|op| witness_log_margin(cat, noise, op), cfg, &seeds);
    let delta_at_margin = witness_delta(cat, noise, by_margin.op).delta;
    let found = if delta_at_margin < by_delta.value {
        Found {
            op: by_margin.op,
            value: delta_at_margin,
            evals: 0,
            converged: by_margin.converged,
        }
    } else {
        Found {
            evals: 0,
            ..by_delta
        }
    };
    let found = Found {
        evals: by_delta.evals + by_margin.evals + 1,
        ..found
    };
    let report = witness_delta(cat, noise, found.op);
    Ok(OptResult {
        op: found.op,
        delta: report.delta,
        evaluations: found.evals + 1,
        converged: found.converged,
        report,
    })
}

/// Minimises Δ over the squeezing alone at fixed displacement `beta`, by scan
/// and golden section.
pub fn optimize_squeeze_numeric(
    cat: &CatParams,
    noise: NoiseParam,
    beta: f64,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    cfg.validate()?;
    if !beta.is_finite() {
        return Err(Error::invalid(
            "beta",
            format!("must be finite, got {beta}"),
        ));
    }
    let m = scalar::scan_then_golden(
        |s| witness_delta(cat, noise, GaussianOp::new(s, beta)).delta,
        cfg.s_min,
        cfg.s_max,
        cfg.grid_s,
        cfg.x_tol * 1e-3,
    );
    let report = witness_delta(cat, noise, GaussianOp::new(m.x, beta));
    Ok(OptResult {
        op: report.op,
        delta: report.delta,
        evaluations: m.evals + 1,
        converged: true,
        report,
    })
}

struct Found {
    op: GaussianOp,
    value: f64,
    evals: usize,
    converged: bool,
}

/// Points on the curve `β² = sinh(2s)/2` inside the box, where the vacuum
/// saturates the bound. Close to full loss every state is nearly the vacuum
/// and its violations sit in a valley along this curve that is much
/// narrower than the grid spacing.
fn valley_seeds(cfg: &OptimizerConfig) -> Vec<GaussianOp> {
    let on_curve = |s: f64| (0.5 * (2.0 * s).sinh()).sqrt();
    let mut seeds: Vec<GaussianOp> = cfg
        .s_nodes()
        .into_iter()
        .filter(|&s| s > 0.0)
        .map(|s| GaussianOp::new(s, on_curve(s)))
        .filter(|op| op.beta >= cfg.beta_lo() && op.beta <= cfg.beta_max)
        .collect();
    // Where the curve leaves the box through β = β_max.
    let exit = 0.5 * (2.0 * cfg.beta_max * cfg.beta_max).asinh();
    if exit > cfg.s_min && exit < cfg.s_max {
        seeds.push(GaussianOp::new(exit, cfg.beta_max));
    }
    seeds
}

/// Simplex restarts allowed per search, besides the best valley seed.
const MAX_STARTS: usize = 6;

/// Coarse grid plus seeds, then Nelder–Mead from the best local minima of
/// the grid and from the best valley seed. Separate basins compete near the
/// threshold, so refining only the best node can settle in the wrong one.
fn search_2d<F>(objective: F, cfg: &OptimizerConfig, seeds: &[GaussianOp]) -> Found
where
    F: Fn(GaussianOp) -> f64,
{
    let s_nodes = cfg.s_nodes();
    let beta_nodes = cfg.beta_nodes();
    let (ns, nb) = (s_nodes.len(), beta_nodes.len());
    let grid: Vec<f64> = s_nodes
        .iter()
        .flat_map(|&s| beta_nodes.iter().map(move |&b| (s, b)))
        .map(|(s, b)| objective(GaussianOp::new(s, b)))
        .collect();
    let mut evals = grid.len();

    let mut candidates: Vec<(GaussianOp, f64)> = Vec::new();
    for i in 0..ns {
        for j in 0..nb {
            let v = grid[i * nb + j];
            let is_min = (i.saturating_sub(1)..=(i + 1).min(ns - 1))
                .flat_map(|a| (j.saturating_sub(1)..=(j + 1).min(nb - 1)).map(move |b| (a, b)))
                .all(|(a, b)| grid[a * nb + b] >= v || grid[a * nb + b].is_nan());
            if is_min && !v.is_nan() {
                candidates.push((GaussianOp::new(s_nodes[i], beta_nodes[j]), v));
            }
        }
    }
    for &op in seeds {
        evals += 1;
        candidates.push((op, objective(op)));
    }
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
    candidates.dedup_by(|a, b| a.0 == b.0);
    candidates.truncate(MAX_STARTS);

    let mut valley = (GaussianOp::IDENTITY, f64::INFINITY);
    for op in valley_seeds(cfg) {
        evals += 1;
        let v = objective(op);
        if v < valley.1 {
            valley = (op, v);
        }
    }
    if valley.1.is_finite() && candidates.iter().all(|c| c.0 != valley.0) {
        candidates.push(valley);
    }

    let mut found = match candidates.iter().min_by(|a, b| a.1.total_cmp(&b.1)) {
        Some(&(op, value)) => Found {
            op,
            value,
            evals,
            converged: true,
        },
        None => Found {
            op: GaussianOp::IDENTITY,
            value: f64::NAN,
            evals,
            converged: false,
        },
    };
    if found.value == f64::NEG_INFINITY {
        return found;
    }

    let s_step = (cfg.s_max - cfg.s_min) / (cfg.grid_s - 1) as f64;
    let beta_step = (cfg.beta_max - cfg.beta_min) / (cfg.grid_beta - 1) as f64;
    let bounds = Bounds {
        lo: [cfg.s_min, cfg.beta_lo()],
        hi: [cfg.s_max, cfg.beta_max],
    };
    let term = Termination {
        x_tol: cfg.x_tol,
        f_tol: cfg.f_tol,
        max_evals: cfg.budget,
    };
    for (start, _) in candidates {
        let refined = nelder_mead::minimize(
            |x| objective(GaussianOp::new(x[0], x[1])),
            [start.s, start.beta],
            [0.5 * s_step, 0.5 * beta_step],
            bounds,
            term,
        );
        found.evals += refined.evals;
        found.converged &= refined.converged;
        if refined.f < found.value {
            found.op = GaussianOp::new(refined.x[0], refined.x[1]);
            found.value = refined.f;
        }
    }
    found
}

/// Best log margin reachable with `strategy`; ≤ 0 means a violation.
fn best_margin(
    cat: &CatParams,
    family: CatFamily,
    noise: NoiseParam,
    strategy: Strategy,
    cfg: &OptimizerConfig,
) -> Result<(f64, usize)> {
    let margin = |op: GaussianOp| witness_log_margin(cat, noise, op);
    let squeeze_only = |cat_family: CatFamily| -> Result<(GaussianOp, f64, usize)> {
        match cat_family {
            CatFamily::Odd => {
                let op = GaussianOp::squeeze(s_opt_analytic(cat.alpha(), noise.epsilon())?);
                Ok((op, margin(op), 1))
            }
            CatFamily::Even => {
                let m = scalar::scan_then_golden(
                    |s| margin(GaussianOp::squeeze(s)),
                    cfg.s_min,
                    cfg.s_max,
                    cfg.grid_s,
                    cfg.x_tol * 1e-3,
                );
                Ok((GaussianOp::squeeze(m.x), m.f, m.evals))
            }
        }
    };
    match strategy {
        Strategy::None => Ok((margin(GaussianOp::IDENTITY), 1)),
        Strategy::Squeeze => {
            let (_, value, evals) = squeeze_only(family)?;
            Ok((value, evals))
        }
        Strategy::DispSqueeze => {
            let (seed, _, seed_evals) = squeeze_only(family)?;
            let found = search_2d(margin, cfg, &[GaussianOp::IDENTITY, seed]);
            if !found.converged {
                return Err(Error::OptimizerNonConvergence { budget: cfg.budget });
            }
            Ok((found.value, found.evals + seed_evals))
        }
    }
}

/// Largest loss at which the optimised witness still reaches Δ ≤ 0.
///
/// Scans ε downwards from `cfg.scan_top` in steps of `cfg.scan_step`, then
/// bisects the first sign change. The sign is taken from the log margin so
/// that underflowed, exactly-zero Δ values are not mistaken for ties.
/// A genuine tie (margin exactly 0) counts as a violation.
pub fn epsilon_max(
    alpha: f64,
    family: CatFamily,
    strategy: Strategy,
    cfg: &OptimizerConfig,
) -> Result<EpsMaxResult> {
    cfg.validate()?;
    let cat = CatParams::new(alpha, family.xi())?;
    let mut evaluations = 0usize;
    let mut violated = |eps: f64| -> Result<bool> {
        let (value, evals) = best_margin(&cat, family, NoiseParam::new(eps)?, strategy, cfg)?;
        evaluations += evals;
        Ok(value <= 0.0)
    };

    let mut upper: Option<f64> = None;
    let mut lower: Option<f64> = None;
    let mut k = 0usize;
    loop {
        let eps = cfg.scan_top - cfg.scan_step * k as f64;
        if eps < 0.0 {
            break;
        }
        if violated(eps)? {
            lower = Some(eps);
            break;
        }
        upper = Some(eps);
        k += 1;
    }

    let result = |eps_max: f64, bracket: f64, evaluations: usize| EpsMaxResult {
        eps_max,
        alpha,
        xi: family.xi(),
        strategy,
        bracket,
        evaluations,
    };
    let Some(mut lo) = lower else {
        return Ok(result(0.0, upper.unwrap_or(cfg.scan_top), evaluations));
    };
    let Some(mut hi) = upper else {
        // Violation already at the top of the scan; ε = 1 itself is the vacuum.
        return Ok(result(lo, 1.0 - lo, evaluations));
    };
    while hi - lo > cfg.bisect_width {
        let mid = 0.5 * (lo + hi);
        if violated(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(result(lo, hi - lo, evaluations))
}
