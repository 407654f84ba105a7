//! Oracle cross-checks run by `qng verify`.
//!
//! Each check reports the largest discrepancy seen over its samples and
//! passes when that stays within its tolerance. A numerical error inside a
//! check (for example a cutoff that is too small) fails the check and is
//! reported in its `detail` column.

use crate::args::VerifyArgs;
use crate::commands::{keys, output_target, Outcome};
use crate::config_file::ConfigFile;
use crate::error::{status_tag, CliError, Result};
use crate::output::{Format, Table};
use qng_core::fock::{
    apply_loss, cat_fock, cutoff_rule, expectation_a2, expectation_nbar, fock_cat_witness,
    fock_witness, wigner_at, wigner_at_with_cutoff, FockState,
};
use qng_core::phase_space::convolve_quadrature;
use qng_core::{
    convolve_wigner_quadrature, evolved_moments, initial_moments, lossy_cat_wigner, s_opt_analytic,
    witness_delta, CatParams, GaussianOp, NoiseParam, PhasePoint, QuadratureConfig, TWO_OVER_PI,
};
use rayon::prelude::*;
use serde_json::json;

#[derive(Debug, Clone, Copy)]
struct Ctx {
    cutoff: Option<usize>,
}

impl Ctx {
    fn lossy_state(&self, cat: &CatParams, eps: f64) -> qng_core::Result<FockState> {
        let n_cut = self
            .cutoff
            .unwrap_or_else(|| cutoff_rule(cat.alpha() * cat.alpha()));
        Ok(apply_loss(&cat_fock(cat, n_cut)?, NoiseParam::new(eps)?))
    }

    fn wigner(&self, state: &FockState, lam: PhasePoint) -> qng_core::Result<f64> {
        match self.cutoff {
            Some(n) => wigner_at_with_cutoff(state, lam, n),
            None => wigner_at(state, lam),
        }
    }
}

/// Largest discrepancy and the number of samples it was taken over.
type Measure = qng_core::Result<(f64, usize)>;

struct Check {
    name: &'static str,
    tolerance: f64,
    run: fn(Ctx) -> Measure,
}

fn worst(values: impl IntoIterator<Item = qng_core::Result<f64>>) -> Measure {
    let mut max: f64 = 0.0;
    let mut n = 0;
    for v in values {
        let v = v?;
        // NaN must fail the check, not vanish in `max`.
        max = if v.is_nan() { f64::NAN } else { max.max(v) };
        n += 1;
    }
    Ok((max, n))
}

fn cats() -> Vec<CatParams> {
    let mut out = Vec::new();
    for &xi in &[-1.0, 0.0, 1.0] {
        for &alpha in &[0.5, 1.5] {
            out.push(CatParams::new(alpha, xi).expect("valid cat"));
        }
    }
    out
}

const POINTS: [(f64, f64); 3] = [(0.0, 0.0), (0.3, -0.4), (-1.0, 0.6)];

fn parity(_: Ctx) -> Measure {
    worst((1..=40).flat_map(|k| {
        let alpha = 0.05 * k as f64;
        [(-1.0, -TWO_OVER_PI), (1.0, TWO_OVER_PI)].map(|(xi, target)| {
            let cat = CatParams::new(alpha, xi)?;
            Ok((lossy_cat_wigner(&cat, NoiseParam::identity(), PhasePoint::ORIGIN) - target).abs())
        })
    }))
}

fn wigner_vs_quadrature(_: Ctx) -> Measure {
    let cfg = QuadratureConfig::default();
    let mut errs = Vec::new();
    for cat in cats() {
        for &eps in &[0.2, 0.7] {
            let noise = NoiseParam::new(eps)?;
            for &(x, p) in &POINTS {
                let lam = PhasePoint::new(x, p);
                let q = convolve_wigner_quadrature(&cat, noise, lam, &cfg)?;
                errs.push(Ok((q - lossy_cat_wigner(&cat, noise, lam)).abs()));
            }
        }
    }
    worst(errs)
}

fn wigner_vs_fock(ctx: Ctx) -> Measure {
    let mut errs = Vec::new();
    for cat in cats() {
        for &eps in &[0.0, 0.2, 0.7] {
            let noise = NoiseParam::new(eps)?;
            let state = ctx.lossy_state(&cat, eps)?;
            for &(x, p) in &POINTS {
                let lam = PhasePoint::new(x, p);
                errs.push(Ok((ctx.wigner(&state, lam)?
                    - lossy_cat_wigner(&cat, noise, lam))
                .abs()));
            }
        }
    }
    worst(errs)
}

fn moments_vs_fock(ctx: Ctx) -> Measure {
    let mut errs = Vec::new();
    for &xi in &[-1.0, 0.0, 1.0] {
        for &alpha in &[0.5, 1.0, 2.0] {
            let cat = CatParams::new(alpha, xi)?;
            for &eps in &[0.0, 0.5] {
                let m = evolved_moments(initial_moments(&cat), NoiseParam::new(eps)?);
                let state = ctx.lossy_state(&cat, eps)?;
                errs.push(Ok((m.nbar - expectation_nbar(&state)).abs()));
                errs.push(Ok((m.a2 - expectation_a2(&state)).abs()));
            }
        }
    }
    worst(errs)
}

fn delta_vs_fock(ctx: Ctx) -> Measure {
    let ops = [
        GaussianOp::IDENTITY,
        GaussianOp::new(-0.5, 0.0),
        GaussianOp::new(0.4, 0.9),
    ];
    let mut errs = Vec::new();
    for &xi in &[-1.0, 1.0] {
        for &alpha in &[0.5, 1.2] {
            let cat = CatParams::new(alpha, xi)?;
            for &eps in &[0.1, 0.6] {
                let noise = NoiseParam::new(eps)?;
                for &op in &ops {
                    let fock = fock_cat_witness(&cat, noise, op, ctx.cutoff)?;
                    errs.push(Ok((fock.delta - witness_delta(&cat, noise, op).delta).abs()));
                }
            }
        }
    }
    worst(errs)
}

fn trace_and_hermiticity(ctx: Ctx) -> Measure {
    let mut errs = Vec::new();
    for cat in cats() {
        for &eps in &[0.0, 0.4, 1.0] {
            let state = ctx.lossy_state(&cat, eps)?;
            errs.push(Ok((state.trace() - 1.0)
                .abs()
                .max(state.hermiticity_error())));
            let moved =
                qng_core::fock::apply_gaussian_op(&state, GaussianOp::new(0.3, 0.5), ctx.cutoff)?;
            errs.push(Ok((moved.trace() - 1.0)
                .abs()
                .max(moved.hermiticity_error())));
        }
    }
    worst(errs)
}

fn normalisation(_: Ctx) -> Measure {
    let mut errs = Vec::new();
    for cat in cats() {
        for &eps in &[0.0, 0.5] {
            let noise = NoiseParam::new(eps)?;
            let h = cat.alpha() + 6.0;
            let n = 240;
            let step = 2.0 * h / n as f64;
            let mut total = 0.0;
            for i in 0..=n {
                for j in 0..=n {
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 }
                        * if j == 0 || j == n { 0.5 } else { 1.0 };
                    let lam = PhasePoint::new(-h + step * i as f64, -h + step * j as f64);
                    total += w * lossy_cat_wigner(&cat, noise, lam);
                }
            }
            errs.push(Ok((total * step * step - 1.0).abs()));
        }
    }
    worst(errs)
}

fn s_opt_vs_numeric(_: Ctx) -> Measure {
    let mut errs = Vec::new();
    for ka in 1..=8 {
        let alpha = 0.25 * ka as f64;
        for ke in 1..=9 {
            let eps = 0.1 * ke as f64;
            let eta = 1.0 - eps;
            let a2 = alpha * alpha;
            let nbar = |s: f64| {
                (2.0 * s).cosh() * eta * a2 / a2.tanh()
                    + (2.0 * s).sinh() * eta * a2
                    + s.sinh().powi(2)
            };
            let (mut lo, mut hi) = (-3.0f64, 3.0f64);
            while hi - lo > 1e-11 {
                let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
                if nbar(a) < nbar(b) {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            errs.push(s_opt_analytic(alpha, eps).map(|s| (s - 0.5 * (lo + hi)).abs()));
        }
    }
    worst(errs)
}

fn gaussian_soundness(ctx: Ctx) -> Measure {
    let ops = [
        GaussianOp::new(0.0, 0.0),
        GaussianOp::new(0.8, 0.0),
        GaussianOp::new(-0.6, 1.2),
        GaussianOp::new(0.3, -2.0),
    ];
    let mut states = vec![FockState::vacuum(ctx.cutoff.unwrap_or(30))];
    for &amp in &[0.5, 1.5] {
        states.push(cat_fock(
            &CatParams::new(amp, 0.0)?,
            ctx.cutoff.unwrap_or_else(|| cutoff_rule(amp * amp)),
        )?);
        states.push(FockState::thermal(
            amp,
            ctx.cutoff
                .unwrap_or_else(|| cutoff_rule(20.0 * (amp + 1.0))),
        )?);
    }
    let mut errs = Vec::new();
    for state in &states {
        for &op in &ops {
            errs.push(fock_witness(state, op, ctx.cutoff).map(|w| (-w.delta).max(0.0)));
        }
    }
    worst(errs)
}

fn semigroup(_: Ctx) -> Measure {
    let cfg = QuadratureConfig::default();
    let mut errs = Vec::new();
    for cat in cats() {
        for &(e1, e2) in &[(0.2, 0.3), (0.5, 0.6)] {
            let (n1, n2) = (NoiseParam::new(e1)?, NoiseParam::new(e2)?);
            for &(x, p) in &POINTS[..2] {
                let lam = PhasePoint::new(x, p);
                let twice = convolve_quadrature(
                    |l| lossy_cat_wigner(&cat, n1, l),
                    cat.alpha() + 6.0,
                    n2,
                    lam,
                    &cfg,
                )?;
                errs.push(Ok(
                    (twice - lossy_cat_wigner(&cat, n1.compose(n2), lam)).abs()
                ));
            }
        }
    }
    worst(errs)
}

const CHECKS: [Check; 10] = [
    Check {
        name: "parity-identity",
        tolerance: 1e-12,
        run: parity,
    },
    Check {
        name: "wigner-vs-quadrature",
        tolerance: 1e-8,
        run: wigner_vs_quadrature,
    },
    Check {
        name: "wigner-vs-fock",
        tolerance: 1e-7,
        run: wigner_vs_fock,
    },
    Check {
        name: "moments-vs-fock",
        tolerance: 1e-9,
        run: moments_vs_fock,
    },
    Check {
        name: "delta-vs-fock",
        tolerance: 1e-7,
        run: delta_vs_fock,
    },
    Check {
        name: "trace-hermiticity",
        tolerance: 1e-10,
        run: trace_and_hermiticity,
    },
    Check {
        name: "normalisation",
        tolerance: 1e-6,
        run: normalisation,
    },
    Check {
        name: "s-opt-vs-numeric",
        tolerance: 1e-6,
        run: s_opt_vs_numeric,
    },
    Check {
        name: "gaussian-soundness",
        tolerance: 1e-12,
        run: gaussian_soundness,
    },
    Check {
        name: "loss-semigroup",
        tolerance: 1e-8,
        run: semigroup,
    },
];

pub fn verify(file: &ConfigFile, a: &VerifyArgs) -> Result<Outcome> {
    file.check_keys(&keys(&["cutoff", "tol"], false))?;
    let cutoff = file.pick("cutoff", a.cutoff)?;
    let tol = file.pick("tol", a.tol)?;
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::validation(format!(
                "--tol must be positive, got {t}"
            )));
        }
    }
    if cutoff == Some(0) {
        return Err(CliError::validation("--cutoff must be positive"));
    }
    let (format, out) = output_target(file, &a.output, Format::Json)?;
    let ctx = Ctx { cutoff };

    let results: Vec<Measure> = CHECKS.par_iter().map(|c| (c.run)(ctx)).collect();
    let mut table = Table::new(&[
        "check",
        "tolerance",
        "max_error",
        "samples",
        "passed",
        "detail",
    ]);
    let mut failures = 0;
    for (check, result) in CHECKS.iter().zip(results) {
        let tolerance = tol.unwrap_or(check.tolerance);
        let (max_error, samples, passed, detail) = match result {
            Ok((e, n)) => (e, n, e <= tolerance, String::new()),
            Err(e) => (f64::NAN, 0, false, format!("{}: {e}", status_tag(&e))),
        };
        if !passed {
            failures += 1;
        }
        table.push(vec![
            check.name.into(),
            tolerance.into(),
            max_error.into(),
            samples.into(),
            passed.into(),
            detail.into(),
        ]);
    }
    let config = json!({ "command": "verify", "cutoff": cutoff, "tol": tol });
    let extra = Some(("passed", json!(failures == 0)));
    Ok(Outcome {
        table,
        config,
        format,
        out,
        failures,
        extra,
    })
}
