//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the run
//! fails if any criterion fails.

use qng_core::fock::{
    apply_loss, cat_fock, cutoff_rule, expectation_a2, expectation_nbar, fock_witness, parity_w0,
    wigner_at, FockState,
};
use qng_core::phase_space::convolve_quadrature;
use qng_core::{
    convolve_wigner_quadrature, epsilon_max, evolved_moments, initial_moments, lossy_cat_wigner,
    op_photon_number, optimize_odd, s_opt_analytic, witness_delta, CatFamily, CatParams,
    GaussianOp, NoiseParam, OptimizerConfig, PhasePoint, QuadratureConfig, Strategy, TWO_OVER_PI,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::process::Command;
use std::time::Instant;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Inclusive grid of `n` points.
fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn epsilon_grid() -> Vec<f64> {
    grid(0.01, 0.99, 99)
}

fn oracle_equivalence() -> Verdict {
    const WIGNER_QUAD_TOL: f64 = 1e-8;
    const WIGNER_FOCK_TOL: f64 = 1e-7;
    const MOMENT_TOL: f64 = 1e-9;
    let mut rng = StdRng::seed_from_u64(0x51_07);
    // 72 states, three phase-space points each.
    let states: Vec<(f64, f64, f64, [PhasePoint; 3])> = (0..72)
        .map(|k| {
            let alpha = rng.gen_range(0.1..=2.0);
            let xi = [-1.0, 0.0, 1.0][k % 3];
            // Every eighth state is lossless; quadrature is skipped there.
            let eps = if k % 8 == 0 {
                0.0
            } else {
                rng.gen_range(0.0..=1.0)
            };
            let points = [(); 3].map(|_| {
                let r = (alpha + 2.0) * rng.gen::<f64>().sqrt();
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                PhasePoint::new(r * phi.cos(), r * phi.sin())
            });
            (alpha, xi, eps, points)
        })
        .collect();

    let errors: Vec<(f64, f64, f64, usize)> = states
        .par_iter()
        .map(|&(alpha, xi, eps, points)| {
            let cat = CatParams::new(alpha, xi).unwrap();
            let noise = NoiseParam::new(eps).unwrap();
            let fock = apply_loss(&cat_fock(&cat, cutoff_rule(alpha * alpha)).unwrap(), noise);
            let (mut quad_err, mut fock_err, mut quads) = (0.0f64, 0.0f64, 0);
            for lam in points {
                let w = lossy_cat_wigner(&cat, noise, lam);
                if eps > 0.0 {
                    let q =
                        convolve_wigner_quadrature(&cat, noise, lam, &QuadratureConfig::default())
                            .unwrap();
                    quad_err = quad_err.max((q - w).abs());
                    quads += 1;
                }
                fock_err = fock_err.max((wigner_at(&fock, lam).unwrap() - w).abs());
            }
            let m = evolved_moments(initial_moments(&cat), noise);
            let moment_err = (m.nbar - expectation_nbar(&fock))
                .abs()
                .max((m.a2 - expectation_a2(&fock)).abs());
            (quad_err, fock_err, moment_err, quads)
        })
        .collect();
    let quad = max_of(errors.iter().map(|e| e.0));
    let fock = max_of(errors.iter().map(|e| e.1));
    let moments = max_of(errors.iter().map(|e| e.2));
    let quads: usize = errors.iter().map(|e| e.3).sum();
    let tuples = 3 * states.len();
    Verdict::new(
        tuples >= 200 && quad <= WIGNER_QUAD_TOL && fock <= WIGNER_FOCK_TOL && moments <= MOMENT_TOL,
        format!(
            "{tuples} tuples ({quads} with quadrature): quadrature {quad:.2e} (tol {WIGNER_QUAD_TOL:e}), \
             Fock {fock:.2e} (tol {WIGNER_FOCK_TOL:e}), moments {moments:.2e} (tol {MOMENT_TOL:e})"
        ),
    )
}

fn parity_exactness() -> Verdict {
    const TOL: f64 = 1e-12;
    let mut alphas = grid(0.0, 2.0, 401);
    alphas[0] = 1e-3;
    let err = max_of(alphas.iter().flat_map(|&alpha| {
        [(-1.0, -TWO_OVER_PI), (1.0, TWO_OVER_PI)].map(|(xi, expected)| {
            let cat = CatParams::new(alpha, xi).unwrap();
            (lossy_cat_wigner(&cat, NoiseParam::identity(), PhasePoint::ORIGIN) - expected).abs()
        })
    }));
    Verdict::new(
        err <= TOL,
        format!(
            "{} amplitudes in (0, 2]: max |W(0) ∓ 2/π| = {err:.2e} (tol {TOL:e})",
            alphas.len()
        ),
    )
}

/// Golden-section minimum of `f` on `[lo, hi]` after a coarse scan.
fn minimise_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let scan = grid(lo, hi, 601);
    let step = scan[1] - scan[0];
    let best = scan
        .iter()
        .copied()
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-12 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

fn s_opt_correctness() -> Verdict {
    const TOL: f64 = 1e-6;
    let mut rng = StdRng::seed_from_u64(0x5_0b7);
    let (mut s_err, mut losses, mut points) = (0.0f64, 0usize, 0usize);
    for alpha in grid(0.25, 2.0, 8) {
        let cat = CatParams::odd(alpha).unwrap();
        for eps in grid(0.1, 0.9, 9) {
            let noise = NoiseParam::new(eps).unwrap();
            let moments = evolved_moments(initial_moments(&cat), noise);
            let s_num = minimise_1d(
                |s| op_photon_number(moments, GaussianOp::squeeze(s)),
                -3.0,
                3.0,
            );
            let s_opt = s_opt_analytic(alpha, eps).unwrap();
            s_err = s_err.max((s_num - s_opt).abs());
            let best = witness_delta(&cat, noise, GaussianOp::squeeze(s_opt)).delta;
            for _ in 0..50 {
                let s = rng.gen_range(-2.0..2.0);
                if best > witness_delta(&cat, noise, GaussianOp::squeeze(s)).delta {
                    losses += 1;
                }
            }
            points += 1;
        }
    }
    Verdict::new(
        s_err <= TOL && losses == 0,
        format!("{points} grid points: max |s_opt − s_numeric| = {s_err:.2e} (tol {TOL:e}), {losses} random s beat s_opt"),
    )
}

fn odd_detected_everywhere() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    let mut misses = Vec::new();
    for alpha in [0.5, 1.0, 1.5] {
        for eps in epsilon_grid() {
            let d = optimize_odd(alpha, eps).unwrap().delta;
            worst = worst.max(d);
            if d.is_nan() || d >= 0.0 {
                misses.push((alpha, eps));
            }
        }
    }
    Verdict::new(
        misses.is_empty(),
        format!("297 points: max Δ = {worst:.3e}, non-negative at {misses:?}"),
    )
}

fn odd_eps_max() -> Verdict {
    let cfg = OptimizerConfig::default();
    let alphas = grid(0.25, 2.0, 8);
    let squeeze: Vec<f64> = alphas
        .par_iter()
        .map(|&a| {
            epsilon_max(a, CatFamily::Odd, Strategy::Squeeze, &cfg)
                .unwrap()
                .eps_max
        })
        .collect();
    let lowest = squeeze.iter().copied().fold(f64::INFINITY, f64::min);
    let none = epsilon_max(1.5, CatFamily::Odd, Strategy::None, &cfg)
        .unwrap()
        .eps_max;
    Verdict::new(
        lowest >= 0.999 && (0.4..=0.6).contains(&none),
        format!("squeeze: min eps_max {lowest:.6} (need ≥ 0.999); none at α=1.5: {none:.6} (need [0.4, 0.6])"),
    )
}

fn even_eps_max() -> Verdict {
    let cfg = OptimizerConfig::default();
    let get = |alpha: f64, strategy| {
        epsilon_max(alpha, CatFamily::Even, strategy, &cfg)
            .unwrap()
            .eps_max
    };
    let mut parts = Vec::new();
    let mut pass = true;
    let mut require = |label: String, ok: bool| {
        pass &= ok;
        parts.push(format!("{label} {}", if ok { "ok" } else { "MISSED" }));
    };
    for alpha in [0.1, 0.3, 0.5] {
        let e = get(alpha, Strategy::DispSqueeze);
        require(format!("α={alpha}: {e:.6} ≥ 0.99"), e >= 0.99);
        if alpha == 0.1 {
            require(format!("α=0.1: {e:.6} ≥ 0.999"), e >= 0.999);
        }
    }
    let e = get(1.0, Strategy::DispSqueeze);
    require(
        format!("α=1.0: {e:.6} ∈ [0.5, 0.65]"),
        (0.5..=0.65).contains(&e),
    );
    for alpha in [0.2, 0.5, 1.0] {
        let cat = CatParams::even(alpha).unwrap();
        let min_delta = epsilon_grid()
            .into_iter()
            .map(|eps| {
                witness_delta(&cat, NoiseParam::new(eps).unwrap(), GaussianOp::IDENTITY).delta
            })
            .fold(f64::INFINITY, f64::min);
        let e = get(alpha, Strategy::None);
        require(
            format!("α={alpha} without op: eps_max {e}, min Δ {min_delta:.3e} ≥ 0"),
            e == 0.0 && min_delta >= 0.0,
        );
    }
    Verdict::new(pass, parts.join("; "))
}

fn witness_soundness() -> Verdict {
    const TOL: f64 = 1e-12;
    let mut rng = StdRng::seed_from_u64(0x9a55);
    let mut cases: Vec<(usize, f64, GaussianOp)> = Vec::new();
    for kind in 0..3 {
        for _ in 0..100 {
            let param = rng.gen_range(0.05..2.0);
            let op = GaussianOp::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0));
            cases.push((kind, param, op));
        }
    }
    let deltas: Vec<(usize, f64)> = cases
        .par_iter()
        .map(|&(kind, param, op)| {
            let state = match kind {
                0 => FockState::vacuum(30),
                1 => cat_fock(
                    &CatParams::new(param, 0.0).unwrap(),
                    cutoff_rule(param * param),
                )
                .unwrap(),
                _ => FockState::thermal(param, cutoff_rule(10.0 * (param + 1.0))).unwrap(),
            };
            (kind, fock_witness(&state, op, None).unwrap().delta)
        })
        .collect();
    let worst = |k: usize| {
        deltas
            .iter()
            .filter(|d| d.0 == k)
            .map(|d| d.1)
            .fold(f64::INFINITY, f64::min)
    };
    let (vac, coh, th) = (worst(0), worst(1), worst(2));
    Verdict::new(
        vac.min(coh).min(th) >= -TOL,
        format!("100 ops each: min Δ vacuum {vac:.3e}, coherent {coh:.3e}, thermal {th:.3e} (need ≥ −{TOL:e})"),
    )
}

fn channel_semigroup() -> Verdict {
    const TOL: f64 = 1e-8;
    let mut rng = StdRng::seed_from_u64(0x5e41);
    let tuples: Vec<_> = (0..50)
        .map(|k| {
            let alpha = rng.gen_range(0.1..2.0);
            let xi = [-1.0, 0.0, 1.0][k % 3];
            let (e1, e2) = (rng.gen_range(0.0..0.95), rng.gen_range(0.05..1.0));
            let lam = PhasePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            (alpha, xi, e1, e2, lam)
        })
        .collect();
    let errors: Vec<(f64, f64)> = tuples
        .par_iter()
        .map(|&(alpha, xi, e1, e2, lam)| {
            let cat = CatParams::new(alpha, xi).unwrap();
            let (n1, n2) = (NoiseParam::new(e1).unwrap(), NoiseParam::new(e2).unwrap());
            let once = lossy_cat_wigner(&cat, n1.compose(n2), lam);
            let twice = convolve_quadrature(
                |l| lossy_cat_wigner(&cat, n1, l),
                alpha + 6.0,
                n2,
                lam,
                &QuadratureConfig::default(),
            )
            .unwrap();
            let pure = cat_fock(&cat, cutoff_rule(alpha * alpha)).unwrap();
            let fock_twice = parity_w0(&apply_loss(&apply_loss(&pure, n1), n2));
            let fock_once = parity_w0(&apply_loss(&pure, n1.compose(n2)));
            ((twice - once).abs(), (fock_twice - fock_once).abs())
        })
        .collect();
    let phase = max_of(errors.iter().map(|e| e.0));
    let fock = max_of(errors.iter().map(|e| e.1));
    Verdict::new(
        phase <= TOL && fock <= TOL,
        format!("50 tuples: phase-space {phase:.2e}, Fock origin {fock:.2e} (tol {TOL:e})"),
    )
}

fn sweep_even_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> (bool, Vec<u8>) {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_qng"))
            .arg("sweep-even")
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok_a, a) = run("a.csv");
    let (ok_b, b) = run("b.csv");
    let rows = a.iter().filter(|&&c| c == b'\n').count().saturating_sub(1);
    Verdict::new(
        ok_a && ok_b && !a.is_empty() && a == b,
        format!(
            "default sweep, {rows} rows, {} bytes: identical = {}, exit ok = {}",
            a.len(),
            a == b,
            ok_a && ok_b
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("parity exactness", parity_exactness),
        ("optimal squeezing", s_opt_correctness),
        ("odd cat detected at every loss", odd_detected_everywhere),
        ("odd cat eps_max", odd_eps_max),
        ("even cat eps_max", even_eps_max),
        ("witness soundness", witness_soundness),
        ("channel semigroup", channel_semigroup),
        ("sweep determinism", sweep_even_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{}] {name}: {} ({:.1} s)",
            i + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
