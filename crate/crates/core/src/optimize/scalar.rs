//! One-dimensional minimisation: coarse scan then golden-section polish.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct ScalarMinimum {
    pub x: f64,
    pub f: f64,
    pub evals: usize,
}

/// Golden-section search on a unimodal bracket `[a, b]`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> ScalarMinimum {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    evals += 1;
    // Return the best point seen in the final bracket.
    let (x, f) = [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap();
    ScalarMinimum { x, f, evals }
}

/// Scans `points` equally spaced nodes of `[lo, hi]`, then polishes around
/// the best node. Never returns worse than the best node.
pub(crate) fn scan_then_golden<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
) -> ScalarMinimum {
    let points = points.max(2);
    let h = (hi - lo) / (points - 1) as f64;
    let (best_i, best_f) = (0..points)
        .map(|i| (i, f(lo + h * i as f64)))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap();
    let best_x = lo + h * best_i as f64;
    let a = (best_x - h).max(lo);
    let b = (best_x + h).min(hi);
    let polished = golden_section(&f, a, b, tol);
    let evals = points + polished.evals;
    if polished.f <= best_f {
        ScalarMinimum { evals, ..polished }
    } else {
        ScalarMinimum {
            x: best_x,
            f: best_f,
            evals,
        }
    }
}
