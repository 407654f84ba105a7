//! Box-constrained Nelder–Mead over two parameters.
//!
//! Trial points are projected onto the box, which keeps the simplex inside
//! the search region without penalty terms.

use std::cell::Cell;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Bounds {
    fn project(&self, x: [f64; 2]) -> [f64; 2] {
        [
            x[0].clamp(self.lo[0], self.hi[0]),
            x[1].clamp(self.lo[1], self.hi[1]),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Termination {
    /// Stop once the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop once the spread of objective values falls below this fraction
    /// of the best value's magnitude.
    pub f_tol: f64,
    pub max_evals: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum {
    pub x: [f64; 2],
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Minimises `f` starting from `x0` with initial edge lengths `step`.
pub(crate) fn minimize<F>(
    f: F,
    x0: [f64; 2],
    step: [f64; 2],
    bounds: Bounds,
    term: Termination,
) -> Minimum
where
    F: Fn([f64; 2]) -> f64,
{
    let evals = Cell::new(0usize);
    let eval = |x: [f64; 2]| {
        evals.set(evals.get() + 1);
        f(x)
    };

    let x0 = bounds.project(x0);
    // Step away from a bound face instead of collapsing onto it.
    let vertex = |axis: usize| {
        let mut v = x0;
        v[axis] += step[axis];
        if v[axis] > bounds.hi[axis] {
            v[axis] = x0[axis] - step[axis];
        }
        bounds.project(v)
    };
    let mut simplex = [x0, vertex(0), vertex(1)];
    let mut values = [eval(simplex[0]), eval(simplex[1]), eval(simplex[2])];

    loop {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let diameter = dist(simplex[0], simplex[1]).max(dist(simplex[0], simplex[2]));
        let spread = values[2] - values[0];
        if diameter < term.x_tol
            || spread.abs() <= term.f_tol * values[0].abs()
            || values[0] == f64::NEG_INFINITY
        {
            return Minimum {
                x: simplex[0],
                f: values[0],
                evals: evals.get(),
                converged: true,
            };
        }
        if evals.get() >= term.max_evals {
            return Minimum {
                x: simplex[0],
                f: values[0],
                evals: evals.get(),
                converged: false,
            };
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = bounds.project(lerp(centroid, simplex[2], -REFLECT));
        let f_reflected = eval(reflected);

        if f_reflected < values[0] {
            let expanded = bounds.project(lerp(centroid, simplex[2], -EXPAND));
            let f_expanded = eval(expanded);
            if f_expanded < f_reflected {
                simplex[2] = expanded;
                values[2] = f_expanded;
            } else {
                simplex[2] = reflected;
                values[2] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[1] {
            simplex[2] = reflected;
            values[2] = f_reflected;
            continue;
        }

        let (contracted, f_contracted) = if f_reflected < values[2] {
            let c = lerp(centroid, reflected, CONTRACT);
            (c, eval(c))
        } else {
            let c = lerp(centroid, simplex[2], CONTRACT);
            (c, eval(c))
        };
        if f_contracted < values[2].min(f_reflected) {
            simplex[2] = contracted;
            values[2] = f_contracted;
            continue;
        }

        for k in 1..3 {
            simplex[k] = lerp(simplex[0], simplex[k], SHRINK);
            values[k] = eval(simplex[k]);
        }
    }
}
