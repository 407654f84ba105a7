//! Range specs: `a:b:n` (n evenly spaced points, endpoints included), a
//! comma-separated list, or a single number.

use crate::error::{CliError, Result};

pub fn parse_spec(name: &str, spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let bad = |why: &str| CliError::validation(format!("--{name} `{spec}`: {why}"));
    if spec.is_empty() {
        return Err(bad("empty range"));
    }
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad("expected a:b:n"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad("bad start"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("bad end"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("bad point count"))?;
        match n {
            0 => return Err(bad("empty range")),
            1 if lo != hi => return Err(bad("a single point needs a == b")),
            1 => vec![lo],
            _ if lo > hi => return Err(bad("bounds out of order")),
            // Weighted form hits both endpoints exactly.
            _ => (0..n)
                .map(|i| ((n - 1 - i) as f64 * lo + i as f64 * hi) / (n - 1) as f64)
                .collect(),
        }
    } else {
        spec.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(&format!("`{}` is not a number", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(values)
}

/// Concatenates several specs, as given by a repeatable flag.
pub fn parse_specs(name: &str, specs: &[String]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for s in specs {
        out.extend(parse_spec(name, s)?);
    }
    if out.is_empty() {
        return Err(CliError::validation(format!("--{name}: empty grid")));
    }
    Ok(out)
}
