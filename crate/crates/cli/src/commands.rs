use crate::args::{
    EpsMaxArgs, OptimizerArgs, OutputArgs, SqueezeSpec, SweepArgs, WignerGridArgs, WitnessArgs,
};
use crate::config_file::ConfigFile;
use crate::error::{status_tag, CliError, Result};
use crate::grid::{parse_spec, parse_specs};
use crate::output::{Cell, Format, Table};
use qng_core::{
    epsilon_max, lossy_cat_wigner, optimize_even, optimize_odd, optimize_squeeze_numeric,
    s_opt_analytic, witness_delta, CatFamily, CatParams, GaussianOp, NoiseParam, OptResult,
    OptimizerConfig, PhasePoint, Strategy,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::PathBuf;

/// A finished command: the table, its config echo and where it goes.
pub struct Outcome {
    pub table: Table,
    pub config: Value,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Rows whose status is not `ok`.
    pub failures: usize,
    /// Extra top-level JSON member.
    pub extra: Option<(&'static str, Value)>,
}

const OUTPUT_KEYS: [&str; 2] = ["out", "format"];
const OPTIMIZER_KEYS: [&str; 7] = [
    "grid-s",
    "grid-beta",
    "budget",
    "s-min",
    "s-max",
    "beta-min",
    "beta-max",
];

pub(crate) fn keys(own: &[&'static str], optimizer: bool) -> Vec<&'static str> {
    let mut k = own.to_vec();
    k.extend(OUTPUT_KEYS);
    if optimizer {
        k.extend(OPTIMIZER_KEYS);
    }
    k
}

pub(crate) fn output_target(
    file: &ConfigFile,
    a: &OutputArgs,
    default: Format,
) -> Result<(Format, Option<PathBuf>)> {
    let format = file.pick("format", a.format)?.unwrap_or(default);
    let out = file.pick("out", a.out.clone())?;
    Ok((format, out))
}

fn optimizer_config(file: &ConfigFile, a: &OptimizerArgs) -> Result<OptimizerConfig> {
    let mut cfg = OptimizerConfig::default();
    if let Some(v) = file.pick("grid-s", a.grid_s)? {
        cfg.grid_s = v;
    }
    if let Some(v) = file.pick("grid-beta", a.grid_beta)? {
        cfg.grid_beta = v;
    }
    if let Some(v) = file.pick("budget", a.budget)? {
        cfg.budget = v;
    }
    if let Some(v) = file.pick("s-min", a.s_min)? {
        cfg.s_min = v;
    }
    if let Some(v) = file.pick("s-max", a.s_max)? {
        cfg.s_max = v;
    }
    if let Some(v) = file.pick("beta-min", a.beta_min)? {
        cfg.beta_min = v;
    }
    if let Some(v) = file.pick("beta-max", a.beta_max)? {
        cfg.beta_max = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn required<T>(name: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| CliError::validation(format!("missing --{name}")))
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::validation(format!(
            "--{name} must be finite, got {v}"
        )))
    }
}

pub fn witness(file: &ConfigFile, a: &WitnessArgs) -> Result<Outcome> {
    file.check_keys(&keys(&["alpha", "xi", "epsilon", "squeeze", "disp"], true))?;
    let alpha = finite("alpha", required("alpha", file.pick("alpha", a.alpha)?)?)?;
    let xi = finite("xi", required("xi", file.pick("xi", a.xi)?)?)?;
    let eps = required("epsilon", file.pick("epsilon", a.epsilon)?)?;
    let squeeze = file
        .pick("squeeze", a.squeeze)?
        .unwrap_or(SqueezeSpec::Value(0.0));
    let beta = finite("disp", file.pick("disp", a.disp)?.unwrap_or(0.0))?;
    let cfg = optimizer_config(file, &a.optimizer)?;
    let (format, out) = output_target(file, &a.output, Format::Csv)?;

    let cat = CatParams::new(alpha, xi)?;
    let noise = NoiseParam::new(eps)?;
    let s = match squeeze {
        SqueezeSpec::Value(s) => s,
        SqueezeSpec::Auto if xi == -1.0 => s_opt_analytic(alpha, eps)?,
        SqueezeSpec::Auto => optimize_squeeze_numeric(&cat, noise, beta, &cfg)?.op.s,
    };
    let r = witness_delta(&cat, noise, GaussianOp::new(s, beta));

    let mut table = Table::new(&[
        "alpha", "xi", "epsilon", "s", "beta", "w0", "nbar_op", "bound", "delta",
    ]);
    table.push(vec![
        r.alpha.into(),
        r.xi.into(),
        r.epsilon.into(),
        r.op.s.into(),
        r.op.beta.into(),
        r.w0.into(),
        r.nbar_op.into(),
        r.bound.into(),
        r.delta.into(),
    ]);
    let squeeze_echo = match squeeze {
        SqueezeSpec::Auto => json!("auto"),
        SqueezeSpec::Value(v) => json!(v),
    };
    let config = json!({
        "command": "witness",
        "alpha": alpha,
        "xi": xi,
        "epsilon": eps,
        "squeeze": squeeze_echo,
        "disp": beta,
        "optimizer": cfg,
    });
    Ok(Outcome {
        table,
        config,
        format,
        out,
        failures: 0,
        extra: None,
    })
}

pub fn sweep(file: &ConfigFile, a: &SweepArgs, family: CatFamily) -> Result<Outcome> {
    file.check_keys(&keys(&["alpha", "epsilon"], true))?;
    let default_alpha = match family {
        CatFamily::Odd => "0.5,1.0,1.5",
        CatFamily::Even => "0.4,0.6,1.0",
    };
    let mut alpha_specs = file.pick_all("alpha", &a.alpha);
    if alpha_specs.is_empty() {
        alpha_specs.push(default_alpha.to_string());
    }
    let alphas = parse_specs("alpha", &alpha_specs)?;
    let eps_spec = file
        .pick("epsilon", a.epsilon.clone())?
        .unwrap_or_else(|| "0.01:0.99:99".to_string());
    let epsilons = parse_spec("epsilon", &eps_spec)?;
    let cfg = optimizer_config(file, &a.optimizer)?;
    let (format, out) = output_target(file, &a.output, Format::Csv)?;

    for &alpha in &alphas {
        CatParams::new(alpha, family.xi())?;
    }
    for &eps in &epsilons {
        NoiseParam::new(eps)?;
    }

    let points: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&al| epsilons.iter().map(move |&e| (al, e)))
        .collect();
    let results: Vec<qng_core::Result<OptResult>> = points
        .par_iter()
        .map(|&(alpha, eps)| match family {
            CatFamily::Odd => optimize_odd(alpha, eps),
            CatFamily::Even => optimize_even(alpha, eps, &cfg),
        })
        .collect();

    let mut table = Table::new(&[
        "alpha", "xi", "epsilon", "s_opt", "beta_opt", "w0", "nbar_op", "bound", "delta", "status",
    ]);
    let mut failures = 0;
    for (&(alpha, eps), result) in points.iter().zip(results) {
        let mut row: Vec<Cell> = vec![alpha.into(), family.xi().into(), eps.into()];
        match result {
            Ok(r) => {
                let rep = r.report;
                row.extend(
                    [r.op.s, r.op.beta, rep.w0, rep.nbar_op, rep.bound, rep.delta].map(Cell::from),
                );
                if r.converged {
                    row.push("ok".into());
                } else {
                    failures += 1;
                    row.push("optimizer-nonconvergence".into());
                }
            }
            Err(e) => {
                failures += 1;
                row.extend([f64::NAN; 6].map(Cell::from));
                row.push(status_tag(&e).into());
            }
        }
        table.push(row);
    }
    let name = match family {
        CatFamily::Odd => "sweep-odd",
        CatFamily::Even => "sweep-even",
    };
    let config = json!({
        "command": name,
        "alpha": alphas,
        "xi": family.xi(),
        "epsilon": epsilons,
        "optimizer": cfg,
    });
    Ok(Outcome {
        table,
        config,
        format,
        out,
        failures,
        extra: None,
    })
}

pub fn eps_max(file: &ConfigFile, a: &EpsMaxArgs) -> Result<Outcome> {
    file.check_keys(&keys(&["alpha", "xi", "strategy"], true))?;
    let mut alpha_specs = file.pick_all("alpha", &a.alpha);
    if alpha_specs.is_empty() {
        alpha_specs.push("0.25:2:8".to_string());
    }
    let alphas = parse_specs("alpha", &alpha_specs)?;
    let xi = required("xi", file.pick("xi", a.xi)?)?;
    let family = CatFamily::from_xi(xi)?;
    let mut strategies = a.strategy.clone();
    if strategies.is_empty() {
        strategies = file
            .all("strategy")
            .iter()
            .map(|s| s.parse::<Strategy>())
            .collect::<qng_core::Result<_>>()?;
    }
    if strategies.is_empty() {
        strategies = Strategy::ALL.to_vec();
    }
    let cfg = optimizer_config(file, &a.optimizer)?;
    let (format, out) = output_target(file, &a.output, Format::Csv)?;
    for &alpha in &alphas {
        CatParams::new(alpha, xi)?;
    }

    let jobs: Vec<(f64, Strategy)> = alphas
        .iter()
        .flat_map(|&al| strategies.iter().map(move |&st| (al, st)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(alpha, st)| epsilon_max(alpha, family, st, &cfg))
        .collect();

    let mut table = Table::new(&["alpha", "strategy", "eps_max", "bracket", "status"]);
    let mut failures = 0;
    for (&(alpha, st), result) in jobs.iter().zip(results) {
        let row = match result {
            Ok(r) => vec![
                alpha.into(),
                st.as_str().into(),
                r.eps_max.into(),
                r.bracket.into(),
                "ok".into(),
            ],
            Err(e) => {
                failures += 1;
                vec![
                    alpha.into(),
                    st.as_str().into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    status_tag(&e).into(),
                ]
            }
        };
        table.push(row);
    }
    let names: Vec<&str> = strategies.iter().map(|s| s.as_str()).collect();
    let config = json!({
        "command": "eps-max",
        "alpha": alphas,
        "xi": xi,
        "strategy": names,
        "optimizer": cfg,
    });
    Ok(Outcome {
        table,
        config,
        format,
        out,
        failures,
        extra: None,
    })
}

pub fn wigner_grid(file: &ConfigFile, a: &WignerGridArgs) -> Result<Outcome> {
    file.check_keys(&keys(&["alpha", "xi", "epsilon", "x", "p"], false))?;
    let alpha = finite("alpha", required("alpha", file.pick("alpha", a.alpha)?)?)?;
    let xi = finite("xi", required("xi", file.pick("xi", a.xi)?)?)?;
    let eps = file.pick("epsilon", a.epsilon)?.unwrap_or(0.0);
    let xs = parse_spec(
        "x",
        &file
            .pick("x", a.x.clone())?
            .unwrap_or_else(|| "-3:3:61".into()),
    )?;
    let ps = parse_spec(
        "p",
        &file
            .pick("p", a.p.clone())?
            .unwrap_or_else(|| "-3:3:61".into()),
    )?;
    let (format, out) = output_target(file, &a.output, Format::Csv)?;
    let cat = CatParams::new(alpha, xi)?;
    let noise = NoiseParam::new(eps)?;

    let mut table = Table::new(&["x", "p", "w"]);
    for &x in &xs {
        for &p in &ps {
            table.push(vec![
                x.into(),
                p.into(),
                lossy_cat_wigner(&cat, noise, PhasePoint::new(x, p)).into(),
            ]);
        }
    }
    let config = json!({
        "command": "wigner-grid",
        "alpha": alpha,
        "xi": xi,
        "epsilon": eps,
        "x": xs,
        "p": ps,
    });
    Ok(Outcome {
        table,
        config,
        format,
        out,
        failures: 0,
        extra: None,
    })
}
