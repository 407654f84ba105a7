use crate::output::Format;
use clap::{Args, Parser, Subcommand};
use qng_core::Strategy;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(
    name = "qng",
    version,
    about = "Non-Gaussianity witness for lossy cat states"
)]
pub struct Cli {
    /// Flat key=value file supplying defaults for any flag; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the witness once.
    Witness(WitnessArgs),
    /// Optimised witness for odd cats over an (alpha, epsilon) grid.
    SweepOdd(SweepArgs),
    /// Optimised witness for even cats over an (alpha, epsilon) grid.
    SweepEven(SweepArgs),
    /// Largest detectable loss per alpha and strategy.
    EpsMax(EpsMaxArgs),
    /// Wigner function on a rectangular grid.
    WignerGrid(WignerGridArgs),
    /// Cross-check the closed forms against the numerical oracles.
    Verify(VerifyArgs),
}

/// `--squeeze` value: a number or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SqueezeSpec {
    Value(f64),
    Auto,
}

impl FromStr for SqueezeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Self::Value)
            .ok_or_else(|| format!("expected a number or `auto`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OptimizerArgs {
    /// Coarse-grid nodes along s.
    #[arg(long)]
    pub grid_s: Option<usize>,
    /// Coarse-grid nodes along beta (over [beta-min, beta-max]).
    #[arg(long)]
    pub grid_beta: Option<usize>,
    /// Evaluation budget of one simplex refinement.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_max: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WitnessArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Squeezing s, or `auto` to optimise it.
    #[arg(long, allow_hyphen_values = true)]
    pub squeeze: Option<SqueezeSpec>,
    /// Displacement beta along the imaginary axis.
    #[arg(long, allow_hyphen_values = true)]
    pub disp: Option<f64>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Repeatable; each value is a number, a comma list or a:b:n.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Vec<String>,
    /// Range spec for epsilon.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EpsMaxArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Vec<String>,
    /// Cat family: -1 (odd) or 1 (even).
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Repeatable; defaults to all three.
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Vec<Strategy>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WignerGridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Range spec for x = Re(lambda).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Range spec for p = Im(lambda).
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Fixed Fock cutoff for every oracle check instead of the cutoff rule.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Replace every check tolerance with this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse::<Strategy>().map_err(|e| e.to_string())
}
