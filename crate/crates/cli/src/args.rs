use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tentlab_core::experiments::{
    DEFAULT_FLAT_TOL, DEFAULT_JUMP_TOL, DEFAULT_MIN_FLAT, SQRT2_DIGITS,
};
use tentlab_core::rabbits::BLACK_RABBIT_X1;
use tentlab_core::{BackendSpec, Result as CoreResult};

#[derive(Debug, Parser)]
#[command(
    name = "tentlab",
    version,
    about = "Tent-map dynamics and cycle stabilization experiments"
)]
pub struct Cli {
    /// Directory that receives CSV, JSON and SVG artifacts.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plain orbit of T^k.
    Simulate(SimulateArgs),
    /// Periodic orbits of a given period.
    Cycles(CyclesArgs),
    /// Stabilized (six-tap averaged) run from one start.
    Stabilize(StabilizeArgs),
    /// Stabilized runs over a net of starts, classified by endpoint.
    Sweep(SweepArgs),
    /// Stabilized run checked for a flat stretch followed by escape.
    Escape(EscapeArgs),
    /// Orbit of 1/2 under T_h.
    Series(SeriesArgs),
    /// High-precision decimal orbit of 1/2 for h near sqrt(2).
    Sqrt2(Sqrt2Args),
    /// Fibonacci recurrence and its stable/unstable split.
    Fib(FibArgs),
    /// Companion-map spectra and equilibrium stability.
    Spectrum(SpectrumArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Binary64,
    Rational,
    Decimal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BackendArgs {
    #[arg(long, value_enum, default_value = "binary64")]
    pub backend: BackendChoice,
    /// Significant digits for the decimal backend.
    #[arg(long, default_value_t = 50)]
    pub precision: u32,
}

impl BackendArgs {
    pub fn spec(&self) -> CoreResult<BackendSpec> {
        match self.backend {
            BackendChoice::Binary64 => Ok(BackendSpec::BINARY64),
            BackendChoice::Rational => Ok(BackendSpec::RATIONAL),
            BackendChoice::Decimal => BackendSpec::decimal(self.precision),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MapArgs {
    #[arg(long, default_value = "1.5")]
    pub h: String,
    /// Power of the map (cycles of length k become fixed points).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value = "0.5")]
    pub x0: String,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub backend: BackendArgs,
    /// Also write an SVG plot.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CyclesArgs {
    #[arg(long, default_value = "1.5")]
    pub h: String,
    #[arg(long, default_value_t = 2)]
    pub period: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub backend: BackendArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilizerArgs {
    #[arg(long, default_value = "1.2")]
    pub sigma: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub backend: BackendArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilizeArgs {
    #[arg(long, default_value = "0.3")]
    pub x0: String,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub stab: StabilizerArgs,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// `uniform:N` or `triadic:M`.
    #[arg(long, default_value = "uniform:100000")]
    pub net: String,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub stab: StabilizerArgs,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EscapeArgs {
    #[arg(long, default_value = "0.4")]
    pub x0: String,
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_FLAT_TOL)]
    pub flat_tol: f64,
    #[arg(long, default_value_t = DEFAULT_JUMP_TOL)]
    pub jump_tol: f64,
    #[arg(long, default_value_t = DEFAULT_MIN_FLAT)]
    pub min_flat: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub stab: StabilizerArgs,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesArgs {
    #[arg(long, default_value = "1.5")]
    pub h: String,
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub backend: BackendArgs,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Sqrt2Args {
    /// Decimal digits of h.
    #[arg(long, default_value = SQRT2_DIGITS)]
    pub h: String,
    #[arg(long, default_value_t = 70)]
    pub precision: u32,
    #[arg(long, default_value_t = 600)]
    pub steps: usize,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FibArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value = BLACK_RABBIT_X1, allow_hyphen_values = true)]
    pub x1: String,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    /// Also write the (x_n, x_{n+1}) phase table and manifold slopes.
    #[arg(long)]
    pub phase: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub backend: BackendArgs,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    /// Slope of f at a fixed point; omitted means all equilibria of T^k.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub stab: StabilizerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
