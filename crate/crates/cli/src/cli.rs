use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use soiltherm::estimators::Convention;
use soiltherm::imaging::StdKind;

#[derive(Debug, Parser)]
#[command(name = "soiltherm", version, about = "Soil thermal inertia: simulate, ingest thermal frames, estimate, report")]
pub struct Cli {
    /// Output root; each command writes into its own subdirectory.
    #[arg(long, global = true, env = "SOILTHERM_OUT", default_value = "soiltherm-out")]
    pub out: PathBuf,

    /// Worker threads for frame processing (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for synthetic fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the soil column simulator from a TOML configuration.
    Simulate(SimulateArgs),
    /// Turn a frame sequence into per-soil series and surface metrics.
    Ingest(IngestArgs),
    /// Compute ATI and I_sin from surface metrics.
    Estimate(EstimateArgs),
    /// Summarise previous outputs into a markdown report and plot data.
    Report,
    /// Write a synthetic frame dataset rendered from simulated soils.
    Synthesize(SynthesizeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Frame manifest CSV (`path,timestamp_s`), or a directory of `.txt` frames read in name order.
    #[arg(long)]
    pub frames_manifest: PathBuf,
    /// Spacing assumed between frames when a directory is given, s.
    #[arg(long, default_value_t = 60.0)]
    pub frame_interval: f64,
    /// TOML file with `[[roi]]` polygons.
    #[arg(long)]
    pub roi: PathBuf,
    /// Thermocouple CSV (`time_s,heater_C,air_C,setpoint_C[,subsurface_C]`).
    #[arg(long)]
    pub aux: Option<PathBuf>,
    /// Label written to the metrics summary.
    #[arg(long, default_value = "1")]
    pub experiment: String,
    /// Actuation period recorded with the metrics, minutes.
    #[arg(long)]
    pub period_min: Option<f64>,
    #[arg(long, default_value_t = soiltherm::imaging::FRAME_WIDTH)]
    pub width: usize,
    #[arg(long, default_value_t = soiltherm::imaging::FRAME_HEIGHT)]
    pub height: usize,
    #[arg(long, default_value_t = 1.0)]
    pub emissivity: f64,
    /// Widest thermocouple sampling gap interpolated across, s.
    #[arg(long, default_value_t = 120.0)]
    pub max_aux_gap: f64,
    #[arg(long, value_enum, default_value = "population")]
    pub std: StdArg,
    /// Moving-average window for transient detection, samples.
    #[arg(long, default_value_t = soiltherm::imaging::DEFAULT_SMOOTHING_WINDOW)]
    pub smoothing_window: usize,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum StdArg {
    Population,
    Sample,
}

impl From<StdArg> for StdKind {
    fn from(s: StdArg) -> Self {
        match s {
            StdArg::Population => StdKind::Population,
            StdArg::Sample => StdKind::Sample,
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Metrics CSV; defaults to the output of `ingest`.
    #[arg(long, conflicts_with = "bundled")]
    pub metrics: Option<PathBuf>,
    /// Use the bundled chamber-experiment metrics, periods and reference values.
    #[arg(long)]
    pub bundled: bool,
    /// Period for records that carry none, minutes.
    #[arg(long)]
    pub period_min: Option<f64>,
    /// Convention compared against the reference table (both are always computed).
    #[arg(long, default_value = "init", value_name = "init|minmax")]
    pub convention: Convention,
    /// Reported values to compare against (`estimator,experiment,soil,value`).
    #[arg(long)]
    pub reference_table: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub albedo: f64,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long, default_value_t = 24)]
    pub frames: usize,
    #[arg(long, default_value_t = soiltherm::imaging::FRAME_WIDTH)]
    pub width: usize,
    #[arg(long, default_value_t = soiltherm::imaging::FRAME_HEIGHT)]
    pub height: usize,
    #[arg(long, default_value_t = 297.0)]
    pub period_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub pressure_mbar: f64,
    /// Render every soil as a uniform patch with no sensor noise.
    #[arg(long)]
    pub uniform: bool,
}
