//! TOML run configuration for the simulator.
//!
//! ```toml
//! [sample]
//! name = "Bedrock"
//! granularity_mm = [20.0, 70.0]
//! density_g_ml = 1.88
//! bin_dims_cm = [30.0, 20.0, 7.0]
//! specific_heat = 800.0
//!
//! [environment]
//! pressure_mbar = 8.0
//! gas = "co2_95"
//! mode = "chamber"
//! period_min = 297.0
//!
//! [forcing]
//! shape = "sinusoid"
//! mean = 50.0        # °C for the chamber heater, W/m² for sunlight
//! amplitude = 30.0
//! ```
//!
//! `[gas_conduction]`, `[grid]` and `[run]` are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conductivity::GasConductionParams;
use crate::error::{Error, Result};
use crate::sample::{EnvironmentConfig, ForcingMode, GasKind, SoilSample};
use crate::simulator::{ColumnDepth, ForcingKind, ForcingProfile, GridOptions, RunOptions, SimGrid, SimResult};
use crate::units::{celsius_to_kelvin, minutes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub sample: SoilSample,
    pub environment: EnvironmentSection,
    #[serde(default)]
    pub gas_conduction: GasConductionParams,
    pub forcing: ForcingSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub run: RunOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSection {
    pub pressure_mbar: f64,
    #[serde(default = "default_gas")]
    pub gas: GasKind,
    pub mode: ForcingMode,
    pub period_min: f64,
}

fn default_gas() -> GasKind {
    GasKind::Co2_95
}

/// One period of forcing. Values are heater temperatures in °C in chamber
/// mode and incident shortwave flux in W/m² in planetary mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingSection {
    Constant {
        value: f64,
    },
    Sinusoid {
        mean: f64,
        amplitude: f64,
        #[serde(default)]
        phase_rad: f64,
        #[serde(default = "default_samples_per_period")]
        samples_per_period: usize,
    },
    Samples {
        times_min: Vec<f64>,
        values: Vec<f64>,
    },
}

fn default_samples_per_period() -> usize {
    720
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub nodes: usize,
    pub depth: ColumnDepth,
    pub stretch: f64,
    /// Uniform starting temperature. Without it the column starts at the
    /// period-averaged radiative equilibrium of the forcing.
    #[serde(rename = "initial_temperature_C", skip_serializing_if = "Option::is_none")]
    pub initial_temperature_c: Option<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = GridOptions::default();
        Self {
            nodes: g.nodes,
            depth: g.depth,
            stretch: g.stretch,
            initial_temperature_c: None,
        }
    }
}

impl SimulationConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| {
            let at = e
                .span()
                .map(|s| format!(" (line {})", text[..s.start].lines().count().max(1)))
                .unwrap_or_default();
            Error::Config(format!("{}{at}: {}", path.display(), e.message()))
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    pub fn environment(&self) -> Result<EnvironmentConfig> {
        let e = &self.environment;
        EnvironmentConfig::new(e.pressure_mbar, e.gas, e.mode, minutes(e.period_min))
    }

    pub fn forcing(&self) -> Result<ForcingProfile> {
        let env = self.environment()?;
        let kind = match env.mode {
            ForcingMode::Chamber => ForcingKind::HeaterTemperature,
            ForcingMode::PlanetarySurface => ForcingKind::ShortwaveFlux,
        };
        let to_internal = |v: f64| match kind {
            ForcingKind::HeaterTemperature => celsius_to_kelvin(v),
            ForcingKind::ShortwaveFlux => Ok(v),
        };
        let period = env.period_s;
        match &self.forcing {
            ForcingSection::Constant { value } => ForcingProfile::constant(kind, to_internal(*value)?, period),
            ForcingSection::Sinusoid {
                mean,
                amplitude,
                phase_rad,
                samples_per_period,
            } => {
                if kind == ForcingKind::HeaterTemperature {
                    celsius_to_kelvin(mean - amplitude.abs())?;
                }
                let mean = to_internal(*mean)?;
                ForcingProfile::sinusoid(kind, mean, *amplitude, *phase_rad, period, *samples_per_period)
            }
            ForcingSection::Samples { times_min, values } => {
                if times_min.len() != values.len() {
                    return Err(Error::Config(format!(
                        "forcing: {} times but {} values",
                        times_min.len(),
                        values.len()
                    )));
                }
                let pts = times_min
                    .iter()
                    .zip(values)
                    .map(|(&t, &v)| Ok((minutes(t), to_internal(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                ForcingProfile::new(kind, pts, period)
            }
        }
    }

    pub fn grid_options(&self) -> Result<GridOptions> {
        let initial_temperature_k = match self.grid.initial_temperature_c {
            Some(c) => celsius_to_kelvin(c)?,
            None => self
                .forcing()?
                .equilibrium_temperature(self.sample.emissivity, self.sample.albedo),
        };
        Ok(GridOptions {
            nodes: self.grid.nodes,
            depth: self.grid.depth,
            stretch: self.grid.stretch,
            initial_temperature_k,
        })
    }

    pub fn build_grid(&self) -> Result<SimGrid> {
        SimGrid::build(
            &self.sample,
            &self.environment()?,
            &self.grid_options()?,
            &self.gas_conduction,
        )
    }

    /// Builds the grid and runs the configured number of cycles.
    pub fn simulate(&self) -> Result<SimResult> {
        let env = self.environment()?;
        let forcing = self.forcing()?;
        let mut grid = self.build_grid()?;
        crate::simulator::run_diurnal(&mut grid, &forcing, &env, &self.run)
    }
}
