use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conductivity::{bulk_conductivity, GasConductionParams};
use crate::error::{ensure_positive, Error, Result};
use crate::sample::{EnvironmentConfig, SoilSample};

pub const MIN_NODES: usize = 8;
/// Smallest allowed column depth in skin depths when the column is sized
/// from the skin depth.
pub const MIN_DEPTH_FACTOR: f64 = 3.0;

/// E-folding depth of a periodic thermal wave, `√(k·P / (π·ρc))`.
pub fn skin_depth(k: f64, rho_c: f64, period: f64) -> Result<f64> {
    ensure_positive("k", k)?;
    ensure_positive("rho_c", rho_c)?;
    ensure_positive("period", period)?;
    Ok((k * period / (PI * rho_c)).sqrt())
}

/// Conductivity and volumetric heat capacity of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thermophysics {
    pub k: f64,
    pub rho_c: f64,
}

impl Thermophysics {
    pub fn inertia(&self) -> f64 {
        (self.k * self.rho_c).sqrt()
    }

    /// Resolves `k` and `ρc` for a sample.
    ///
    /// `ρ` comes from the bulk density and `c` must be given. With a prescribed
    /// inertia `I`, `k = I² / (ρc)`; otherwise `k` comes from the pressure- and
    /// grain-size-dependent conductivity model.
    pub fn resolve(
        soil: &SoilSample,
        env: &EnvironmentConfig,
        gas: &GasConductionParams,
    ) -> Result<Self> {
        let c = soil.specific_heat.ok_or_else(|| {
            Error::Config(format!(
                "sample `{}` needs `specific_heat` to resolve its thermophysics",
                soil.name
            ))
        })?;
        let rho_c = soil.density_kg_m3() * c;
        if !(rho_c.is_finite() && rho_c > 0.0) {
            return Err(Error::Config(format!(
                "sample `{}` has non-positive heat capacity",
                soil.name
            )));
        }
        let k = match soil.prescribed_inertia {
            Some(i) => i * i / rho_c,
            None => {
                bulk_conductivity(
                    env.pressure_mbar,
                    soil.mean_grain_mm(),
                    gas,
                    soil.pore_conductivity,
                    soil.contact_conductivity,
                )?
                .k_total
            }
        };
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Config(format!(
                "sample `{}` resolves to non-positive conductivity {k}",
                soil.name
            )));
        }
        Ok(Self { k, rho_c })
    }
}

/// How deep the simulated column reaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnDepth {
    /// A multiple of the skin depth at the environment period.
    SkinDepths(f64),
    /// The sample's layer thickness (the physical bin depth by default).
    Layer,
    /// An explicit depth in metres.
    Meters(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOptions {
    pub nodes: usize,
    pub depth: ColumnDepth,
    /// Ratio between successive node spacings; `1.0` gives a uniform grid.
    pub stretch: f64,
    pub initial_temperature_k: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            nodes: 100,
            depth: ColumnDepth::SkinDepths(5.0),
            stretch: 1.03,
            initial_temperature_k: 293.15,
        }
    }
}

/// Finite-volume discretisation of a homogeneous soil column.
///
/// Node 0 sits on the surface; each node owns the slab between the midpoints
/// to its neighbours, so the surface and bottom nodes own half-cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SimGrid {
    pub soil: SoilSample,
    pub k: f64,
    pub rho_c: f64,
    pub skin_depth: f64,
    depths: Vec<f64>,
    widths: Vec<f64>,
    /// `conductances[i]` couples node `i` and `i + 1`, W/(m²·K).
    conductances: Vec<f64>,
    temps: Vec<f64>,
}

/// Builds a grid sized in skin depths, with default spacing and initial state.
pub fn build_grid(
    soil: &SoilSample,
    env: &EnvironmentConfig,
    nodes: usize,
    depth_factor: f64,
) -> Result<SimGrid> {
    SimGrid::build(
        soil,
        env,
        &GridOptions {
            nodes,
            depth: ColumnDepth::SkinDepths(depth_factor),
            ..Default::default()
        },
        &GasConductionParams::default(),
    )
}

impl SimGrid {
    pub fn build(
        soil: &SoilSample,
        env: &EnvironmentConfig,
        opts: &GridOptions,
        gas: &GasConductionParams,
    ) -> Result<Self> {
        let props = Thermophysics::resolve(soil, env, gas)?;
        Self::from_thermophysics(soil, props, env.period_s, opts)
    }

    pub fn from_thermophysics(
        soil: &SoilSample,
        props: Thermophysics,
        period: f64,
        opts: &GridOptions,
    ) -> Result<Self> {
        if opts.nodes < MIN_NODES {
            return Err(Error::Config(format!(
                "grid needs at least {MIN_NODES} nodes, got {}",
                opts.nodes
            )));
        }
        if !(opts.stretch.is_finite() && opts.stretch >= 1.0) {
            return Err(Error::Config(format!("stretch must be >= 1, got {}", opts.stretch)));
        }
        if !(opts.initial_temperature_k.is_finite() && opts.initial_temperature_k > 0.0) {
            return Err(Error::Config("initial temperature must be > 0 K".into()));
        }
        let delta = skin_depth(props.k, props.rho_c, period)?;
        let total = match opts.depth {
            ColumnDepth::SkinDepths(f) => {
                if !(f.is_finite() && f >= MIN_DEPTH_FACTOR) {
                    return Err(Error::Config(format!(
                        "depth factor must be >= {MIN_DEPTH_FACTOR}, got {f}"
                    )));
                }
                f * delta
            }
            ColumnDepth::Layer => soil.layer_thickness(),
            ColumnDepth::Meters(m) => m,
        };
        ensure_positive("column depth", total)?;

        let depths = stretched_depths(opts.nodes, total, opts.stretch);
        let n = depths.len();
        let mut widths = vec![0.0; n];
        for i in 0..n {
            let upper = if i == 0 { 0.0 } else { 0.5 * (depths[i - 1] + depths[i]) };
            let lower = if i == n - 1 { depths[i] } else { 0.5 * (depths[i] + depths[i + 1]) };
            widths[i] = lower - upper;
        }
        let conductances = depths.windows(2).map(|w| props.k / (w[1] - w[0])).collect();
        Ok(Self {
            soil: soil.clone(),
            k: props.k,
            rho_c: props.rho_c,
            skin_depth: delta,
            depths,
            widths,
            conductances,
            temps: vec![opts.initial_temperature_k; opts.nodes],
        })
    }

    pub fn inertia(&self) -> f64 {
        (self.k * self.rho_c).sqrt()
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn conductances(&self) -> &[f64] {
        &self.conductances
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temps
    }

    pub(crate) fn temperatures_mut(&mut self) -> &mut [f64] {
        &mut self.temps
    }

    pub fn surface_temperature(&self) -> f64 {
        self.temps[0]
    }

    pub fn total_depth(&self) -> f64 {
        *self.depths.last().expect("grid has nodes")
    }

    pub fn set_uniform_temperature(&mut self, kelvin: f64) -> Result<()> {
        ensure_positive("temperature", kelvin)?;
        self.temps.iter_mut().for_each(|t| *t = kelvin);
        Ok(())
    }

    /// Column heat content `Σ ρc·w·T`, J/m².
    pub fn heat_content(&self) -> f64 {
        self.widths
            .iter()
            .zip(&self.temps)
            .map(|(w, t)| self.rho_c * w * t)
            .sum()
    }

    /// Linear interpolation of the temperature profile at `depth`.
    pub fn temperature_at(&self, depth: f64) -> Option<f64> {
        interpolate(&self.depths, &self.temps, depth)
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if !(x >= xs[0] && x <= xs[xs.len() - 1]) {
        return None;
    }
    let hi = xs.partition_point(|&d| d < x).min(xs.len() - 1);
    if hi == 0 || xs[hi] == x {
        return Some(ys[hi]);
    }
    let lo = hi - 1;
    let f = (x - xs[lo]) / (xs[hi] - xs[lo]);
    Some(ys[lo] + f * (ys[hi] - ys[lo]))
}

fn stretched_depths(nodes: usize, total: f64, stretch: f64) -> Vec<f64> {
    let intervals = nodes - 1;
    let first = if stretch == 1.0 {
        total / intervals as f64
    } else {
        total * (stretch - 1.0) / (stretch.powi(intervals as i32) - 1.0)
    };
    let mut depths = Vec::with_capacity(nodes);
    let mut z = 0.0;
    let mut h = first;
    depths.push(0.0);
    for _ in 0..intervals {
        z += h;
        h *= stretch;
        depths.push(z);
    }
    // Pin the bottom exactly.
    depths[intervals] = total;
    depths
}
