//! Soil sample and environment descriptions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::units::g_per_ml_to_kg_per_m3;

/// Default pore-space transfer term, W/(m·K). Not a measured value.
pub const DEFAULT_PORE_CONDUCTIVITY: f64 = 1.0e-3;
/// Default grain-contact conduction term, W/(m·K). Not a measured value.
pub const DEFAULT_CONTACT_CONDUCTIVITY: f64 = 1.0e-3;

const KIRCHHOFF_TOLERANCE: f64 = 1e-9;

fn default_emissivity() -> f64 {
    1.0
}

fn default_pore_conductivity() -> f64 {
    DEFAULT_PORE_CONDUCTIVITY
}

fn default_contact_conductivity() -> f64 {
    DEFAULT_CONTACT_CONDUCTIVITY
}

/// Thermophysical description of one sample bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoilSample {
    pub name: String,
    /// Grain diameter range in millimetres, `(lo, hi)`.
    pub granularity_mm: (f64, f64),
    /// Bulk density in g/ml.
    pub density_g_ml: f64,
    /// Bin length × width × depth in centimetres.
    pub bin_dims_cm: [f64; 3],
    #[serde(default = "default_emissivity")]
    pub emissivity: f64,
    #[serde(default)]
    pub albedo: f64,
    /// Thermal inertia in tiu, when known a priori.
    #[serde(default)]
    pub prescribed_inertia: Option<f64>,
    /// Specific heat in J/(kg·K).
    #[serde(default)]
    pub specific_heat: Option<f64>,
    /// Soil layer thickness in metres. Defaults to the bin depth.
    #[serde(default)]
    pub layer_thickness_m: Option<f64>,
    /// Pore-space transfer term k_r, W/(m·K).
    #[serde(default = "default_pore_conductivity")]
    pub pore_conductivity: f64,
    /// Grain-contact conduction term k_c, W/(m·K).
    #[serde(default = "default_contact_conductivity")]
    pub contact_conductivity: f64,
}

impl SoilSample {
    /// A sample with unit emissivity, zero albedo and no thermophysical overrides.
    pub fn new(
        name: impl Into<String>,
        granularity_mm: (f64, f64),
        density_g_ml: f64,
        bin_dims_cm: [f64; 3],
    ) -> Self {
        Self {
            name: name.into(),
            granularity_mm,
            density_g_ml,
            bin_dims_cm,
            emissivity: 1.0,
            albedo: 0.0,
            prescribed_inertia: None,
            specific_heat: None,
            layer_thickness_m: None,
            pore_conductivity: DEFAULT_PORE_CONDUCTIVITY,
            contact_conductivity: DEFAULT_CONTACT_CONDUCTIVITY,
        }
    }

    pub fn with_specific_heat(mut self, c: f64) -> Self {
        self.specific_heat = Some(c);
        self
    }

    pub fn with_inertia(mut self, inertia: f64) -> Self {
        self.prescribed_inertia = Some(inertia);
        self
    }

    /// Midpoint of the granularity range, mm.
    pub fn mean_grain_mm(&self) -> f64 {
        0.5 * (self.granularity_mm.0 + self.granularity_mm.1)
    }

    pub fn density_kg_m3(&self) -> f64 {
        g_per_ml_to_kg_per_m3(self.density_g_ml)
    }

    pub fn layer_thickness(&self) -> f64 {
        self.layer_thickness_m
            .unwrap_or(self.bin_dims_cm[2] / 100.0)
    }

    /// Collects every violated invariant. Kirchhoff's law `A + ε = 1` is only
    /// checked when `kirchhoff` is set.
    pub fn violations(&self, kirchhoff: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.name.trim().is_empty() {
            out.push(Violation::new("name", "must not be empty"));
        }
        let (lo, hi) = self.granularity_mm;
        if !positive(lo) || !positive(hi) {
            out.push(Violation::new("granularity_mm", "bounds must be finite and > 0"));
        } else if lo > hi {
            out.push(Violation::new(
                "granularity_mm",
                format!("lower bound {lo} exceeds upper bound {hi}"),
            ));
        }
        if !positive(self.density_g_ml) {
            out.push(Violation::new("density_g_ml", "must be finite and > 0"));
        }
        for (i, d) in self.bin_dims_cm.iter().enumerate() {
            if !positive(*d) {
                out.push(Violation::new(format!("bin_dims_cm[{i}]"), "must be finite and > 0"));
            }
        }
        if !(self.emissivity > 0.0 && self.emissivity <= 1.0) {
            out.push(Violation::new("emissivity", "must lie in (0, 1]"));
        }
        if !(self.albedo >= 0.0 && self.albedo < 1.0) {
            out.push(Violation::new("albedo", "must lie in [0, 1)"));
        }
        if kirchhoff && (self.albedo + self.emissivity - 1.0).abs() > KIRCHHOFF_TOLERANCE {
            out.push(Violation::new(
                "emissivity",
                format!(
                    "albedo + emissivity = {} violates Kirchhoff's law",
                    self.albedo + self.emissivity
                ),
            ));
        }
        if let Some(i) = self.prescribed_inertia {
            if !positive(i) {
                out.push(Violation::new("prescribed_inertia", "must be finite and > 0"));
            }
        }
        if let Some(c) = self.specific_heat {
            if !positive(c) {
                out.push(Violation::new("specific_heat", "must be finite and > 0"));
            }
        }
        if let Some(t) = self.layer_thickness_m {
            if !positive(t) {
                out.push(Violation::new("layer_thickness_m", "must be finite and > 0"));
            }
        }
        for (field, v) in [
            ("pore_conductivity", self.pore_conductivity),
            ("contact_conductivity", self.contact_conductivity),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                out.push(Violation::new(field, "must be finite and >= 0"));
            }
        }
        out
    }
}

/// Returns the sample unchanged if every invariant holds.
pub fn validate_sample(sample: SoilSample) -> Result<SoilSample> {
    validate_sample_with(sample, false)
}

/// Like [`validate_sample`], optionally enforcing Kirchhoff's law.
pub fn validate_sample_with(sample: SoilSample, kirchhoff: bool) -> Result<SoilSample> {
    let v = sample.violations(kirchhoff);
    if v.is_empty() {
        Ok(sample)
    } else {
        Err(Error::Validation(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GasKind {
    /// 95 % CO₂ Mars-analog mixture.
    #[serde(alias = "co2")]
    Co2_95,
    EarthAir,
    Vacuum,
}

/// How the surface is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingMode {
    /// Radiative exchange with chamber heaters.
    Chamber,
    /// Absorbed shortwave flux against surface emission.
    PlanetarySurface,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub pressure_mbar: f64,
    pub gas: GasKind,
    pub mode: ForcingMode,
    /// Diurnal or actuation period, seconds.
    pub period_s: f64,
}

impl EnvironmentConfig {
    pub fn new(pressure_mbar: f64, gas: GasKind, mode: ForcingMode, period_s: f64) -> Result<Self> {
        let env = Self {
            pressure_mbar,
            gas,
            mode,
            period_s,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if !(self.pressure_mbar.is_finite() && self.pressure_mbar >= 0.0) {
            v.push(Violation::new("pressure_mbar", "must be finite and >= 0"));
        }
        if !(self.period_s.is_finite() && self.period_s > 0.0) {
            v.push(Violation::new("period_s", "must be finite and > 0"));
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}
