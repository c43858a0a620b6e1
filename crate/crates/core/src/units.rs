//! Temperatures, physical constants and the few unit conversions the toolkit needs.
//!
//! Kelvin is the canonical internal unit. Celsius only appears at file and
//! command-line boundaries.

use std::fmt;

use crate::error::{Error, Result};

/// Offset between the Celsius and Kelvin scales.
pub const CELSIUS_OFFSET: f64 = 273.15;

/// Stefan–Boltzmann constant, W/(m²·K⁴).
pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;

/// Scale factor that expresses apparent thermal inertia in tiu.
pub const ATI_COEFFICIENT: f64 = 4186.0;

/// Physical constants used by the energy budgets and estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub stefan_boltzmann: f64,
    pub ati_coefficient: f64,
}

impl PhysicalConstants {
    pub const STANDARD: PhysicalConstants = PhysicalConstants {
        stefan_boltzmann: STEFAN_BOLTZMANN,
        ati_coefficient: ATI_COEFFICIENT,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Converts a Celsius temperature to Kelvin.
///
/// Fails for non-finite inputs and for anything at or below absolute zero.
pub fn celsius_to_kelvin(celsius: f64) -> Result<f64> {
    if !celsius.is_finite() {
        return Err(Error::UnitDomain(format!(
            "temperature {celsius} °C is not finite"
        )));
    }
    if celsius <= -CELSIUS_OFFSET {
        return Err(Error::UnitDomain(format!(
            "temperature {celsius} °C is at or below absolute zero"
        )));
    }
    Ok(celsius + CELSIUS_OFFSET)
}

pub fn kelvin_to_celsius(kelvin: f64) -> Result<f64> {
    if !kelvin.is_finite() || kelvin <= 0.0 {
        return Err(Error::UnitDomain(format!(
            "temperature {kelvin} K is not a physical absolute temperature"
        )));
    }
    Ok(kelvin - CELSIUS_OFFSET)
}

/// An absolute temperature, stored in Kelvin.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub fn from_kelvin(kelvin: f64) -> Result<Self> {
        kelvin_to_celsius(kelvin)?;
        Ok(Self(kelvin))
    }

    pub fn from_celsius(celsius: f64) -> Result<Self> {
        celsius_to_kelvin(celsius).map(Self)
    }

    pub fn kelvin(self) -> f64 {
        self.0
    }

    pub fn celsius(self) -> f64 {
        self.0 - CELSIUS_OFFSET
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} K", self.0)
    }
}

/// Minutes to seconds.
pub fn minutes(m: f64) -> f64 {
    m * 60.0
}

/// Bulk density in g/ml to kg/m³.
pub fn g_per_ml_to_kg_per_m3(density: f64) -> f64 {
    density * 1000.0
}
