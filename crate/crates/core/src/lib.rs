//! Soil thermophysics toolkit.
//!
//! * [`simulator`] runs diurnal heating of a soil column, either inside an
//!   environmental chamber driven by radiant heaters or on a planetary surface
//!   driven by sunlight.
//! * [`imaging`] turns radiometric thermal frames into per-soil surface
//!   temperature series.
//! * [`estimators`] derives apparent and sinusoidal thermal inertia from those
//!   series.
//! * [`conductivity`] models how granular-soil conductivity depends on gas
//!   pressure and grain size.

pub mod config;
pub mod conductivity;
pub mod error;
pub mod estimators;
pub mod fixtures;
pub mod imaging;
pub mod sample;
pub mod simulator;
pub mod units;

pub use error::{Error, Result, Violation};
pub use sample::{validate_sample, validate_sample_with, EnvironmentConfig, ForcingMode, GasKind, SoilSample};
pub use units::{celsius_to_kelvin, kelvin_to_celsius, PhysicalConstants, Temperature};
