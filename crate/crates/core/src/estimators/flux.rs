//! Surface energy budgets.

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::units::STEFAN_BOLTZMANN;

fn check_emissivity(emissivity: f64) -> Result<()> {
    if emissivity > 0.0 && emissivity <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("emissivity", format!("must lie in (0, 1], got {emissivity}")))
    }
}

/// Net radiative flux into a sample surface inside the chamber, W/m².
///
/// `ε·σ·(T_heater⁴ − T_s⁴)`, positive when the heater is hotter than the surface.
pub fn net_flux(t_heater: f64, t_surface: f64, emissivity: f64) -> Result<f64> {
    ensure_positive("t_heater", t_heater)?;
    ensure_positive("t_surface", t_surface)?;
    check_emissivity(emissivity)?;
    Ok(emissivity * STEFAN_BOLTZMANN * (t_heater.powi(4) - t_surface.powi(4)))
}

/// Net flux for a surface under shortwave illumination, W/m².
///
/// `(1 − A)·R_sw − ε·σ·T_s⁴`.
pub fn planetary_net_flux(r_sw: f64, t_surface: f64, albedo: f64, emissivity: f64) -> Result<f64> {
    ensure_non_negative("r_sw", r_sw)?;
    ensure_positive("t_surface", t_surface)?;
    check_emissivity(emissivity)?;
    if !(0.0..=1.0).contains(&albedo) {
        return Err(Error::domain("albedo", format!("must lie in [0, 1], got {albedo}")));
    }
    Ok((1.0 - albedo) * r_sw - emissivity * STEFAN_BOLTZMANN * t_surface.powi(4))
}
