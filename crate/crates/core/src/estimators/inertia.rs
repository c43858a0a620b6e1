//! The two surface-observation inertia estimators.

use std::f64::consts::PI;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::units::ATI_COEFFICIENT;

/// Apparent thermal inertia in tiu: `4186·(1 − A)/ΔT`.
pub fn ati(albedo: f64, delta_t: f64) -> Result<f64> {
    ensure_positive("delta_t", delta_t)?;
    if !(0.0..1.0).contains(&albedo) {
        return Err(Error::domain("albedo", format!("must lie in [0, 1), got {albedo}")));
    }
    Ok(ATI_COEFFICIENT * (1.0 - albedo) / delta_t)
}

/// Thermal inertia from the diurnal amplitudes of net flux and surface
/// temperature, assuming both vary sinusoidally with period `period_s`.
///
/// `ΔG / (ΔT·√(2π/P))`, in tiu.
pub fn i_sin(delta_g: f64, delta_t: f64, period_s: f64) -> Result<f64> {
    ensure_non_negative("delta_g", delta_g)?;
    ensure_positive("delta_t", delta_t)?;
    ensure_positive("period", period_s)?;
    Ok(delta_g / (delta_t * (2.0 * PI / period_s).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::minutes;

    #[test]
    fn ati_examples() {
        let a = ati(0.0, 53.3).unwrap();
        assert!((a - 78.54).abs() < 0.005);
        assert_eq!(a.round(), 79.0);
        assert_eq!(ati(0.0, 42.0).unwrap().round(), 100.0);
        assert_eq!(ati(0.5, 42.0).unwrap(), 0.5 * ati(0.0, 42.0).unwrap());
        assert!(ati(0.0, 0.0).is_err());
        assert!(ati(0.0, -3.0).is_err());
        assert!(ati(1.0, 3.0).is_err());
    }

    #[test]
    fn i_sin_examples() {
        assert_eq!(i_sin(0.0, 10.0, 3600.0).unwrap(), 0.0);
        let v = i_sin(268.0, 48.0, minutes(320.0)).unwrap();
        assert!((v - 308.6).abs() < 0.05, "{v}");
        assert!((v - 311.0).abs() / 311.0 < 0.01);
        let v = i_sin(416.0, 42.0, minutes(297.0)).unwrap();
        assert!((v - 527.5).abs() < 0.05, "{v}");
        assert!((v - 522.0).abs() / 522.0 < 0.011);
    }

    #[test]
    fn i_sin_scaling() {
        let base = i_sin(100.0, 10.0, 1000.0).unwrap();
        assert!((i_sin(200.0, 10.0, 1000.0).unwrap() - 2.0 * base).abs() < 1e-9);
        assert!((i_sin(100.0, 20.0, 1000.0).unwrap() - 0.5 * base).abs() < 1e-9);
        assert!((i_sin(100.0, 10.0, 4000.0).unwrap() - 2.0 * base).abs() < 1e-9);
    }

    #[test]
    fn i_sin_domain() {
        assert!(i_sin(-1.0, 10.0, 1.0).is_err());
        assert!(i_sin(1.0, 0.0, 1.0).is_err());
        assert!(i_sin(1.0, 1.0, 0.0).is_err());
    }
}
