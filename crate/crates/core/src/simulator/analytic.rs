//! Periodic solution of a homogeneous half-space under sinusoidal surface flux.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{ensure_non_negative, ensure_positive, Result};

/// Temperature response at one depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticResponse {
    /// Temperature swing, in the same peak/peak-to-peak sense as the flux swing given.
    pub amplitude: f64,
    /// Lag of the temperature wave behind the surface flux, rad.
    pub phase_lag: f64,
}

/// `ΔT(z) = ΔG / (I·√(2π/P)) · exp(−z/δ)`, lagging the surface flux by `z/δ + π/4`.
pub fn analytic_reference(
    inertia: f64,
    flux_amplitude: f64,
    period: f64,
    depth: f64,
    skin_depth: f64,
) -> Result<AnalyticResponse> {
    ensure_positive("inertia", inertia)?;
    ensure_non_negative("flux_amplitude", flux_amplitude)?;
    ensure_positive("period", period)?;
    ensure_non_negative("depth", depth)?;
    ensure_positive("skin_depth", skin_depth)?;
    let x = depth / skin_depth;
    Ok(AnalyticResponse {
        amplitude: flux_amplitude / (inertia * (2.0 * PI / period).sqrt()) * (-x).exp(),
        phase_lag: x + FRAC_PI_4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_amplitude_from_bedrock_inputs() {
        let r = analytic_reference(308.6, 268.0, 320.0 * 60.0, 0.0, 0.05).unwrap();
        assert!((r.amplitude - 48.0).abs() < 0.01, "{}", r.amplitude);
        assert_eq!(r.phase_lag, FRAC_PI_4);
    }

    #[test]
    fn one_skin_depth_attenuates_by_e() {
        let s = analytic_reference(400.0, 50.0, 18000.0, 0.0, 0.02).unwrap();
        let d = analytic_reference(400.0, 50.0, 18000.0, 0.02, 0.02).unwrap();
        assert!((s.amplitude / d.amplitude - std::f64::consts::E).abs() < 1e-12);
        assert!((d.phase_lag - (1.0 + FRAC_PI_4)).abs() < 1e-12);
    }

    #[test]
    fn large_inertia_limit() {
        let r = analytic_reference(1e15, 50.0, 18000.0, 0.0, 0.02).unwrap();
        assert!(r.amplitude < 1e-9);
        assert!(analytic_reference(0.0, 50.0, 18000.0, 0.0, 0.02).is_err());
    }
}
