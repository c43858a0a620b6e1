use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::ForcingMode;
use crate::units::STEFAN_BOLTZMANN;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingKind {
    /// Heater temperature in kelvin.
    HeaterTemperature,
    /// Incident shortwave flux in W/m².
    ShortwaveFlux,
}

impl ForcingKind {
    pub fn mode(self) -> ForcingMode {
        match self {
            ForcingKind::HeaterTemperature => ForcingMode::Chamber,
            ForcingKind::ShortwaveFlux => ForcingMode::PlanetarySurface,
        }
    }
}

/// A periodic driver defined by sample points over one period and
/// interpolated piecewise-linearly, wrapping from the last sample back to the
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcingProfile {
    pub kind: ForcingKind,
    samples: Vec<(f64, f64)>,
    pub period: f64,
}

impl ForcingProfile {
    pub fn new(kind: ForcingKind, samples: Vec<(f64, f64)>, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::domain("period", "must be finite and > 0"));
        }
        if samples.is_empty() {
            return Err(Error::Empty("forcing samples"));
        }
        for (i, &(t, v)) in samples.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::domain("samples", format!("sample {i} is not finite")));
            }
            if !(0.0..=period).contains(&t) {
                return Err(Error::domain(
                    "samples",
                    format!("sample {i} time {t} lies outside [0, {period}]"),
                ));
            }
            if i > 0 && t <= samples[i - 1].0 {
                return Err(Error::domain("samples", format!("sample {i} is not time-sorted")));
            }
            match kind {
                ForcingKind::HeaterTemperature if v <= 0.0 => {
                    return Err(Error::domain("samples", format!("heater temperature {v} K <= 0")))
                }
                ForcingKind::ShortwaveFlux if v < 0.0 => {
                    return Err(Error::domain("samples", format!("shortwave flux {v} < 0")))
                }
                _ => {}
            }
        }
        Ok(Self {
            kind,
            samples,
            period,
        })
    }

    pub fn constant(kind: ForcingKind, value: f64, period: f64) -> Result<Self> {
        Self::new(kind, vec![(0.0, value)], period)
    }

    /// `mean + amplitude·sin(2πt/P + phase)` sampled `samples` times per period.
    pub fn sinusoid(
        kind: ForcingKind,
        mean: f64,
        amplitude: f64,
        phase: f64,
        period: f64,
        samples: usize,
    ) -> Result<Self> {
        if samples < 3 {
            return Err(Error::domain("samples", "a sinusoid needs at least 3 samples"));
        }
        let pts = (0..samples)
            .map(|i| {
                let t = period * i as f64 / samples as f64;
                (t, mean + amplitude * (2.0 * PI * t / period + phase).sin())
            })
            .collect();
        Self::new(kind, pts, period)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn max_value(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at absolute time `t` (any real, wrapped into one period).
    pub fn value_at(&self, t: f64) -> f64 {
        let s = &self.samples;
        if s.len() == 1 {
            return s[0].1;
        }
        let tau = t.rem_euclid(self.period);
        let idx = s.partition_point(|p| p.0 <= tau);
        let (a, b) = if idx == 0 {
            let last = s[s.len() - 1];
            ((last.0 - self.period, last.1), s[0])
        } else if idx == s.len() {
            let first = s[0];
            (s[s.len() - 1], (first.0 + self.period, first.1))
        } else {
            (s[idx - 1], s[idx])
        };
        let f = (tau - a.0) / (b.0 - a.0);
        a.1 + f * (b.1 - a.1)
    }

    /// Surface temperature at which the period-averaged radiative budget
    /// balances, K. A good starting state for reaching periodic steady state.
    pub fn equilibrium_temperature(&self, emissivity: f64, albedo: f64) -> f64 {
        const N: usize = 2048;
        let mean = |g: &dyn Fn(f64) -> f64| {
            (0..N).map(|i| g(self.value_at(self.period * i as f64 / N as f64))).sum::<f64>() / N as f64
        };
        match self.kind {
            ForcingKind::HeaterTemperature => mean(&|v| v.powi(4)).powf(0.25),
            ForcingKind::ShortwaveFlux => {
                ((1.0 - albedo) * mean(&|v| v) / (emissivity * STEFAN_BOLTZMANN)).powf(0.25)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_of_constant_forcing() {
        let f = ForcingProfile::constant(ForcingKind::HeaterTemperature, 310.0, 100.0).unwrap();
        assert!((f.equilibrium_temperature(0.9, 0.1) - 310.0).abs() < 1e-9);
        let sw = ForcingProfile::constant(ForcingKind::ShortwaveFlux, 5.670374419e-8 * 250f64.powi(4), 100.0).unwrap();
        assert!((sw.equilibrium_temperature(1.0, 0.0) - 250.0).abs() < 1e-9);
    }

    #[test]
    fn piecewise_linear_with_wrap() {
        let f = ForcingProfile::new(
            ForcingKind::HeaterTemperature,
            vec![(0.0, 300.0), (50.0, 350.0)],
            100.0,
        )
        .unwrap();
        assert_eq!(f.value_at(0.0), 300.0);
        assert_eq!(f.value_at(25.0), 325.0);
        assert_eq!(f.value_at(50.0), 350.0);
        assert_eq!(f.value_at(75.0), 325.0);
        assert_eq!(f.value_at(125.0), 325.0);
        assert_eq!(f.value_at(-25.0), 325.0);
    }

    #[test]
    fn first_sample_after_zero() {
        let f = ForcingProfile::new(ForcingKind::ShortwaveFlux, vec![(10.0, 0.0), (60.0, 100.0)], 100.0)
            .unwrap();
        // wraps from (60, 100) to (110, 0)
        assert!((f.value_at(0.0) - 20.0).abs() < 1e-12);
        assert!((f.value_at(85.0) - 50.0).abs() < 1e-12);
    }

    #[test]
    fn sinusoid_values() {
        let f = ForcingProfile::sinusoid(ForcingKind::HeaterTemperature, 300.0, 30.0, 0.0, 1000.0, 400)
            .unwrap();
        assert!((f.value_at(250.0) - 330.0).abs() < 1e-9);
        assert!((f.value_at(750.0) - 270.0).abs() < 1e-9);
        assert!((f.value_at(100.0) - (300.0 + 30.0 * (0.2 * PI).sin())).abs() < 2e-3);
    }

    #[test]
    fn rejects_bad_samples() {
        use ForcingKind::*;
        assert!(ForcingProfile::new(HeaterTemperature, vec![], 1.0).is_err());
        assert!(ForcingProfile::new(HeaterTemperature, vec![(0.0, -1.0)], 1.0).is_err());
        assert!(ForcingProfile::new(ShortwaveFlux, vec![(0.0, 1.0), (0.0, 2.0)], 1.0).is_err());
        assert!(ForcingProfile::new(ShortwaveFlux, vec![(2.0, 1.0)], 1.0).is_err());
        assert!(ForcingProfile::new(ShortwaveFlux, vec![(0.0, f64::NAN)], 1.0).is_err());
    }
}
