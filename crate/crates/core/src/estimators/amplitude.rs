use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Which reference point the temperature and flux swings are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `X_max − X_init`, the value when actuation starts.
    #[default]
    InitBased,
    /// `X_max − X_min` over the series.
    MinmaxBased,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "init" | "init_based" => Ok(Convention::InitBased),
            "minmax" | "minmax_based" => Ok(Convention::MinmaxBased),
            other => Err(Error::Config(format!(
                "unknown convention `{other}` (expected init or minmax)"
            ))),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Convention::InitBased => "init",
            Convention::MinmaxBased => "minmax",
        })
    }
}

/// Temperature and net-flux swings of one surface series.
///
/// Both conventions are always populated; [`Self::delta_t`] and
/// [`Self::delta_g`] return the selected one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMetrics {
    pub t_init: f64,
    pub t_max: f64,
    pub t_min: f64,
    pub delta_t_init: f64,
    pub delta_t_minmax: f64,
    pub g_init: f64,
    pub g_max: f64,
    pub g_min: f64,
    pub delta_g_init: f64,
    pub delta_g_minmax: f64,
    pub period: f64,
    pub convention: Convention,
}

impl AmplitudeMetrics {
    pub fn delta_t(&self) -> f64 {
        match self.convention {
            Convention::InitBased => self.delta_t_init,
            Convention::MinmaxBased => self.delta_t_minmax,
        }
    }

    pub fn delta_g(&self) -> f64 {
        match self.convention {
            Convention::InitBased => self.delta_g_init,
            Convention::MinmaxBased => self.delta_g_minmax,
        }
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Extracts the swing metrics from aligned, time-ordered temperature and flux series.
pub fn extract_amplitudes(
    temps: &[f64],
    fluxes: &[f64],
    period: f64,
    convention: Convention,
) -> Result<AmplitudeMetrics> {
    if temps.is_empty() || fluxes.is_empty() {
        return Err(Error::Empty("temperature or flux series"));
    }
    if temps.len() != fluxes.len() {
        return Err(Error::domain(
            "fluxes",
            format!("length {} differs from temperature length {}", fluxes.len(), temps.len()),
        ));
    }
    if temps.iter().chain(fluxes).any(|v| !v.is_finite()) {
        return Err(Error::domain("series", "contains non-finite values"));
    }
    ensure_positive("period", period)?;

    let (t_min, t_max) = min_max(temps);
    let (g_min, g_max) = min_max(fluxes);
    let (t_init, g_init) = (temps[0], fluxes[0]);
    Ok(AmplitudeMetrics {
        t_init,
        t_max,
        t_min,
        delta_t_init: t_max - t_init,
        delta_t_minmax: t_max - t_min,
        g_init,
        g_max,
        g_min,
        delta_g_init: g_max - g_init,
        delta_g_minmax: g_max - g_min,
        period,
        convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::celsius_to_kelvin;
    use std::f64::consts::PI;

    #[test]
    fn constant_series() {
        let m = extract_amplitudes(&[290.0; 5], &[3.0; 5], 100.0, Convention::InitBased).unwrap();
        assert_eq!(m.delta_t_init, 0.0);
        assert_eq!(m.delta_t_minmax, 0.0);
        assert_eq!(m.delta_g_init, 0.0);
        assert_eq!(m.delta_g_minmax, 0.0);
    }

    #[test]
    fn reconstructed_bedrock_exp1() {
        // Ramp from T_init = 24.8 °C to T_max = 78.1 °C, flux from 130 to 410 W/m²,
        // then a cool-down that stays above the start.
        let n = 201;
        let mut temps = Vec::new();
        let mut fluxes = Vec::new();
        for i in 0..n {
            let x = (PI * i as f64 / (n - 1) as f64).sin();
            temps.push(celsius_to_kelvin(24.8 + 53.3 * x).unwrap());
            fluxes.push(130.0 + 280.0 * x);
        }
        let m = extract_amplitudes(&temps, &fluxes, 17760.0, Convention::InitBased).unwrap();
        assert!((m.delta_t() - 53.3).abs() < 1e-9);
        assert!((m.delta_g() - 280.0).abs() < 1e-9);
    }

    #[test]
    fn sinusoid_from_mean() {
        let a = 7.5;
        let n = 1000;
        let temps: Vec<f64> = (0..n)
            .map(|i| 250.0 + a * (2.0 * PI * i as f64 / n as f64).sin())
            .collect();
        let m = extract_amplitudes(&temps, &temps, 1.0, Convention::MinmaxBased).unwrap();
        assert!((m.delta_t_init - a).abs() < 1e-9);
        assert!((m.delta_t_minmax - 2.0 * a).abs() < 1e-9);
        assert_eq!(m.delta_t(), m.delta_t_minmax);
        assert!(m.t_min <= m.t_init && m.t_init <= m.t_max);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            extract_amplitudes(&[], &[], 1.0, Convention::InitBased),
            Err(Error::Empty(_))
        ));
        assert!(extract_amplitudes(&[1.0, 2.0], &[1.0], 1.0, Convention::InitBased).is_err());
        assert!(extract_amplitudes(&[1.0], &[1.0], 0.0, Convention::InitBased).is_err());
    }

    #[test]
    fn convention_parse() {
        assert_eq!("init".parse::<Convention>().unwrap(), Convention::InitBased);
        assert_eq!("minmax".parse::<Convention>().unwrap(), Convention::MinmaxBased);
        assert!("median".parse::<Convention>().is_err());
    }
}
