use std::io;

use serde::Serialize;

use super::solver::Scheme;
use crate::error::{Error, Result};
use crate::estimators::{fit_harmonic, wrap_phase};
use crate::sample::ForcingMode;
use crate::units::CELSIUS_OFFSET;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSeries {
    pub depth: f64,
    /// Kelvin.
    pub temperature: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimDiagnostics {
    pub steps: usize,
    /// Step actually used, s.
    pub dt: f64,
    pub scheme: Scheme,
    pub max_newton_iterations: usize,
    pub max_residual: f64,
    /// Largest change of the surface series between the last two recorded cycles, K.
    pub periodicity_residual: Option<f64>,
    pub periodic: Option<bool>,
}

/// Recorded series of one run. Temperatures in kelvin, fluxes in W/m².
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub times: Vec<f64>,
    pub surface_temperature: Vec<f64>,
    pub subsurface: Vec<ProbeSeries>,
    /// Surface budget evaluated at the recorded surface temperature.
    pub net_flux: Vec<f64>,
    pub forcing: Vec<f64>,
    /// Column heat content, J/m².
    pub heat_content: Vec<f64>,
    /// Energy that entered through the surface since the start of the run, J/m².
    pub boundary_energy: Vec<f64>,
    pub period: f64,
    pub mode: ForcingMode,
    pub emissivity: f64,
    pub albedo: f64,
    pub diagnostics: SimDiagnostics,
}

/// Harmonic summary of one recorded series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Half the peak-to-peak swing of the fitted fundamental.
    pub amplitude: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub depth: f64,
    pub temperature: SeriesSummary,
    /// Lag behind the surface net flux, rad.
    pub lag_behind_flux: f64,
    /// Largest surface-minus-probe temperature difference, K.
    pub max_gap_to_surface: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub period: f64,
    pub samples: usize,
    pub surface_temperature: SeriesSummary,
    pub net_flux: SeriesSummary,
    pub surface_lag_behind_flux: f64,
    pub probes: Vec<ProbeSummary>,
    pub diagnostics: SimDiagnostics,
}

fn summarize(times: &[f64], values: &[f64], period: f64) -> Result<SeriesSummary> {
    let fit = fit_harmonic(times, values, period)?;
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(SeriesSummary {
        min,
        max,
        mean: fit.mean,
        amplitude: fit.amplitude,
        phase: fit.phase,
    })
}

impl SimResult {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn subsurface_at(&self, depth: f64) -> Option<&[f64]> {
        self.subsurface
            .iter()
            .find(|p| (p.depth - depth).abs() < 1e-12)
            .map(|p| p.temperature.as_slice())
    }

    /// Indices covering the last whole recorded period.
    pub fn last_cycle(&self) -> std::ops::Range<usize> {
        let n = self.times.len();
        if n == 0 {
            return 0..0;
        }
        let end_t = self.times[n - 1];
        let start = self.times.partition_point(|&t| t < end_t - self.period + 1e-9 * self.period);
        start..n
    }

    /// Harmonic summary over the last recorded cycle.
    pub fn summary(&self) -> Result<SimSummary> {
        let r = self.last_cycle();
        let t = &self.times[r.clone()];
        let ts = summarize(t, &self.surface_temperature[r.clone()], self.period)?;
        let g = summarize(t, &self.net_flux[r.clone()], self.period)?;
        let probes = self
            .subsurface
            .iter()
            .map(|p| {
                let s = summarize(t, &p.temperature[r.clone()], self.period)?;
                let gap = self.surface_temperature[r.clone()]
                    .iter()
                    .zip(&p.temperature[r.clone()])
                    .map(|(a, b)| a - b)
                    .fold(f64::NEG_INFINITY, f64::max);
                Ok(ProbeSummary {
                    depth: p.depth,
                    temperature: s,
                    lag_behind_flux: wrap_phase(s.phase - g.phase),
                    max_gap_to_surface: gap,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimSummary {
            period: self.period,
            samples: self.times.len(),
            surface_temperature: ts,
            net_flux: g,
            surface_lag_behind_flux: wrap_phase(ts.phase - g.phase),
            probes,
            diagnostics: self.diagnostics.clone(),
        })
    }

    /// Writes `time_s, T_surface_C, T_subsurface_C@<depth>…, G_Wm2`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["time_s".to_string(), "T_surface_C".to_string()];
        header.extend(self.subsurface.iter().map(|p| format!("T_subsurface_C@{}", p.depth)));
        header.push("G_Wm2".into());
        w.write_record(&header)?;
        for i in 0..self.times.len() {
            let mut row = vec![
                format!("{}", self.times[i]),
                format!("{:.6}", self.surface_temperature[i] - CELSIUS_OFFSET),
            ];
            row.extend(
                self.subsurface
                    .iter()
                    .map(|p| format!("{:.6}", p.temperature[i] - CELSIUS_OFFSET)),
            );
            row.push(format!("{:.6}", self.net_flux[i]));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<simulation csv>", e))?;
        Ok(())
    }
}
