//! Reference soil samples, experiment descriptions and published surface
//! metrics / inertia estimates, bundled as CSV under `fixtures/`.

use serde::Deserialize;

use crate::estimators::table::{read_metrics, read_reported, MetricsRecord, PeriodTable, ReportedValue};
use crate::sample::SoilSample;
use crate::units::minutes;

pub const SAMPLES_CSV: &str = include_str!("../fixtures/samples.csv");
pub const EXPERIMENTS_CSV: &str = include_str!("../fixtures/experiments.csv");
pub const SURFACE_METRICS_CSV: &str = include_str!("../fixtures/surface_metrics.csv");
pub const REPORTED_INERTIA_CSV: &str = include_str!("../fixtures/reported_inertia.csv");

/// Soil names in table order, coarsest first.
pub const SOILS: [&str; 4] = ["Bedrock", "Soil A", "Soil B", "Soil C"];

#[derive(Debug, Deserialize)]
struct SampleRow {
    sample: String,
    granularity_lo_mm: f64,
    granularity_hi_mm: f64,
    density_g_ml: f64,
    bin_l_cm: f64,
    bin_w_cm: f64,
    bin_d_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Experiment {
    pub experiment: String,
    pub label: String,
    pub pressure_mbar: f64,
    pub subsurface_soil: String,
    pub period_min: f64,
}

pub fn table_i_samples() -> Vec<SoilSample> {
    csv::Reader::from_reader(SAMPLES_CSV.as_bytes())
        .deserialize::<SampleRow>()
        .map(|r| {
            let r = r.expect("bundled samples.csv is well-formed");
            SoilSample::new(
                r.sample,
                (r.granularity_lo_mm, r.granularity_hi_mm),
                r.density_g_ml,
                [r.bin_l_cm, r.bin_w_cm, r.bin_d_cm],
            )
        })
        .collect()
}

pub fn experiments() -> Vec<Experiment> {
    csv::Reader::from_reader(EXPERIMENTS_CSV.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("bundled experiments.csv is well-formed")
}

pub fn experiment_periods() -> PeriodTable {
    PeriodTable {
        by_experiment: experiments()
            .into_iter()
            .map(|e| (e.experiment, minutes(e.period_min)))
            .collect(),
        fallback: None,
    }
}

pub fn surface_metrics() -> Vec<MetricsRecord> {
    read_metrics(SURFACE_METRICS_CSV.as_bytes()).expect("bundled surface_metrics.csv is well-formed")
}

pub fn reported_inertia() -> Vec<ReportedValue> {
    read_reported(REPORTED_INERTIA_CSV.as_bytes()).expect("bundled reported_inertia.csv is well-formed")
}
