//! Batch estimation over per-soil surface metrics, laid out like a
//! soil × experiment inertia table.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::amplitude::Convention;
use super::inertia::{ati, i_sin};
use crate::error::{Error, Result};
use crate::units::minutes;

/// Relative tolerance for agreement between a computed and a reported I_sin.
pub const I_SIN_AGREEMENT: f64 = 0.02;

/// One soil in one experiment: the surface metrics needed by both estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub experiment: String,
    pub soil: String,
    #[serde(rename = "t_init_C")]
    pub t_init_c: f64,
    /// `T_max − T_init`, K.
    #[serde(rename = "delta_t_K")]
    pub delta_t_k: f64,
    /// Standard deviation at the end of the actuation transient, K.
    #[serde(rename = "t_tran_K", default)]
    pub t_tran_k: Option<f64>,
    /// `G_max − G_init`, W/m².
    #[serde(rename = "delta_g_Wm2")]
    pub delta_g_wm2: f64,
    #[serde(default)]
    pub period_min: Option<f64>,
    #[serde(rename = "delta_t_minmax_K", default)]
    pub delta_t_minmax_k: Option<f64>,
    #[serde(rename = "delta_g_minmax_Wm2", default)]
    pub delta_g_minmax_wm2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    ISin,
    Ati,
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Estimator::ISin => "i_sin",
            Estimator::Ati => "ati",
        })
    }
}

/// A published or otherwise trusted inertia value to compare against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportedValue {
    pub estimator: Estimator,
    pub experiment: String,
    pub soil: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateStatus {
    /// Computed, no reference to compare with.
    Computed,
    /// Agrees with the reference.
    Agrees,
    /// Differs from the reference beyond tolerance.
    Discrepant,
    /// Inputs could not produce an estimate (e.g. zero temperature swing).
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub estimator: Estimator,
    pub experiment: String,
    pub soil: String,
    pub convention: Convention,
    #[serde(rename = "delta_t_K")]
    pub delta_t_k: Option<f64>,
    #[serde(rename = "delta_g_Wm2")]
    pub delta_g_wm2: Option<f64>,
    pub period_min: f64,
    pub value: Option<f64>,
    pub rounded: Option<i64>,
    pub reported: Option<f64>,
    pub rel_diff: Option<f64>,
    pub status: EstimateStatus,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct EstimateOptions {
    pub albedo: f64,
    /// Conventions to evaluate. Rows are emitted in this order.
    pub conventions: Vec<Convention>,
    /// Only rows under this convention are compared against the reference.
    pub reference_convention: Convention,
    pub i_sin_tolerance: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            albedo: 0.0,
            conventions: vec![Convention::InitBased, Convention::MinmaxBased],
            reference_convention: Convention::InitBased,
            i_sin_tolerance: I_SIN_AGREEMENT,
        }
    }
}

/// Periods in seconds, per experiment, with an optional fallback.
#[derive(Debug, Clone, Default)]
pub struct PeriodTable {
    pub by_experiment: BTreeMap<String, f64>,
    pub fallback: Option<f64>,
}

impl PeriodTable {
    fn resolve(&self, record: &MetricsRecord) -> Result<f64> {
        record
            .period_min
            .map(minutes)
            .or_else(|| self.by_experiment.get(&record.experiment).copied())
            .or(self.fallback)
            .ok_or_else(|| {
                Error::Config(format!(
                    "no actuation period for experiment `{}`",
                    record.experiment
                ))
            })
    }
}

/// Applies both estimators to every record under each requested convention.
///
/// Degenerate inputs yield a [`EstimateStatus::Degenerate`] row instead of
/// aborting the batch. A missing period is a configuration error.
pub fn estimate_records(
    records: &[MetricsRecord],
    periods: &PeriodTable,
    reference: Option<&[ReportedValue]>,
    opts: &EstimateOptions,
) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for estimator in [Estimator::ISin, Estimator::Ati] {
        for &convention in &opts.conventions {
            for rec in records {
                let period = periods.resolve(rec)?;
                rows.push(estimate_one(estimator, convention, rec, period, reference, opts));
            }
        }
    }
    Ok(rows)
}

fn estimate_one(
    estimator: Estimator,
    convention: Convention,
    rec: &MetricsRecord,
    period: f64,
    reference: Option<&[ReportedValue]>,
    opts: &EstimateOptions,
) -> EstimateRow {
    let (delta_t, delta_g) = match convention {
        Convention::InitBased => (Some(rec.delta_t_k), Some(rec.delta_g_wm2)),
        Convention::MinmaxBased => (rec.delta_t_minmax_k, rec.delta_g_minmax_wm2),
    };
    let mut row = EstimateRow {
        estimator,
        experiment: rec.experiment.clone(),
        soil: rec.soil.clone(),
        convention,
        delta_t_k: delta_t,
        delta_g_wm2: delta_g,
        period_min: period / 60.0,
        value: None,
        rounded: None,
        reported: None,
        rel_diff: None,
        status: EstimateStatus::Computed,
        note: String::new(),
    };
    let computed = match (estimator, delta_t, delta_g) {
        (_, None, _) | (Estimator::ISin, _, None) => {
            row.status = EstimateStatus::Degenerate;
            row.note = format!("no {convention} swing available");
            return row;
        }
        (Estimator::Ati, Some(dt), _) => ati(opts.albedo, dt),
        (Estimator::ISin, Some(dt), Some(dg)) => i_sin(dg, dt, period),
    };
    let value = match computed {
        Ok(v) => v,
        Err(e) => {
            row.status = EstimateStatus::Degenerate;
            row.note = e.to_string();
            return row;
        }
    };
    row.value = Some(value);
    row.rounded = Some(value.round() as i64);

    if convention != opts.reference_convention {
        return row;
    }
    let Some(reported) = reference.and_then(|r| {
        r.iter()
            .find(|v| v.estimator == estimator && v.experiment == rec.experiment && v.soil == rec.soil)
    }) else {
        return row;
    };
    let rel = (value - reported.value) / reported.value;
    row.reported = Some(reported.value);
    row.rel_diff = Some(rel);
    let agrees = match estimator {
        Estimator::Ati => value.round() == reported.value.round(),
        Estimator::ISin => rel.abs() <= opts.i_sin_tolerance,
    };
    row.status = if agrees {
        EstimateStatus::Agrees
    } else {
        EstimateStatus::Discrepant
    };
    row
}

pub fn read_metrics<R: io::Read>(reader: R) -> Result<Vec<MetricsRecord>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}

pub fn read_metrics_file(path: &Path) -> Result<Vec<MetricsRecord>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_metrics(f)
}

pub fn write_metrics<W: io::Write>(writer: W, records: &[MetricsRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<metrics>", e))?;
    Ok(())
}

pub fn read_reported<R: io::Read>(reader: R) -> Result<Vec<ReportedValue>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}

pub fn write_estimates<W: io::Write>(writer: W, rows: &[EstimateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<estimates>", e))?;
    Ok(())
}

pub fn read_estimates<R: io::Read>(reader: R) -> Result<Vec<EstimateRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn table_rows() -> Vec<EstimateRow> {
        estimate_records(
            &fixtures::surface_metrics(),
            &fixtures::experiment_periods(),
            Some(&fixtures::reported_inertia()),
            &EstimateOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn minmax_rows_are_degenerate_without_columns() {
        let rows = table_rows();
        assert_eq!(rows.len(), 2 * 2 * 16);
        assert!(rows
            .iter()
            .filter(|r| r.convention == Convention::MinmaxBased)
            .all(|r| r.status == EstimateStatus::Degenerate));
    }

    #[test]
    fn zero_swing_does_not_abort() {
        let mut recs = fixtures::surface_metrics();
        recs[0].delta_t_k = 0.0;
        let rows = estimate_records(
            &recs,
            &fixtures::experiment_periods(),
            None,
            &EstimateOptions {
                conventions: vec![Convention::InitBased],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rows.len(), 32);
        assert_eq!(rows[0].status, EstimateStatus::Degenerate);
        assert_eq!(rows[1].status, EstimateStatus::Computed);
    }

    #[test]
    fn missing_period_is_config_error() {
        let recs = fixtures::surface_metrics();
        let err = estimate_records(&recs, &PeriodTable::default(), None, &EstimateOptions::default());
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn csv_round_trip() {
        let rows = table_rows();
        let mut buf = Vec::new();
        write_estimates(&mut buf, &rows).unwrap();
        let back = read_estimates(buf.as_slice()).unwrap();
        assert_eq!(back.len(), rows.len());
        assert_eq!(back[5].value, rows[5].value);
        assert_eq!(back[5].status, rows[5].status);
    }
}
