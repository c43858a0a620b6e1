//! Per-soil time series assembled from a frame sequence and the
//! thermocouple channels.

use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::frame::{read_frame_file, ThermalFrame};
use super::roi::{rasterize, PixelMask, RoiPolygon};
use super::stats::{roi_stats_with, RoiStats, StdKind};
use super::transient::{detect_transient_end, DEFAULT_SMOOTHING_WINDOW};
use crate::error::{Error, Result};
use crate::estimators::net_flux;
use crate::estimators::table::MetricsRecord;
use crate::units::celsius_to_kelvin;

/// Thermocouple channels, Celsius.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuxChannels {
    pub times: Vec<f64>,
    pub heater: Vec<f64>,
    pub air: Vec<f64>,
    pub setpoint: Vec<f64>,
    pub subsurface: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AuxRow {
    time_s: f64,
    #[serde(rename = "heater_C")]
    heater_c: f64,
    #[serde(rename = "air_C")]
    air_c: f64,
    #[serde(rename = "setpoint_C")]
    setpoint_c: f64,
    #[serde(rename = "subsurface_C", default)]
    subsurface_c: Option<f64>,
}

impl AuxChannels {
    /// Reads `time_s, heater_C, air_C, setpoint_C[, subsurface_C]`.
    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self> {
        let mut aux = AuxChannels::default();
        let mut sub = Vec::new();
        let mut has_sub = true;
        for row in csv::Reader::from_reader(reader).deserialize::<AuxRow>() {
            let row = row?;
            aux.times.push(row.time_s);
            aux.heater.push(row.heater_c);
            aux.air.push(row.air_c);
            aux.setpoint.push(row.setpoint_c);
            match row.subsurface_c {
                Some(v) => sub.push(v),
                None => has_sub = false,
            }
        }
        if has_sub && !sub.is_empty() {
            aux.subsurface = Some(sub);
        }
        aux.validate()?;
        Ok(aux)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(f)
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for i in 0..self.times.len() {
            w.serialize(AuxRow {
                time_s: self.times[i],
                heater_c: self.heater[i],
                air_c: self.air[i],
                setpoint_c: self.setpoint[i],
                subsurface_c: self.subsurface.as_ref().map(|s| s[i]),
            })?;
        }
        w.flush().map_err(|e| Error::io("<aux csv>", e))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        if n == 0 {
            return Err(Error::Empty("auxiliary channels"));
        }
        let lens = [self.heater.len(), self.air.len(), self.setpoint.len()];
        if lens.iter().any(|&l| l != n) || self.subsurface.as_ref().is_some_and(|s| s.len() != n) {
            return Err(Error::domain("aux", "channels have different lengths"));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("aux", "times are not strictly increasing"));
        }
        Ok(())
    }

    /// Heater temperature at `t`, or `None` outside the recorded span or
    /// inside a gap wider than `max_gap`.
    pub fn heater_at(&self, t: f64, max_gap: f64) -> Option<f64> {
        let ts = &self.times;
        if t < ts[0] || t > ts[ts.len() - 1] {
            return None;
        }
        let hi = ts.partition_point(|&x| x < t);
        if ts[hi] == t {
            return Some(self.heater[hi]);
        }
        let lo = hi - 1;
        if ts[hi] - ts[lo] > max_gap {
            return None;
        }
        let f = (t - ts[lo]) / (ts[hi] - ts[lo]);
        Some(self.heater[lo] + f * (self.heater[hi] - self.heater[lo]))
    }

    fn uncovered(&self, t: f64, max_gap: f64) -> (f64, f64) {
        let ts = &self.times;
        if t < ts[0] {
            (t, ts[0])
        } else if t > ts[ts.len() - 1] {
            (ts[ts.len() - 1], t)
        } else {
            let hi = ts.partition_point(|&x| x < t);
            let _ = max_gap;
            (ts[hi - 1], ts[hi])
        }
    }
}

/// Ordered list of frame files with capture times.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub timestamp_s: f64,
}

impl Manifest {
    /// Reads a `path,timestamp_s` CSV. Relative paths resolve against the
    /// manifest's directory.
    pub fn read(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut entries = Vec::new();
        for row in csv::Reader::from_reader(f).deserialize::<ManifestEntry>() {
            let mut e = row?;
            if e.path.is_relative() {
                e.path = base.join(&e.path);
            }
            entries.push(e);
        }
        let m = Self { entries };
        m.validate()?;
        Ok(m)
    }

    /// Fallback when no manifest exists: every `.txt` file in `dir`, in
    /// lexicographic order, spaced `interval_s` apart.
    pub fn from_directory(dir: &Path, interval_s: f64) -> Result<Self> {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        let entries = files
            .into_iter()
            .enumerate()
            .map(|(i, path)| ManifestEntry {
                path,
                timestamp_s: i as f64 * interval_s,
            })
            .collect();
        let m = Self { entries };
        m.validate()?;
        Ok(m)
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for e in &self.entries {
            w.serialize(e)?;
        }
        w.flush().map_err(|e| Error::io("<manifest>", e))?;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::Empty("frame manifest"));
        }
        if self.entries.windows(2).any(|w| !(w[1].timestamp_s > w[0].timestamp_s)) {
            return Err(Error::domain("manifest", "timestamps are not strictly increasing"));
        }
        Ok(())
    }
}

/// Per-soil surface statistics over time.
#[derive(Debug, Clone, PartialEq)]
pub struct RoiSeries {
    pub soil: String,
    pub times: Vec<f64>,
    /// °C
    pub mean_temp: Vec<f64>,
    /// K
    pub std_temp: Vec<f64>,
    pub pixel_count: usize,
    /// Net flux from the chamber budget, W/m². Present when heater data was supplied.
    pub net_flux: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRow {
    time_s: f64,
    #[serde(rename = "mean_C")]
    mean_c: f64,
    #[serde(rename = "std_K")]
    std_k: f64,
    #[serde(rename = "flux_Wm2")]
    flux: Option<f64>,
}

impl RoiSeries {
    /// Writes `time_s, mean_C, std_K, flux_Wm2`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for i in 0..self.times.len() {
            w.serialize(SeriesRow {
                time_s: self.times[i],
                mean_c: self.mean_temp[i],
                std_k: self.std_temp[i],
                flux: self.net_flux.as_ref().map(|f| f[i]),
            })?;
        }
        w.flush().map_err(|e| Error::io("<series csv>", e))?;
        Ok(())
    }

    pub fn read_csv<R: io::Read>(soil: impl Into<String>, reader: R) -> Result<Self> {
        let mut s = RoiSeries {
            soil: soil.into(),
            times: Vec::new(),
            mean_temp: Vec::new(),
            std_temp: Vec::new(),
            pixel_count: 0,
            net_flux: None,
        };
        let mut flux = Vec::new();
        let mut all_flux = true;
        for row in csv::Reader::from_reader(reader).deserialize::<SeriesRow>() {
            let row = row?;
            s.times.push(row.time_s);
            s.mean_temp.push(row.mean_c);
            s.std_temp.push(row.std_k);
            match row.flux {
                Some(f) => flux.push(f),
                None => all_flux = false,
            }
        }
        if s.times.is_empty() {
            return Err(Error::Empty("series file"));
        }
        if all_flux {
            s.net_flux = Some(flux);
        }
        Ok(s)
    }

    /// Surface metrics in the soil × experiment table layout.
    ///
    /// `transient_end` is the time (s) at which the actuation transient ends;
    /// the standard deviation at the nearest frame is reported as `t_tran`.
    pub fn metrics(
        &self,
        experiment: &str,
        transient_end: Option<f64>,
        period_min: Option<f64>,
    ) -> Result<MetricsRecord> {
        let flux = self
            .net_flux
            .as_ref()
            .ok_or_else(|| Error::Config(format!("series `{}` has no net flux", self.soil)))?;
        if self.times.is_empty() {
            return Err(Error::Empty("series"));
        }
        let fold = |xs: &[f64]| {
            xs.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
        };
        let (t_min, t_max) = fold(&self.mean_temp);
        let (g_min, g_max) = fold(flux);
        let t_tran = transient_end.map(|t| {
            let i = nearest_index(&self.times, t);
            self.std_temp[i]
        });
        Ok(MetricsRecord {
            experiment: experiment.to_string(),
            soil: self.soil.clone(),
            t_init_c: self.mean_temp[0],
            delta_t_k: t_max - self.mean_temp[0],
            t_tran_k: t_tran,
            delta_g_wm2: g_max - flux[0],
            period_min,
            delta_t_minmax_k: Some(t_max - t_min),
            delta_g_minmax_wm2: Some(g_max - g_min),
        })
    }
}

fn nearest_index(times: &[f64], t: f64) -> usize {
    let hi = times.partition_point(|&x| x < t).min(times.len() - 1);
    if hi > 0 && (t - times[hi - 1]).abs() <= (times[hi] - t).abs() {
        hi - 1
    } else {
        hi
    }
}

/// Time at which the heater's initial upward response ends, if detectable.
pub fn transient_end_time(aux: &AuxChannels, window: usize) -> Result<Option<f64>> {
    Ok(detect_transient_end(&aux.heater, window)?.map(|i| aux.times[i]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssembleOptions {
    pub emissivity: f64,
    /// Widest aux sampling gap that may be interpolated across, s.
    pub max_aux_gap_s: f64,
    pub std_kind: StdKind,
    pub smoothing_window: usize,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self {
            emissivity: 1.0,
            max_aux_gap_s: 120.0,
            std_kind: StdKind::Population,
            smoothing_window: DEFAULT_SMOOTHING_WINDOW,
        }
    }
}

/// Rasterises every region once for a frame size.
pub fn build_masks(rois: &[RoiPolygon], width: usize, height: usize) -> Result<Vec<PixelMask>> {
    let masks = rois
        .iter()
        .map(|r| rasterize(r, width, height))
        .collect::<Result<Vec<_>>>()?;
    for (r, m) in rois.iter().zip(&masks) {
        if m.is_empty() {
            return Err(Error::Roi {
                name: r.name.clone(),
                reason: "contains no pixel centres".into(),
            });
        }
    }
    Ok(masks)
}

/// Builds per-soil series from in-memory frames.
pub fn assemble_series(
    frames: &[ThermalFrame],
    rois: &[RoiPolygon],
    aux: Option<&AuxChannels>,
    opts: &AssembleOptions,
) -> Result<Vec<RoiSeries>> {
    let first = frames.first().ok_or(Error::Empty("frame sequence"))?;
    let masks = build_masks(rois, first.width, first.height)?;
    let per_frame = frames
        .par_iter()
        .map(|f| frame_stats(f, &masks, opts.std_kind))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = frames.iter().map(|f| f.timestamp).collect();
    reduce(rois, &masks, &times, per_frame, aux, opts)
}

/// Builds per-soil series by streaming the frames listed in `manifest`.
/// Frames are parsed in parallel and dropped once their statistics are taken.
pub fn assemble_from_manifest(
    manifest: &Manifest,
    rois: &[RoiPolygon],
    aux: Option<&AuxChannels>,
    width: usize,
    height: usize,
    opts: &AssembleOptions,
) -> Result<Vec<RoiSeries>> {
    let masks = build_masks(rois, width, height)?;
    let per_frame = manifest
        .entries
        .par_iter()
        .map(|e| {
            let f = read_frame_file(&e.path, e.timestamp_s, width, height)?;
            frame_stats(&f, &masks, opts.std_kind)
        })
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = manifest.entries.iter().map(|e| e.timestamp_s).collect();
    reduce(rois, &masks, &times, per_frame, aux, opts)
}

fn frame_stats(frame: &ThermalFrame, masks: &[PixelMask], kind: StdKind) -> Result<Vec<RoiStats>> {
    masks.iter().map(|m| roi_stats_with(frame, m, kind)).collect()
}

fn reduce(
    rois: &[RoiPolygon],
    masks: &[PixelMask],
    times: &[f64],
    per_frame: Vec<Vec<RoiStats>>,
    aux: Option<&AuxChannels>,
    opts: &AssembleOptions,
) -> Result<Vec<RoiSeries>> {
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("frames", "timestamps are not strictly increasing"));
    }
    let heater_k = match aux {
        None => None,
        Some(aux) => {
            aux.validate()?;
            let mut uncovered: Vec<(f64, f64)> = Vec::new();
            let mut out = Vec::with_capacity(times.len());
            for &t in times {
                match aux.heater_at(t, opts.max_aux_gap_s) {
                    Some(h) => out.push(celsius_to_kelvin(h)?),
                    None => {
                        let gap = aux.uncovered(t, opts.max_aux_gap_s);
                        if uncovered.last() != Some(&gap) {
                            uncovered.push(gap);
                        }
                    }
                }
            }
            if !uncovered.is_empty() {
                return Err(Error::AuxCoverage(uncovered));
            }
            Some(out)
        }
    };

    rois.iter()
        .zip(masks)
        .enumerate()
        .map(|(r, (roi, mask))| {
            let mean: Vec<f64> = per_frame.iter().map(|s| s[r].mean).collect();
            let std = per_frame.iter().map(|s| s[r].std).collect();
            let net_flux = match &heater_k {
                None => None,
                Some(h) => Some(
                    mean.iter()
                        .zip(h)
                        .map(|(&m, &hk)| net_flux(hk, celsius_to_kelvin(m)?, opts.emissivity))
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            Ok(RoiSeries {
                soil: roi.name.clone(),
                times: times.to_vec(),
                mean_temp: mean,
                std_temp: std,
                pixel_count: mask.count(),
                net_flux,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aux(times: &[f64], heater: &[f64]) -> AuxChannels {
        AuxChannels {
            times: times.to_vec(),
            heater: heater.to_vec(),
            air: heater.to_vec(),
            setpoint: heater.to_vec(),
            subsurface: None,
        }
    }

    #[test]
    fn single_frame_single_roi() {
        let f = ThermalFrame::uniform(10, 10, 24.8, 0.0);
        let rois = [RoiPolygon::rectangle("a", 1.0, 1.0, 5.0, 5.0)];
        let s = assemble_series(&[f], &rois, None, &Default::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].times, vec![0.0]);
        assert_eq!(s[0].mean_temp, vec![24.8]);
        assert_eq!(s[0].std_temp, vec![0.0]);
        assert_eq!(s[0].pixel_count, 16);
        assert!(s[0].net_flux.is_none());
    }

    #[test]
    fn surface_tracking_heater_has_zero_flux() {
        let temps = [20.0, 25.0, 31.0, 40.0];
        let frames: Vec<_> = temps
            .iter()
            .enumerate()
            .map(|(i, &t)| ThermalFrame::uniform(8, 8, t, 10.0 * i as f64))
            .collect();
        let a = aux(&[0.0, 10.0, 20.0, 30.0], &temps);
        let rois = [RoiPolygon::rectangle("a", 0.0, 0.0, 8.0, 8.0)];
        let s = assemble_series(&frames, &rois, Some(&a), &Default::default()).unwrap();
        assert_eq!(s[0].net_flux.as_ref().unwrap(), &vec![0.0; 4]);
    }

    #[test]
    fn aux_gap_is_reported() {
        let frames: Vec<_> = (0..5).map(|i| ThermalFrame::uniform(4, 4, 20.0, 100.0 * i as f64)).collect();
        let a = aux(&[0.0, 100.0, 350.0], &[20.0, 21.0, 22.0]);
        let rois = [RoiPolygon::rectangle("a", 0.0, 0.0, 4.0, 4.0)];
        let err = assemble_series(&frames, &rois, Some(&a), &Default::default()).unwrap_err();
        match err {
            Error::AuxCoverage(v) => assert_eq!(v, vec![(100.0, 350.0), (350.0, 400.0)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn aux_csv_round_trip() {
        let text = "time_s,heater_C,air_C,setpoint_C,subsurface_C\n0,20,19,25,18\n60,22,19.5,25,18.2\n";
        let a = AuxChannels::read_csv(text.as_bytes()).unwrap();
        assert_eq!(a.subsurface.as_deref(), Some(&[18.0, 18.2][..]));
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert_eq!(AuxChannels::read_csv(buf.as_slice()).unwrap(), a);

        let no_sub = "time_s,heater_C,air_C,setpoint_C\n0,20,19,25\n";
        assert!(AuxChannels::read_csv(no_sub.as_bytes()).unwrap().subsurface.is_none());
        let unsorted = "time_s,heater_C,air_C,setpoint_C\n5,20,19,25\n1,20,19,25\n";
        assert!(AuxChannels::read_csv(unsorted.as_bytes()).is_err());
    }

    #[test]
    fn metrics_from_series() {
        let s = RoiSeries {
            soil: "x".into(),
            times: vec![0.0, 1.0, 2.0, 3.0],
            mean_temp: vec![24.8, 60.0, 78.1, 30.0],
            std_temp: vec![0.5, 1.2, 0.9, 0.4],
            pixel_count: 4,
            net_flux: Some(vec![100.0, 380.0, 200.0, -50.0]),
        };
        let m = s.metrics("1", Some(1.2), Some(296.0)).unwrap();
        assert!((m.delta_t_k - 53.3).abs() < 1e-9);
        assert_eq!(m.delta_g_wm2, 280.0);
        assert_eq!(m.t_tran_k, Some(1.2));
        assert_eq!(m.delta_g_minmax_wm2, Some(430.0));
    }
}
