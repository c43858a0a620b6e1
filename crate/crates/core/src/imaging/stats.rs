use serde::{Deserialize, Serialize};

use super::frame::ThermalFrame;
use super::roi::PixelMask;
use crate::error::{Error, Result};

/// Divisor used for the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StdKind {
    /// Divide by `n`: the ROI is the whole population.
    #[default]
    Population,
    /// Divide by `n − 1`.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoiStats {
    /// °C
    pub mean: f64,
    /// K
    pub std: f64,
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

/// Mean and standard deviation of the masked pixels.
pub fn roi_stats(frame: &ThermalFrame, mask: &PixelMask) -> Result<RoiStats> {
    roi_stats_with(frame, mask, StdKind::Population)
}

pub fn roi_stats_with(frame: &ThermalFrame, mask: &PixelMask, kind: StdKind) -> Result<RoiStats> {
    if mask.is_empty() {
        return Err(Error::Empty("ROI mask"));
    }
    if mask.width != frame.width || mask.height != frame.height {
        return Err(Error::domain(
            "mask",
            format!(
                "mask is {}x{} but frame is {}x{}",
                mask.width, mask.height, frame.width, frame.height
            ),
        ));
    }
    let t = &frame.temperatures;
    let n = mask.count();
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &i in mask.indices() {
        let v = t[i as usize];
        sum += v;
        min = min.min(v);
        max = max.max(v);
    }
    let mean = sum / n as f64;
    let ss: f64 = mask.indices().iter().map(|&i| (t[i as usize] - mean).powi(2)).sum();
    let denom = match kind {
        StdKind::Population => n as f64,
        StdKind::Sample if n > 1 => (n - 1) as f64,
        StdKind::Sample => 1.0,
    };
    // The mean of equal values can differ from them by an ulp; clamp so a
    // uniform ROI reports exactly zero spread.
    let std = if min == max { 0.0 } else { (ss / denom).sqrt() };
    Ok(RoiStats {
        mean: mean.clamp(min, max),
        std,
        count: n,
        min,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_frame() {
        let f = ThermalFrame::uniform(8, 6, 24.8, 0.0);
        let m = PixelMask::from_indices(8, 6, (0..20).collect());
        let s = roi_stats(&f, &m).unwrap();
        assert_eq!(s.mean, 24.8);
        assert_eq!(s.std, 0.0);
        assert_eq!(s.count, 20);
    }

    #[test]
    fn two_pixels() {
        let f = ThermalFrame::new(2, 1, vec![20.0, 22.0], 0.0, "t").unwrap();
        let m = PixelMask::from_indices(2, 1, vec![0, 1]);
        let s = roi_stats(&f, &m).unwrap();
        assert_eq!((s.mean, s.std, s.count), (21.0, 1.0, 2));
        let s = roi_stats_with(&f, &m, StdKind::Sample).unwrap();
        assert!((s.std - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_or_mismatched_mask() {
        let f = ThermalFrame::uniform(4, 4, 1.0, 0.0);
        assert!(matches!(
            roi_stats(&f, &PixelMask::from_indices(4, 4, vec![])),
            Err(Error::Empty(_))
        ));
        assert!(roi_stats(&f, &PixelMask::from_indices(5, 4, vec![1])).is_err());
    }
}
