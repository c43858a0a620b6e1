use crate::error::{Error, Result};

pub const DEFAULT_SMOOTHING_WINDOW: usize = 9;

/// Finds where the initial upward heater response stops accelerating.
///
/// The series is smoothed with a centred moving average of `window` samples;
/// the result is the index of the first downward zero crossing of the
/// smoothed second difference while the series is rising. Returns `Ok(None)`
/// when no such crossing exists (e.g. constant or linear series).
pub fn detect_transient_end(series: &[f64], window: usize) -> Result<Option<usize>> {
    if window == 0 {
        return Err(Error::domain("window", "must be >= 1"));
    }
    if series.len() < window {
        return Err(Error::domain(
            "series",
            format!("length {} is shorter than the smoothing window {window}", series.len()),
        ));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("series", "contains non-finite values"));
    }
    let half = window / 2;
    let smooth: Vec<f64> = series
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / window as f64)
        .collect();
    if smooth.len() < 3 {
        return Ok(None);
    }
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    // Curvature below this is treated as zero, so round-off on a straight
    // ramp is not mistaken for an inflection.
    let eps = 1e-9 * (hi - lo).max(hi.abs()).max(1.0);

    // second[j] is centred on smooth[j + 1].
    let second: Vec<f64> = smooth.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
    let mut last_positive: Option<usize> = None;
    for (j, &c) in second.iter().enumerate() {
        if c > eps {
            last_positive = Some(j);
        } else if c < -eps {
            if let Some(p) = last_positive {
                let rising = smooth[j + 2] > smooth[p];
                if rising {
                    // Interpolate the zero crossing between p and j.
                    let a = second[p];
                    let frac = a / (a - c);
                    let centre = p as f64 + frac * (j - p) as f64 + 1.0;
                    return Ok(Some(centre.round() as usize + half));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logistic(n: usize, centre: f64, scale: f64) -> Vec<f64> {
        (0..n)
            .map(|i| 20.0 + 60.0 / (1.0 + (-(i as f64 - centre) / scale).exp()))
            .collect()
    }

    #[test]
    fn logistic_inflection() {
        for &(centre, scale) in &[(100.0, 15.0), (57.0, 8.0), (230.0, 40.0)] {
            let s = logistic(400, centre, scale);
            let idx = detect_transient_end(&s, DEFAULT_SMOOTHING_WINDOW).unwrap().unwrap();
            assert!((idx as f64 - centre).abs() <= (DEFAULT_SMOOTHING_WINDOW / 2) as f64, "{idx} vs {centre}");
        }
    }

    #[test]
    fn linear_and_constant_have_none() {
        let ramp: Vec<f64> = (0..100).map(|i| 10.0 + 0.37 * i as f64).collect();
        assert_eq!(detect_transient_end(&ramp, 9).unwrap(), None);
        assert_eq!(detect_transient_end(&[5.0; 50], 9).unwrap(), None);
    }

    #[test]
    fn falling_response_has_none() {
        let s: Vec<f64> = logistic(300, 150.0, 20.0).into_iter().map(|v| -v).collect();
        assert_eq!(detect_transient_end(&s, 9).unwrap(), None);
    }

    #[test]
    fn too_short() {
        assert!(detect_transient_end(&[1.0, 2.0], 9).is_err());
        assert!(detect_transient_end(&[1.0, 2.0], 0).is_err());
    }
}
