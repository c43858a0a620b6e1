use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const FRAME_WIDTH: usize = 640;
pub const FRAME_HEIGHT: usize = 480;

/// Values outside this Celsius range are counted as implausible but kept.
pub const PLAUSIBLE_RANGE_C: (f64, f64) = (-40.0, 150.0);

/// One radiometric image, row-major, in degrees Celsius.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalFrame {
    pub width: usize,
    pub height: usize,
    pub temperatures: Vec<f64>,
    /// Seconds since the start of the sequence.
    pub timestamp: f64,
    pub source: String,
    /// Number of pixels outside [`PLAUSIBLE_RANGE_C`].
    pub implausible: usize,
}

impl ThermalFrame {
    pub fn new(width: usize, height: usize, temperatures: Vec<f64>, timestamp: f64, source: impl Into<String>) -> Result<Self> {
        if temperatures.len() != width * height {
            return Err(Error::domain(
                "temperatures",
                format!("expected {} values, got {}", width * height, temperatures.len()),
            ));
        }
        if let Some(i) = temperatures.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain("temperatures", format!("pixel {i} is not finite")));
        }
        let implausible = count_implausible(&temperatures);
        Ok(Self {
            width,
            height,
            temperatures,
            timestamp,
            source: source.into(),
            implausible,
        })
    }

    pub fn uniform(width: usize, height: usize, value: f64, timestamp: f64) -> Self {
        Self::new(width, height, vec![value; width * height], timestamp, "<uniform>")
            .expect("uniform frame is well-formed")
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.temperatures[y * self.width + x]
    }

    /// Serialises as one text row per image row, `decimals` places per value.
    pub fn to_text(&self, decimals: usize) -> String {
        let mut out = String::with_capacity(self.temperatures.len() * (decimals + 4));
        for row in self.temperatures.chunks(self.width) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{v:.decimals$}");
            }
            out.push('\n');
        }
        out
    }
}

fn count_implausible(values: &[f64]) -> usize {
    let (lo, hi) = PLAUSIBLE_RANGE_C;
    values.iter().filter(|v| **v < lo || **v > hi).count()
}

/// Parses a whitespace-separated matrix of Celsius values.
///
/// Error locations are 1-based `(row, column)` of the offending cell in the
/// `width × height` grid.
pub fn parse_frame(
    text: &[u8],
    timestamp: f64,
    width: usize,
    height: usize,
    source: &str,
) -> Result<ThermalFrame> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let idx = e.valid_up_to();
        Error::Parse {
            source_name: source.to_string(),
            row: 0,
            col: 0,
            reason: format!("invalid UTF-8 at byte {idx}"),
        }
    })?;
    let expected = width * height;
    let locate = |idx: usize| (idx / width.max(1) + 1, idx % width.max(1) + 1);
    let mut values = Vec::with_capacity(expected);
    for (idx, tok) in text.split_ascii_whitespace().enumerate() {
        let (row, col) = locate(idx);
        if idx >= expected {
            return Err(Error::Parse {
                source_name: source.to_string(),
                row,
                col,
                reason: format!("more than {expected} values for a {width}x{height} frame"),
            });
        }
        let v: f64 = tok.parse().map_err(|_| Error::Parse {
            source_name: source.to_string(),
            row,
            col,
            reason: format!("`{tok}` is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                source_name: source.to_string(),
                row,
                col,
                reason: format!("`{tok}` is not finite"),
            });
        }
        values.push(v);
    }
    if values.len() != expected {
        let (row, col) = locate(values.len());
        return Err(Error::Parse {
            source_name: source.to_string(),
            row,
            col,
            reason: format!("only {} of {expected} values present", values.len()),
        });
    }
    let implausible = count_implausible(&values);
    if implausible > 0 {
        log::warn!("{source}: {implausible} pixels outside the plausible range {PLAUSIBLE_RANGE_C:?} °C");
    }
    Ok(ThermalFrame {
        width,
        height,
        temperatures: values,
        timestamp,
        source: source.to_string(),
        implausible,
    })
}

pub fn read_frame_file(path: &Path, timestamp: f64, width: usize, height: usize) -> Result<ThermalFrame> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_frame(&bytes, timestamp, width, height, &path.display().to_string())
}
