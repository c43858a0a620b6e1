//! Synthetic frames with known per-region temperatures.

use super::frame::ThermalFrame;
use super::roi::PixelMask;
use crate::error::{Error, Result};

/// A region painted at `value` plus a per-pixel offset.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub mask: PixelMask,
    pub value: f64,
    /// One offset per mask pixel, in mask order. Empty means no texture.
    pub texture: Vec<f64>,
}

impl Layer {
    pub fn flat(mask: PixelMask, value: f64) -> Self {
        Self {
            mask,
            value,
            texture: Vec::new(),
        }
    }

    /// Alternating `±amplitude` offsets; the population std equals `amplitude`
    /// when the pixel count is even.
    pub fn checkered(mask: PixelMask, value: f64, amplitude: f64) -> Self {
        let texture = (0..mask.count())
            .map(|i| if i % 2 == 0 { amplitude } else { -amplitude })
            .collect();
        Self { mask, value, texture }
    }
}

/// Paints layers in order over a uniform background.
pub fn render_frame(
    width: usize,
    height: usize,
    background: f64,
    layers: &[Layer],
    timestamp: f64,
) -> Result<ThermalFrame> {
    let mut t = vec![background; width * height];
    for (n, layer) in layers.iter().enumerate() {
        if layer.mask.width != width || layer.mask.height != height {
            return Err(Error::domain("layer", format!("layer {n} mask has a different frame size")));
        }
        if !layer.texture.is_empty() && layer.texture.len() != layer.mask.count() {
            return Err(Error::domain("layer", format!("layer {n} texture length mismatch")));
        }
        for (k, &i) in layer.mask.indices().iter().enumerate() {
            t[i as usize] = layer.value + layer.texture.get(k).copied().unwrap_or(0.0);
        }
    }
    ThermalFrame::new(width, height, t, timestamp, "<synthetic>")
}
