//! Polygonal regions of interest and their pixel masks.
//!
//! A pixel `(x, y)` belongs to a polygon when its centre `(x + ½, y + ½)` is
//! inside under the even-odd rule. Points exactly on an edge count as inside
//! on left and top edges and outside on right and bottom edges, so adjacent
//! polygons sharing an edge never both claim a pixel.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = (f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoiPolygon {
    pub name: String,
    pub vertices: Vec<Point>,
    /// Sub-polygons removed from the region, e.g. a thermocouple in view.
    #[serde(default)]
    pub exclusions: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoiFile {
    #[serde(default)]
    pub roi: Vec<RoiPolygon>,
}

impl RoiFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("ROI file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("ROI file serialises")
    }
}

impl RoiPolygon {
    pub fn new(name: impl Into<String>, vertices: Vec<Point>) -> Self {
        Self {
            name: name.into(),
            vertices,
            exclusions: Vec::new(),
        }
    }

    pub fn rectangle(name: impl Into<String>, x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::new(name, vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    }

    pub fn with_exclusion(mut self, hole: Vec<Point>) -> Self {
        self.exclusions.push(hole);
        self
    }

    /// Checks vertex count, bounds, area, simplicity and exclusion nesting.
    pub fn validate(&self, width: usize, height: usize) -> Result<()> {
        let fail = |reason: String| Error::Roi {
            name: self.name.clone(),
            reason,
        };
        check_ring(&self.vertices, width, height).map_err(|r| fail(r))?;
        for (i, hole) in self.exclusions.iter().enumerate() {
            check_ring(hole, width, height).map_err(|r| fail(format!("exclusion {i}: {r}")))?;
            for &p in hole {
                if !inside_or_on(&self.vertices, p) {
                    return Err(fail(format!(
                        "exclusion {i} vertex ({}, {}) lies outside the region",
                        p.0, p.1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_ring(v: &[Point], width: usize, height: usize) -> std::result::Result<(), String> {
    if v.len() < 3 {
        return Err(format!("needs at least 3 vertices, got {}", v.len()));
    }
    for &(x, y) in v {
        if !x.is_finite() || !y.is_finite() {
            return Err("vertex is not finite".into());
        }
        if x < 0.0 || y < 0.0 || x > width as f64 || y > height as f64 {
            return Err(format!("vertex ({x}, {y}) lies outside the {width}x{height} frame"));
        }
    }
    if signed_area(v).abs() < 1e-12 {
        return Err("polygon is degenerate (zero area)".into());
    }
    if let Some((a, b)) = self_intersection(v) {
        return Err(format!("edges {a} and {b} intersect"));
    }
    Ok(())
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0.0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) || on_segment(a, b, d)
}

/// First pair of non-adjacent edges that touch, if any. Also catches
/// adjacent edges that fold back over each other.
fn self_intersection(v: &[Point]) -> Option<(usize, usize)> {
    let n = v.len();
    let edge = |i: usize| (v[i], v[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex is fine; collinear overlap is not.
                let shared = if j == i + 1 { b } else { a };
                let (p, q) = if j == i + 1 { (a, d) } else { (b, c) };
                if orient(p, shared, q) == 0.0 {
                    let dot = (p.0 - shared.0) * (q.0 - shared.0) + (p.1 - shared.1) * (q.1 - shared.1);
                    if dot > 0.0 {
                        return Some((i, j));
                    }
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Even-odd crossing count for a point, with edges counted as inside.
fn inside_or_on(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    if (0..n).any(|i| on_segment(poly[i], poly[(i + 1) % n], p)) {
        return true;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > p.1) != (yj > p.1) && p.0 < (xj - xi) * (p.1 - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Set of pixels selected by a region, stored as row-major indices in
/// ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelMask {
    pub width: usize,
    pub height: usize,
    indices: Vec<u32>,
}

impl PixelMask {
    pub fn from_indices(width: usize, height: usize, mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self {
            width,
            height,
            indices,
        }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.indices.binary_search(&((y * self.width + x) as u32)).is_ok()
    }

    pub fn to_bitmap(&self) -> Vec<bool> {
        let mut out = vec![false; self.width * self.height];
        for &i in &self.indices {
            out[i as usize] = true;
        }
        out
    }

    pub fn subtract(&self, other: &PixelMask) -> PixelMask {
        let indices = self
            .indices
            .iter()
            .copied()
            .filter(|i| other.indices.binary_search(i).is_err())
            .collect();
        PixelMask {
            width: self.width,
            height: self.height,
            indices,
        }
    }
}

/// Scanline fill of a single ring.
fn fill_ring(poly: &[Point], width: usize, height: usize) -> Vec<u32> {
    let n = poly.len();
    let (ymin, ymax) = poly
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let y_start = ((ymin - 0.5).floor().max(0.0)) as usize;
    let y_end = ((ymax + 0.5).ceil().max(0.0) as usize).min(height);
    let mut out = Vec::new();
    let mut xs = Vec::with_capacity(8);
    for y in y_start..y_end {
        let py = y as f64 + 0.5;
        xs.clear();
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = poly[i];
            let (xj, yj) = poly[j];
            if (yi > py) != (yj > py) {
                xs.push((xj - xi) * (py - yi) / (yj - yi) + xi);
            }
            j = i;
        }
        xs.sort_by(f64::total_cmp);
        for span in xs.chunks_exact(2) {
            let (a, b) = (span[0], span[1]);
            // First pixel whose centre is >= a, and first whose centre is >= b.
            let first = first_center_at_or_after(a, width);
            let last = first_center_at_or_after(b, width);
            for x in first..last {
                out.push((y * width + x) as u32);
            }
        }
    }
    out
}

fn first_center_at_or_after(x: f64, width: usize) -> usize {
    let mut c = (x - 0.5).ceil().clamp(0.0, width as f64) as usize;
    while c > 0 && (c - 1) as f64 + 0.5 >= x {
        c -= 1;
    }
    while c < width && (c as f64 + 0.5) < x {
        c += 1;
    }
    c
}

/// Rasterises a validated region, subtracting its exclusions.
pub fn rasterize(roi: &RoiPolygon, width: usize, height: usize) -> Result<PixelMask> {
    roi.validate(width, height)?;
    let mut mask = PixelMask::from_indices(width, height, fill_ring(&roi.vertices, width, height));
    for hole in &roi.exclusions {
        let hole_mask = PixelMask::from_indices(width, height, fill_ring(hole, width, height));
        mask = mask.subtract(&hole_mask);
    }
    Ok(mask)
}
