#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soiltherm::imaging::{PixelMask, Point, RoiPolygon, ThermalFrame};
use soiltherm::simulator::{
    run_diurnal, ForcingKind, ForcingProfile, GridOptions, RunOptions, SimGrid, SimResult, Thermophysics,
};
use soiltherm::{EnvironmentConfig, ForcingMode, GasKind, SoilSample};

pub const RHO_C: f64 = 1.2e6;
pub const CLOSED_LOOP_PERIOD: f64 = 300.0 * 60.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn test_soil() -> SoilSample {
    SoilSample::new("test", (1.0, 2.0), 1.5, [20.0, 20.0, 7.0]).with_specific_heat(RHO_C / 1500.0)
}

/// Homogeneous column with prescribed inertia, 100 nodes, 5 skin depths.
pub fn half_space(inertia: f64, period: f64, t0: f64) -> SimGrid {
    let props = Thermophysics {
        k: inertia * inertia / RHO_C,
        rho_c: RHO_C,
    };
    SimGrid::from_thermophysics(
        &test_soil(),
        props,
        period,
        &GridOptions {
            initial_temperature_k: t0,
            ..Default::default()
        },
    )
    .unwrap()
}

pub struct ClosedLoop {
    pub grid: SimGrid,
    pub result: SimResult,
}

/// Small sinusoidal sunlight about radiative equilibrium near 250 K.
pub fn closed_loop(inertia: f64, probe_depths: Vec<f64>) -> ClosedLoop {
    let p = CLOSED_LOOP_PERIOD;
    let env = EnvironmentConfig::new(8.0, GasKind::Co2_95, ForcingMode::PlanetarySurface, p).unwrap();
    let t0 = 250.0;
    let mean_sw = 5.670374419e-8 * t0 * t0 * t0 * t0;
    let forcing = ForcingProfile::sinusoid(ForcingKind::ShortwaveFlux, mean_sw, 20.0, 0.0, p, 3600).unwrap();
    let mut grid = half_space(inertia, p, t0);
    let opts = RunOptions {
        cycles: 4,
        discard_cycles: 2,
        dt: 1.0,
        probe_depths,
        ..Default::default()
    };
    let result = run_diurnal(&mut grid, &forcing, &env, &opts).unwrap();
    ClosedLoop { grid, result }
}

/// Even-odd point-in-polygon test, written independently of the rasteriser.
pub fn pnpoly(poly: &[Point], px: f64, py: f64) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

pub fn oracle_mask(roi: &RoiPolygon, width: usize, height: usize) -> Vec<bool> {
    let mut out = vec![false; width * height];
    for y in 0..height {
        for x in 0..width {
            let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
            out[y * width + x] =
                pnpoly(&roi.vertices, px, py) && !roi.exclusions.iter().any(|h| pnpoly(h, px, py));
        }
    }
    out
}

/// Random simple polygon, star-shaped around an interior point.
pub fn random_star<R: Rng>(rng: &mut R, width: f64, height: f64) -> Vec<Point> {
    loop {
        let p = star_candidate(rng, width, height);
        if is_simple(&p) {
            return p;
        }
    }
}

/// Snapping vertices to the half-pixel lattice can fold a star, so candidates are filtered.
fn star_candidate<R: Rng>(rng: &mut R, width: f64, height: f64) -> Vec<Point> {
    let n = rng.gen_range(3..=24);
    let cx = rng.gen_range(0.2 * width..0.8 * width);
    let cy = rng.gen_range(0.2 * height..0.8 * height);
    let rmax = (cx.min(width - cx)).min(cy.min(height - cy));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    if angles.len() < 3 {
        angles = vec![0.0, 2.1, 4.2];
    }
    let snap = rng.gen_bool(0.3);
    angles
        .into_iter()
        .map(|a| {
            let r = rng.gen_range(0.15 * rmax..0.99 * rmax);
            let (x, y) = (cx + r * a.cos(), cy + r * a.sin());
            if snap {
                // integer and half-integer vertices exercise the edge rules
                ((x * 2.0).round() / 2.0, (y * 2.0).round() / 2.0)
            } else {
                (x, y)
            }
        })
        .collect()
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn segments_touch(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Point, b: Point, c: Point| {
        cross(a, b, c) == 0.0 && c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
    };
    on(q1, q2, p1) || on(q1, q2, p2) || on(p1, p2, q1) || on(p1, p2, q2)
}

/// No two non-adjacent edges touch, no repeated vertices, non-zero area.
pub fn is_simple(p: &[Point]) -> bool {
    let n = p.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if p[i] == p[j] {
                return false;
            }
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && segments_touch(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]) {
                return false;
            }
        }
    }
    let area: f64 = (0..n).map(|i| cross((0.0, 0.0), p[i], p[(i + 1) % n])).sum();
    area.abs() > 1e-9
}

pub fn random_frame<R: Rng>(rng: &mut R, width: usize, height: usize) -> ThermalFrame {
    let t = (0..width * height).map(|_| rng.gen_range(-20.0..120.0)).collect();
    ThermalFrame::new(width, height, t, 0.0, "random").unwrap()
}

/// Naive accumulation: (mean, population std, count, min, max).
pub fn brute_stats(frame: &ThermalFrame, mask: &[bool]) -> (f64, f64, usize, f64, f64) {
    let vals: Vec<f64> = frame
        .temperatures
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(&v, _)| v)
        .collect();
    let n = vals.len();
    let mean = vals.iter().sum::<f64>() / n as f64;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (mean, var.sqrt(), n, min, max)
}

pub fn mask_bitmap(mask: &PixelMask) -> Vec<bool> {
    mask.to_bitmap()
}
