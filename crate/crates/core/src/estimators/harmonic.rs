//! Least-squares fit of a sinusoid of known period.

use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};

/// `y(t) ≈ mean + trend·(t − t_mid) + amplitude·cos(ω t − phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicFit {
    pub mean: f64,
    pub trend: f64,
    /// Half of the peak-to-peak swing.
    pub amplitude: f64,
    /// Phase in radians, in `(−π, π]`.
    pub phase: f64,
    pub rms_residual: f64,
}

/// Fits the fundamental of `period` plus a linear trend to `(times, values)`.
///
/// The trend term absorbs slow drift left over from spin-up.
pub fn fit_harmonic(times: &[f64], values: &[f64], period: f64) -> Result<HarmonicFit> {
    ensure_positive("period", period)?;
    if times.len() != values.len() {
        return Err(Error::domain("values", "length differs from times"));
    }
    if times.len() < 4 {
        return Err(Error::Empty("harmonic fit needs at least 4 samples"));
    }
    let omega = 2.0 * PI / period;
    let t_mid = 0.5 * (times[0] + times[times.len() - 1]);
    let basis = |t: f64| [1.0, t - t_mid, (omega * t).cos(), (omega * t).sin()];

    let mut ata = [[0.0; 4]; 4];
    let mut atb = [0.0; 4];
    for (&t, &y) in times.iter().zip(values) {
        let b = basis(t);
        for i in 0..4 {
            atb[i] += b[i] * y;
            for j in 0..4 {
                ata[i][j] += b[i] * b[j];
            }
        }
    }
    let coef = solve4(ata, atb).ok_or_else(|| Error::domain("times", "singular harmonic fit"))?;
    let ss: f64 = times
        .iter()
        .zip(values)
        .map(|(&t, &y)| {
            let b = basis(t);
            let fit: f64 = b.iter().zip(&coef).map(|(b, c)| b * c).sum();
            (y - fit).powi(2)
        })
        .sum();
    Ok(HarmonicFit {
        mean: coef[0],
        trend: coef[1],
        amplitude: coef[2].hypot(coef[3]),
        phase: coef[3].atan2(coef[2]),
        rms_residual: (ss / times.len() as f64).sqrt(),
    })
}

/// Wraps an angle to `(−π, π]`.
pub fn wrap_phase(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

// Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}
