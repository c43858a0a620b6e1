//! Time integration of the soil column.
//!
//! The default path is backward Euler in time with the `T⁴` surface budget
//! resolved by Newton iteration on the coupled system. A forward-Euler path
//! is kept for cross-checking. Both are written in finite-volume form, so the
//! energy entering through the surface equals the change in column heat
//! content exactly (up to round-off and the Newton tolerance).

use serde::{Deserialize, Serialize};

use super::forcing::ForcingProfile;
use super::grid::{interpolate, SimGrid};
use super::result::{ProbeSeries, SimDiagnostics, SimResult};
use crate::error::{Error, Result};
use crate::sample::{EnvironmentConfig, ForcingMode};
use crate::units::STEFAN_BOLTZMANN;

pub const NEWTON_TOLERANCE_K: f64 = 1e-6;
pub const NEWTON_MAX_ITERATIONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Implicit,
    Explicit,
}

/// Surface energy budget: `(G, dG/dT_s)` for a given surface temperature.
#[derive(Debug, Clone, Copy)]
struct Budget {
    mode: ForcingMode,
    forcing: f64,
    emissivity: f64,
    albedo: f64,
}

impl Budget {
    fn new(grid: &SimGrid, env: &EnvironmentConfig, forcing: f64) -> Self {
        Self {
            mode: env.mode,
            forcing,
            emissivity: grid.soil.emissivity,
            albedo: grid.soil.albedo,
        }
    }

    fn eval(&self, ts: f64) -> (f64, f64) {
        let es = self.emissivity * STEFAN_BOLTZMANN;
        let emitted = es * ts.powi(4);
        let slope = -4.0 * es * ts.powi(3);
        let g = match self.mode {
            ForcingMode::Chamber => es * self.forcing.powi(4) - emitted,
            ForcingMode::PlanetarySurface => (1.0 - self.albedo) * self.forcing - emitted,
        };
        (g, slope)
    }
}

/// Evaluates the surface budget of `grid`'s current surface temperature.
pub fn boundary_flux(grid: &SimGrid, env: &EnvironmentConfig, forcing: f64) -> f64 {
    Budget::new(grid, env, forcing).eval(grid.surface_temperature()).0
}

/// What happened during one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    /// Energy that entered through the surface during the step, J/m².
    pub boundary_energy: f64,
    pub newton_iterations: usize,
    /// Final Newton update on the surface node, K.
    pub residual: f64,
}

/// Largest stable forward-Euler step for the current state.
pub fn explicit_stability_limit(grid: &SimGrid, env: &EnvironmentConfig, forcing: f64) -> f64 {
    let k = grid.conductances();
    let w = grid.widths();
    let n = w.len();
    let (_, slope) = Budget::new(grid, env, forcing).eval(grid.surface_temperature());
    (0..n)
        .map(|i| {
            let left = if i > 0 { k[i - 1] } else { 0.0 };
            let right = if i + 1 < n { k[i] } else { 0.0 };
            let extra = if i == 0 { slope.abs() } else { 0.0 };
            grid.rho_c * w[i] / (left + right + extra)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Advances `grid` by `dt` seconds under a surface forcing value (heater
/// temperature in kelvin or shortwave flux in W/m², per `env.mode`).
///
/// The bottom boundary is insulated.
pub fn step(
    grid: &mut SimGrid,
    forcing: f64,
    dt: f64,
    env: &EnvironmentConfig,
    scheme: Scheme,
) -> Result<StepReport> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain("dt", format!("must be finite and > 0, got {dt}")));
    }
    match scheme {
        Scheme::Implicit => step_implicit(grid, forcing, dt, env),
        Scheme::Explicit => step_explicit(grid, forcing, dt, env),
    }
}

fn step_explicit(grid: &mut SimGrid, forcing: f64, dt: f64, env: &EnvironmentConfig) -> Result<StepReport> {
    let limit = explicit_stability_limit(grid, env, forcing);
    if dt > limit {
        return Err(Error::StepSize { dt, max_dt: limit });
    }
    let (g, _) = Budget::new(grid, env, forcing).eval(grid.surface_temperature());
    let k = grid.conductances().to_vec();
    let w = grid.widths().to_vec();
    let rho_c = grid.rho_c;
    let old = grid.temperatures().to_vec();
    let n = old.len();
    let t = grid.temperatures_mut();
    for i in 0..n {
        let mut q = if i == 0 { g } else { 0.0 };
        if i > 0 {
            q += k[i - 1] * (old[i - 1] - old[i]);
        }
        if i + 1 < n {
            q += k[i] * (old[i + 1] - old[i]);
        }
        t[i] = old[i] + dt * q / (rho_c * w[i]);
    }
    Ok(StepReport {
        boundary_energy: g * dt,
        newton_iterations: 0,
        residual: 0.0,
    })
}

fn step_implicit(grid: &mut SimGrid, forcing: f64, dt: f64, env: &EnvironmentConfig) -> Result<StepReport> {
    let budget = Budget::new(grid, env, forcing);
    let n = grid.temperatures().len();
    let k = grid.conductances();
    let w = grid.widths();
    let rho_c = grid.rho_c;
    let old = grid.temperatures().to_vec();

    // Tridiagonal coefficients that do not depend on the Newton iterate.
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs_base = vec![0.0; n];
    for i in 0..n {
        let c = rho_c * w[i];
        let left = if i > 0 { k[i - 1] } else { 0.0 };
        let right = if i + 1 < n { k[i] } else { 0.0 };
        sub[i] = -dt * left;
        sup[i] = -dt * right;
        diag[i] = c + dt * (left + right);
        rhs_base[i] = c * old[i];
    }

    let mut surface = old[0];
    let mut new = old.clone();
    let mut residual = f64::INFINITY;
    let mut scratch = vec![0.0; n];
    for iter in 1..=NEWTON_MAX_ITERATIONS {
        let (g, slope) = budget.eval(surface);
        let mut d = diag.clone();
        let mut r = rhs_base.clone();
        d[0] -= dt * slope;
        r[0] += dt * (g - slope * surface);
        thomas(&sub, &d, &sup, &mut r, &mut scratch);
        new.copy_from_slice(&r);
        let energy = dt * (g + slope * (new[0] - surface));
        residual = (new[0] - surface).abs();
        surface = new[0];
        if !surface.is_finite() {
            break;
        }
        if residual < NEWTON_TOLERANCE_K {
            grid.temperatures_mut().copy_from_slice(&new);
            return Ok(StepReport {
                boundary_energy: energy,
                newton_iterations: iter,
                residual,
            });
        }
    }
    Err(Error::Divergence {
        step: 0,
        reason: format!(
            "surface Newton iteration did not converge in {NEWTON_MAX_ITERATIONS} iterations (last update {residual} K)"
        ),
    })
}

/// Thomas algorithm; `rhs` is overwritten with the solution.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64], c: &mut [f64]) {
    let n = diag.len();
    c[0] = sup[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    /// Total simulated cycles, including discarded spin-up.
    pub cycles: usize,
    /// Requested time step, s. Adjusted down so a whole number of steps fits one period.
    pub dt: f64,
    /// Leading cycles not recorded. `0` keeps the run from its initial state.
    pub discard_cycles: usize,
    /// Record every n-th step.
    pub record_every: usize,
    /// Subsurface probe depths, m.
    pub probe_depths: Vec<f64>,
    pub scheme: Scheme,
    /// Largest cycle-to-cycle change of the surface series still considered periodic, K.
    pub periodicity_tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            cycles: 3,
            dt: 1.0,
            discard_cycles: 1,
            record_every: 1,
            probe_depths: vec![0.03],
            scheme: Scheme::Implicit,
            periodicity_tolerance: 0.05,
        }
    }
}

/// Drives `grid` through `opts.cycles` forcing periods.
pub fn run_diurnal(
    grid: &mut SimGrid,
    forcing: &ForcingProfile,
    env: &EnvironmentConfig,
    opts: &RunOptions,
) -> Result<SimResult> {
    env.validate()?;
    if (forcing.period - env.period_s).abs() > 1e-9 * env.period_s {
        return Err(Error::Config(format!(
            "forcing period {} s differs from environment period {} s",
            forcing.period, env.period_s
        )));
    }
    if forcing.kind.mode() != env.mode {
        return Err(Error::Config(format!(
            "forcing kind {:?} does not drive mode {:?}",
            forcing.kind, env.mode
        )));
    }
    if opts.cycles == 0 || opts.discard_cycles >= opts.cycles {
        return Err(Error::Config(format!(
            "cycles ({}) must exceed discarded spin-up cycles ({})",
            opts.cycles, opts.discard_cycles
        )));
    }
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(Error::Config(format!("dt must be > 0, got {}", opts.dt)));
    }
    if opts.record_every == 0 {
        return Err(Error::Config("record_every must be >= 1".into()));
    }
    for &d in &opts.probe_depths {
        if !(d >= 0.0 && d <= grid.total_depth()) {
            return Err(Error::Config(format!(
                "probe depth {d} m lies outside the column (0 to {} m)",
                grid.total_depth()
            )));
        }
    }

    let steps_per_cycle = ((env.period_s / opts.dt).round() as usize).max(1);
    let dt = env.period_s / steps_per_cycle as f64;
    let total_steps = steps_per_cycle * opts.cycles;
    let first_recorded = steps_per_cycle * opts.discard_cycles;

    let mut out = Recorder::new(&opts.probe_depths);
    let mut cumulative = 0.0;
    let mut max_iter = 0;
    let mut max_residual: f64 = 0.0;
    if first_recorded == 0 {
        out.record(grid, env, forcing.value_at(0.0), 0.0, cumulative);
    }
    for s in 1..=total_steps {
        let t = s as f64 * dt;
        let f = forcing.value_at(t);
        let rep = step(grid, f, dt, env, opts.scheme).map_err(|e| match e {
            Error::Divergence { reason, .. } => Error::Divergence { step: s, reason },
            other => other,
        })?;
        cumulative += rep.boundary_energy;
        max_iter = max_iter.max(rep.newton_iterations);
        max_residual = max_residual.max(rep.residual);
        if let Some(bad) = grid.temperatures().iter().position(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Divergence {
                step: s,
                reason: format!("node {bad} temperature became {}", grid.temperatures()[bad]),
            });
        }
        if s >= first_recorded && (s - first_recorded) % opts.record_every == 0 {
            out.record(grid, env, f, t, cumulative);
        }
    }

    let per_cycle = (steps_per_cycle % opts.record_every == 0).then(|| steps_per_cycle / opts.record_every);
    let periodicity_residual = per_cycle.and_then(|m| {
        let ts = &out.surface;
        (ts.len() >= 2 * m).then(|| {
            let n = ts.len();
            (n - m..n).map(|i| (ts[i] - ts[i - m]).abs()).fold(0.0, f64::max)
        })
    });
    if let Some(r) = periodicity_residual {
        if r > opts.periodicity_tolerance {
            log::warn!("surface series not periodic: last-cycle change {r:.4} K");
        }
    }

    Ok(SimResult {
        times: out.times,
        surface_temperature: out.surface,
        subsurface: out.probes,
        net_flux: out.flux,
        forcing: out.forcing,
        heat_content: out.heat,
        boundary_energy: out.energy,
        period: env.period_s,
        mode: env.mode,
        emissivity: grid.soil.emissivity,
        albedo: grid.soil.albedo,
        diagnostics: SimDiagnostics {
            steps: total_steps,
            dt,
            scheme: opts.scheme,
            max_newton_iterations: max_iter,
            max_residual,
            periodicity_residual,
            periodic: periodicity_residual.map(|r| r <= opts.periodicity_tolerance),
        },
    })
}

struct Recorder {
    times: Vec<f64>,
    surface: Vec<f64>,
    probes: Vec<ProbeSeries>,
    flux: Vec<f64>,
    forcing: Vec<f64>,
    heat: Vec<f64>,
    energy: Vec<f64>,
}

impl Recorder {
    fn new(depths: &[f64]) -> Self {
        Self {
            times: Vec::new(),
            surface: Vec::new(),
            probes: depths
                .iter()
                .map(|&depth| ProbeSeries {
                    depth,
                    temperature: Vec::new(),
                })
                .collect(),
            flux: Vec::new(),
            forcing: Vec::new(),
            heat: Vec::new(),
            energy: Vec::new(),
        }
    }

    fn record(&mut self, grid: &SimGrid, env: &EnvironmentConfig, forcing: f64, t: f64, energy: f64) {
        self.times.push(t);
        self.surface.push(grid.surface_temperature());
        for p in &mut self.probes {
            let v = interpolate(grid.depths(), grid.temperatures(), p.depth)
                .expect("probe depth validated against the column");
            p.temperature.push(v);
        }
        self.flux.push(boundary_flux(grid, env, forcing));
        self.forcing.push(forcing);
        self.heat.push(grid.heat_content());
        self.energy.push(energy);
    }
}
