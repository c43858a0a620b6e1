//! One-dimensional transient heat conduction in a soil column with a
//! radiative surface budget.
//!
//! In chamber mode the surface exchanges radiation with heaters at a
//! prescribed temperature, `G = ε·σ·(T_heater⁴ − T_s⁴)`. In planetary mode it
//! absorbs shortwave flux and emits, `G = (1 − A)·R_sw − ε·σ·T_s⁴`. One signed
//! flux covers both heating and cooling; convection is ignored.
//!
//! The thermophysical parameters of real samples are generally unknown, so
//! runs are meant for controlled comparisons (pressure, inertia, forcing),
//! not for reproducing measured curves.

mod analytic;
mod forcing;
mod grid;
mod result;
mod solver;

pub use analytic::{analytic_reference, AnalyticResponse};
pub use forcing::{ForcingKind, ForcingProfile};
pub use grid::{build_grid, skin_depth, ColumnDepth, GridOptions, SimGrid, Thermophysics, MIN_NODES};
pub use result::{ProbeSeries, ProbeSummary, SeriesSummary, SimDiagnostics, SimResult, SimSummary};
pub use solver::{
    boundary_flux, explicit_stability_limit, run_diurnal, step, RunOptions, Scheme, StepReport,
    NEWTON_MAX_ITERATIONS, NEWTON_TOLERANCE_K,
};
