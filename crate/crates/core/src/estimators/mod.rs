//! Thermal-inertia estimators and the net-flux budgets they consume.

mod amplitude;
mod flux;
mod harmonic;
mod inertia;
pub mod table;

pub use amplitude::{extract_amplitudes, AmplitudeMetrics, Convention};
pub use flux::{net_flux, planetary_net_flux};
pub use harmonic::{fit_harmonic, wrap_phase, HarmonicFit};
pub use inertia::{ati, i_sin};
