//! Orchestration: configuration, ε-sweeps, the weak–strong experiment,
//! audits and artifact emission.

pub mod audits;
pub mod config;
pub mod emit;
pub mod sweep;
pub mod weak_strong;

pub use audits::{releng_audit, releng_tolerance, thermo_audit, RelengAudit, ThermoAudit};
pub use config::{ExperimentConfig, InitialData, ModelConfig};
pub use emit::{emit_sweep, emit_weak_strong};
pub use sweep::{default_workers, run_sweep, RunOptions, SweepOutcome};
pub use weak_strong::{weak_strong_experiment, WeakStrongReport};
