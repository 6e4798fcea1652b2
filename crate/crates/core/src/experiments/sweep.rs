//! Concurrent ε-sweeps and the end-to-end sweep → measure → verifier pipeline.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::dmv_verifier::{verify, DmvReport};
use crate::error::{Error, Result};
use crate::field::{SolverKind, Trajectory};
use crate::thermodynamics::GasModel;
use crate::young_measure::{build, dissipation_defect, ladder_spread, spread, EpsilonFamily, SpreadReport, YoungMeasureField};
use crate::{brenner_solver, nsf_solver};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "DMVLAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub workers: usize,
    pub override_regime: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { workers: default_workers(), override_regime: false }
    }
}

/// Worker count from the environment, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// One solver run for a single ε.
pub fn run_single(cfg: &ExperimentConfig, model: &GasModel, epsilon: f64) -> Result<Trajectory> {
    let initial = cfg.initial_snapshot(model, epsilon)?;
    match cfg.solver.kind {
        SolverKind::Nsf => nsf_solver::run(&initial, &cfg.nsf_params(epsilon), model),
        SolverKind::Brenner => brenner_solver::run(&initial, &cfg.brenner_params(epsilon), model),
    }
}

/// Runs every ε of the sweep concurrently; results keep the ε order.
pub fn run_trajectories(cfg: &ExperimentConfig, model: &GasModel, workers: usize) -> Result<Vec<Result<Trajectory>>> {
    with_pool(workers, || cfg.sweep.epsilons.par_iter().map(|&e| run_single(cfg, model, e)).collect())
}

/// Per-run diagnostics, one row of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub epsilon: f64,
    pub status: String,
    pub steps: usize,
    pub min_dt: f64,
    pub max_dt: f64,
    /// `|ΔE + cooling| / E(0)` at the last output.
    pub energy_balance: f64,
    /// `|ΔM| / M(0)`.
    pub mass_drift: f64,
    /// `|ΔP| / max(|P(0)|, M(0))`.
    pub momentum_drift: f64,
    pub entropy_slack_min: f64,
    pub max_gradient_indicator: f64,
    pub error: Option<String>,
}

impl RunSummary {
    pub fn from_trajectory(tr: &Trajectory) -> Self {
        let first = &tr.balance[0];
        let last = tr.balance.last().unwrap_or(first);
        let slack = match tr.source {
            SolverKind::Nsf => nsf_solver::discrete_entropy_production(tr),
            SolverKind::Brenner => brenner_solver::entropy_balance_residual(tr),
        };
        Self {
            epsilon: tr.epsilon,
            status: "ok".into(),
            steps: tr.stats.steps,
            min_dt: tr.stats.min_dt,
            max_dt: tr.stats.max_dt,
            energy_balance: nsf_solver::energy_balance_relative(tr),
            mass_drift: (last.mass - first.mass).abs() / first.mass.abs(),
            momentum_drift: (last.momentum - first.momentum).abs() / first.momentum.abs().max(first.mass.abs()),
            entropy_slack_min: slack.min(),
            max_gradient_indicator: tr.stats.max_gradient_indicator,
            error: None,
        }
    }

    pub fn failed(epsilon: f64, err: &Error) -> Self {
        Self {
            epsilon,
            status: "aborted".into(),
            steps: 0,
            min_dt: f64::NAN,
            max_dt: f64::NAN,
            energy_balance: f64::NAN,
            mass_drift: f64::NAN,
            momentum_drift: f64::NAN,
            entropy_slack_min: f64::NAN,
            max_gradient_indicator: f64::NAN,
            error: Some(err.to_string()),
        }
    }
}

/// Everything a sweep produces. On a solver abort only `runs` is filled.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub config: ExperimentConfig,
    pub runs: Vec<RunSummary>,
    pub family: Option<EpsilonFamily>,
    pub measure: Option<YoungMeasureField>,
    pub report: Option<DmvReport>,
    pub spread: Option<SpreadReport>,
    /// Global L¹ density spread of consecutive ε pairs.
    pub ladder_spread: Vec<f64>,
}

impl SweepOutcome {
    pub fn aborted(&self) -> bool {
        self.runs.iter().any(|r| r.error.is_some())
    }

    pub fn passed(&self) -> bool {
        !self.aborted() && self.report.as_ref().is_some_and(|r| r.passed)
    }
}

pub fn run_sweep(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<SweepOutcome> {
    cfg.validate_sweep(opts.override_regime)?;
    let model = cfg.model.build()?;
    let results = run_trajectories(cfg, &model, opts.workers)?;
    let runs: Vec<RunSummary> = results
        .iter()
        .zip(&cfg.sweep.epsilons)
        .map(|(r, &e)| match r {
            Ok(tr) => RunSummary::from_trajectory(tr),
            Err(err) => RunSummary::failed(e, err),
        })
        .collect();
    let mut outcome = SweepOutcome {
        config: cfg.clone(),
        runs,
        family: None,
        measure: None,
        report: None,
        spread: None,
        ladder_spread: Vec::new(),
    };
    if outcome.aborted() {
        return Ok(outcome);
    }
    let family = EpsilonFamily::new(results.into_iter().collect::<Result<Vec<_>>>()?)?;
    let measure = build(&family, Some(&model))?;
    let defect = dissipation_defect(&measure, &family);
    outcome.report = Some(verify(&measure, &defect, &model, &cfg.verifier)?);
    outcome.spread = Some(spread(&measure));
    outcome.ladder_spread = ladder_spread(&family)?;
    outcome.measure = Some(measure);
    outcome.family = Some(family);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::InitialData;

    fn small(kind: SolverKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::from_toml_str(
            r#"
[model]
variant = "ideal_gas"
c_v = 1.5

[solver]
kind = "nsf"
n = 16
t_end = 0.05
snapshot_intervals = 4

[sweep]
epsilons = [0.1, 0.05, 0.025]

[initial]
profile = "perturbed"
rho = 1.0
u = 0.0
theta = 1.0
amplitude = 0.05
mode = 1
"#,
        )
        .unwrap();
        cfg.solver.kind = kind;
        cfg
    }

    #[test]
    fn sweep_is_deterministic_across_worker_counts() {
        let cfg = small(SolverKind::Brenner);
        let one = run_sweep(&cfg, &RunOptions { workers: 1, override_regime: false }).unwrap();
        let three = run_sweep(&cfg, &RunOptions { workers: 3, override_regime: false }).unwrap();
        assert_eq!(one.measure, three.measure);
        assert_eq!(one.report, three.report);
        assert!(one.passed());
    }

    #[test]
    fn constant_sweep_collapses_to_the_cooling_trajectory() {
        let mut cfg = small(SolverKind::Nsf);
        cfg.initial = InitialData::Constant { rho: 1.0, u: 0.2, theta: 1.0 };
        let out = run_sweep(&cfg, &RunOptions::default()).unwrap();
        assert!(out.passed());
        let y = out.measure.unwrap();
        for t in 0..y.times.len() {
            let first = y.atoms(t, 0).to_vec();
            assert!((1..y.n).all(|x| y.atoms(t, x) == first.as_slice()));
        }
        // θ = θ̄: no cooling, so only the radiation energy ε^α θ⁴ separates atoms.
        let spread = out.spread.unwrap();
        assert!(spread.global_l1[0] < 1e-14);
    }

    #[test]
    fn solver_abort_yields_a_partial_outcome() {
        let mut cfg = small(SolverKind::Brenner);
        cfg.initial = InitialData::Constant { rho: 1.0, u: 0.0, theta: 1e-9 };
        let out = run_sweep(&cfg, &RunOptions::default()).unwrap();
        assert!(out.aborted());
        assert!(out.report.is_none());
        assert!(!out.passed());
        assert!(out.runs.iter().all(|r| r.status == "aborted" && r.error.is_some()));
    }

    #[test]
    fn empty_sweep_is_a_config_error() {
        let mut cfg = small(SolverKind::Nsf);
        cfg.sweep.epsilons.clear();
        assert!(matches!(run_sweep(&cfg, &RunOptions::default()), Err(Error::Config(_))));
    }
}
