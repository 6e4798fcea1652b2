//! TOML experiment configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::brenner_solver::BrennerParams;
use crate::dmv_verifier::VerifierConfig;
use crate::error::{Error, Result};
use crate::field::{snapshot_from_primitive, Grid1D, Snapshot, SolverKind};
use crate::nsf_solver::NsfParams;
use crate::thermodynamics::{GasModel, PrimitiveState};

/// Smallest ε-family accepted for a sweep.
pub const MIN_FAMILY_SIZE: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    IdealGas {
        c_v: f64,
        #[serde(default = "one")]
        mu_lower: f64,
        #[serde(default)]
        eta_bar: f64,
        #[serde(default = "one")]
        kappa_lower: f64,
    },
    MonatomicDegenerate {
        #[serde(default = "one")]
        p_bar: f64,
        #[serde(default = "default_quadrature_tol")]
        quadrature_tol: f64,
        #[serde(default = "one")]
        mu_lower: f64,
        #[serde(default)]
        eta_bar: f64,
        #[serde(default = "one")]
        kappa_lower: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn default_quadrature_tol() -> f64 {
    1e-10
}

impl ModelConfig {
    pub fn build(&self) -> Result<GasModel> {
        match *self {
            Self::IdealGas { c_v, mu_lower, eta_bar, kappa_lower } => {
                GasModel::ideal_gas(c_v)?.with_transport(mu_lower, eta_bar, kappa_lower)
            }
            Self::MonatomicDegenerate { p_bar, quadrature_tol, mu_lower, eta_bar, kappa_lower } => {
                GasModel::monatomic_degenerate(p_bar, quadrature_tol)?.with_transport(mu_lower, eta_bar, kappa_lower)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub n: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    /// Explicit interior output times; overrides `snapshot_intervals`.
    #[serde(default)]
    pub snapshot_times: Option<Vec<f64>>,
    /// Number of equal output intervals on `[0, t_end]`.
    #[serde(default = "default_intervals")]
    pub snapshot_intervals: usize,
    /// Brenner only: heat-capacity toggle of the drift coefficient.
    #[serde(default)]
    pub use_cp: bool,
}

fn default_cfl() -> f64 {
    0.5
}

fn default_intervals() -> usize {
    10
}

impl SolverConfig {
    /// Interior output times, excluding `0` and `t_end`.
    pub fn output_times(&self) -> Vec<f64> {
        match &self.snapshot_times {
            Some(t) => t.clone(),
            None => (1..self.snapshot_intervals).map(|k| self.t_end * k as f64 / self.snapshot_intervals as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "one")]
    pub theta_bar: f64,
}

fn default_alpha() -> f64 {
    3.0
}

fn default_beta() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Constant {
        rho: f64,
        u: f64,
        theta: f64,
    },
    /// `ρ = rho (1 + amplitude sin 2π mode x)`, `u` and `θ` constant.
    Perturbed {
        rho: f64,
        u: f64,
        theta: f64,
        amplitude: f64,
        mode: u32,
    },
}

impl InitialData {
    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant { .. })
    }

    pub fn at(&self, x: f64) -> PrimitiveState {
        match *self {
            Self::Constant { rho, u, theta } => PrimitiveState::new(rho, theta, u),
            Self::Perturbed { rho, u, theta, amplitude, mode } => {
                PrimitiveState::new(rho * (1.0 + amplitude * (2.0 * PI * mode as f64 * x).sin()), theta, u)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let (rho, theta, amp) = match *self {
            Self::Constant { rho, theta, .. } => (rho, theta, 0.0),
            Self::Perturbed { rho, theta, amplitude, .. } => (rho, theta, amplitude),
        };
        if !(rho > 0.0 && theta > 0.0) {
            return Err(Error::Config(format!("initial ρ and θ must be positive, got {rho}, {theta}")));
        }
        if !(amp.abs() < 1.0) {
            return Err(Error::Config(format!("perturbation amplitude must lie in (−1, 1), got {amp}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub directory: PathBuf,
    /// Any of `csv`, `ndjson`, `dat`.
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "ndjson".into(), "dat".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: default_dir(), formats: default_formats() }
    }
}

impl OutputConfig {
    pub fn wants(&self, format: &str) -> bool {
        self.formats.iter().any(|f| f == format)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub solver: SolverConfig,
    pub sweep: SweepConfig,
    pub initial: InitialData,
    #[serde(default)]
    pub verifier: VerifierConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Full validation, including the vanishing-dissipation regime for NSF
    /// sweeps unless `override_regime` is set.
    pub fn validate(&self, override_regime: bool) -> Result<()> {
        let eps = &self.sweep.epsilons;
        if eps.is_empty() {
            return Err(Error::Config("the ε list is empty".into()));
        }
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("the ε list must be strictly decreasing".into()));
        }
        self.initial.validate()?;
        Grid1D::new(self.solver.n)?;
        if self.solver.snapshot_times.is_none() && self.solver.snapshot_intervals == 0 {
            return Err(Error::Config("snapshot_intervals must be positive".into()));
        }
        if self.verifier.caps.iter().any(|m| !(*m > 0.0)) {
            return Err(Error::Config("verifier caps must be positive".into()));
        }
        let model = self.model.build()?;
        for &e in eps {
            match self.solver.kind {
                SolverKind::Nsf => self.nsf_params(e).validate(override_regime)?,
                SolverKind::Brenner => {
                    if !model.is_ideal() {
                        return Err(Error::Config("the Brenner solver requires the ideal gas".into()));
                    }
                    self.brenner_params(e).validate()?
                }
            }
        }
        Ok(())
    }

    /// Validation for sweeps, which also need a family of at least
    /// [`MIN_FAMILY_SIZE`] members.
    pub fn validate_sweep(&self, override_regime: bool) -> Result<()> {
        self.validate(override_regime)?;
        if self.sweep.epsilons.len() < MIN_FAMILY_SIZE {
            return Err(Error::Config(format!(
                "a sweep needs at least {MIN_FAMILY_SIZE} values of ε, got {}",
                self.sweep.epsilons.len()
            )));
        }
        Ok(())
    }

    pub fn nsf_params(&self, epsilon: f64) -> NsfParams {
        NsfParams {
            epsilon,
            alpha: self.sweep.alpha,
            beta: self.sweep.beta,
            theta_bar: self.sweep.theta_bar,
            cfl: self.solver.cfl,
            t_end: self.solver.t_end,
            snapshot_times: self.solver.output_times(),
        }
    }

    pub fn brenner_params(&self, epsilon: f64) -> BrennerParams {
        let mut caps = self.verifier.caps.clone();
        caps.push(1e6);
        BrennerParams {
            epsilon,
            cfl: self.solver.cfl,
            t_end: self.solver.t_end,
            snapshot_times: self.solver.output_times(),
            use_cp: self.solver.use_cp,
            caps,
        }
    }

    /// Radiation constant used for the initial energy at this ε.
    pub fn a_rad(&self, epsilon: f64) -> f64 {
        match self.solver.kind {
            SolverKind::Nsf => self.nsf_params(epsilon).a_rad(),
            SolverKind::Brenner => 0.0,
        }
    }

    pub fn initial_snapshot(&self, model: &GasModel, epsilon: f64) -> Result<Snapshot> {
        let grid = Grid1D::new(self.solver.n)?;
        snapshot_from_primitive(&grid, model, self.a_rad(epsilon), 0.0, |x| self.initial.at(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[model]
variant = "monatomic_degenerate"

[solver]
kind = "nsf"
n = 32
t_end = 0.1

[sweep]
epsilons = [0.1, 0.05, 0.025]
theta_bar = 0.9

[initial]
profile = "perturbed"
rho = 1.0
u = 0.0
theta = 1.0
amplitude = 0.1
mode = 1
"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        cfg.validate_sweep(false).unwrap();
        assert_eq!(cfg.verifier.k_max, 4);
        assert_eq!(cfg.solver.output_times().len(), 9);
        assert!(cfg.output.wants("ndjson"));
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_bad_sweeps() {
        let mut cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        cfg.sweep.epsilons.clear();
        assert!(matches!(cfg.validate(false), Err(Error::Config(_))));
        cfg.sweep.epsilons = vec![0.05, 0.1, 0.01];
        assert!(cfg.validate(false).is_err());
        cfg.sweep.epsilons = vec![0.1, 0.05];
        assert!(cfg.validate(false).is_ok());
        assert!(cfg.validate_sweep(false).is_err());
    }

    #[test]
    fn regime_check_can_be_overridden() {
        let mut cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        cfg.sweep.alpha = 2.0;
        assert!(cfg.validate(false).is_err());
        assert!(cfg.validate(true).is_ok());
        cfg.sweep.alpha = 3.0;
        cfg.sweep.beta = 1.0;
        assert!(cfg.validate(false).is_err());
    }

    #[test]
    fn brenner_needs_ideal_gas() {
        let mut cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        cfg.solver.kind = SolverKind::Brenner;
        assert!(cfg.validate(false).is_err());
        cfg.model = ModelConfig::IdealGas { c_v: 1.5, mu_lower: 1.0, eta_bar: 0.0, kappa_lower: 1.0 };
        assert!(cfg.validate(false).is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = SAMPLE.replace("n = 32", "n = 32\nresolution = 4");
        assert!(matches!(ExperimentConfig::from_toml_str(&text), Err(Error::Parse(_))));
    }
}
