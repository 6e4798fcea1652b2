//! Brenner's bi-velocity model for a Boyle–Mariotte gas.
//!
//! Mass is carried by `v_m = v − εK ∂ₓ log ρ` with `K = κ/(c_v ρ)`, so the
//! mass flux splits into the Euler part `ρv` and the drift
//! `J = −ε (κ/c_v) ∂ₓ log ρ`. Momentum and energy are advected by `v_m` as
//! well, while pressure work, stress and heat flux are as in the
//! Navier–Stokes–Fourier solver. There is no radiation and no cooling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    cell_sum, min_principle_ratio, BalanceRecord, Grid1D, RenormalizedRecord, RunStats, SlackSeries, Snapshot,
    SolverKind, Trajectory,
};
use crate::scheme::{clip_step, output_times, z_m, DT_FLOOR};
use crate::thermodynamics::GasModel;

/// Admissible range of ρ and θ; leaving it aborts the run.
pub const STATE_BOUNDS: (f64, f64) = (1e-8, 1e8);

/// Relative slack allowed in the minimum-principle monitor.
pub const MIN_PRINCIPLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrennerParams {
    pub epsilon: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    /// Use `K = κ/(c_p ρ)` instead of `κ/(c_v ρ)`. The entropy identities
    /// are only claimed for the default.
    pub use_cp: bool,
    /// Caps `M` of the renormalizations `Z_M` tracked during the run.
    pub caps: Vec<f64>,
}

impl BrennerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!("ε must be nonnegative, got {}", self.epsilon)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if let Some(m) = self.caps.iter().find(|m| !(**m > 0.0)) {
            return Err(Error::Config(format!("renormalization caps must be positive, got {m}")));
        }
        Ok(())
    }
}

/// Primitive Brenner state on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BrennerState {
    pub rho: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
    pub epsilon: f64,
    pub use_cp: bool,
}

impl BrennerState {
    pub fn from_snapshot(snap: &Snapshot, epsilon: f64, use_cp: bool) -> Self {
        Self { rho: snap.rho.clone(), v: snap.u.clone(), theta: snap.theta.clone(), epsilon, use_cp }
    }
}

fn require_ideal(model: &GasModel) -> Result<()> {
    if model.is_ideal() {
        Ok(())
    } else {
        Err(Error::Config("the Brenner solver requires the ideal gas".into()))
    }
}

/// The specific heat in `K`.
fn k_heat(model: &GasModel, use_cp: bool) -> f64 {
    if use_cp {
        model.gamma() * model.c_v()
    } else {
        model.c_v()
    }
}

/// `v_m = v − εK ∂ₓ log ρ`, central differences.
pub fn mass_velocity(state: &BrennerState, model: &GasModel) -> Result<Vec<f64>> {
    require_ideal(model)?;
    let n = state.rho.len();
    let grid = Grid1D::new(n)?;
    if let Some(i) = state.rho.iter().position(|r| !(*r > 0.0)) {
        return Err(Error::RejectedState(format!("nonpositive density at cell {i}")));
    }
    let c = k_heat(model, state.use_cp);
    Ok((0..n)
        .map(|i| {
            let dlog = (state.rho[grid.right(i)].ln() - state.rho[grid.left(i)].ln()) / (2.0 * grid.dx());
            let k = model.transport_raw(state.theta[i]).kappa / (c * state.rho[i]);
            state.v[i] - state.epsilon * k * dlog
        })
        .collect())
}

/// Time derivatives of `(ρ, ρv, E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrennerRhs {
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub energy: Vec<f64>,
}

struct Stage {
    rhs: BrennerRhs,
    theta: Vec<f64>,
    v: Vec<f64>,
    max_wave: f64,
    d_max: f64,
    production: f64,
    renormalized: Vec<f64>,
    viscous: f64,
    thermal: f64,
    gradient: f64,
    min_principle: f64,
}

fn abort(t: f64, cell: usize, reason: impl Into<String>) -> Error {
    Error::SolverAbort { t, cell, reason: reason.into() }
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    grid: &Grid1D,
    rho: &[f64],
    m: &[f64],
    en: &[f64],
    params: &BrennerParams,
    model: &GasModel,
    t: f64,
) -> Result<Stage> {
    let n = grid.n();
    let dx = grid.dx();
    let eps = params.epsilon;
    let c_v = model.c_v();
    let gamma = model.gamma();
    let c_k = k_heat(model, params.use_cp);
    let (lo, hi) = STATE_BOUNDS;

    let mut theta = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut visc = vec![0.0; n];
    let mut kappa = vec![0.0; n];
    let mut wave = vec![0.0; n];
    let mut ln_rho = vec![0.0; n];
    let mut ln_theta = vec![0.0; n];
    let mut d_max = 0.0f64;
    let mut min_principle = f64::NEG_INFINITY;
    for i in 0..n {
        if !(rho[i] >= lo && rho[i] <= hi) || !m[i].is_finite() || !en[i].is_finite() {
            return Err(abort(t, i, format!("density {} outside [{lo:e}, {hi:e}]", rho[i])));
        }
        v[i] = m[i] / rho[i];
        theta[i] = (en[i] - 0.5 * m[i] * v[i]) / (rho[i] * c_v);
        if !(theta[i] >= lo && theta[i] <= hi) {
            return Err(abort(t, i, format!("temperature {} outside [{lo:e}, {hi:e}]", theta[i])));
        }
        p[i] = rho[i] * theta[i];
        let tr = model.transport_raw(theta[i]);
        visc[i] = 4.0 / 3.0 * tr.mu + tr.eta;
        kappa[i] = tr.kappa;
        wave[i] = v[i].abs() + (gamma * p[i] / rho[i]).sqrt();
        ln_rho[i] = rho[i].ln();
        ln_theta[i] = theta[i].ln();
        d_max = d_max.max(visc[i] / rho[i]).max(kappa[i] / (c_v.min(c_k) * rho[i]));
        min_principle = min_principle.max(rho[i].powf(gamma - 1.0) / (c_v * theta[i]));
    }
    let s: Vec<f64> = (0..n).map(|i| c_v * ln_theta[i] - ln_rho[i]).collect();

    let mut face = vec![[0.0; 3]; n];
    let mut production = 0.0;
    let mut renormalized = vec![0.0; params.caps.len()];
    let mut viscous = 0.0;
    let mut thermal = 0.0;
    let mut gradient = 0.0f64;
    let mut max_wave = 0.0f64;
    for i in 0..n {
        let (l, r) = (i, grid.right(i));
        let sw = wave[l].max(wave[r]);
        max_wave = max_wave.max(sw);
        let mut f_rho = 0.5 * (m[l] + m[r]) - 0.5 * sw * (rho[r] - rho[l]);
        let mut f_m = 0.5 * (m[l] * v[l] + p[l] + m[r] * v[r] + p[r]) - 0.5 * sw * (m[r] - m[l]);
        let mut f_e = 0.5 * ((en[l] + p[l]) * v[l] + (en[r] + p[r]) * v[r]) - 0.5 * sw * (en[r] - en[l]);

        let kappa_f = 0.5 * (kappa[l] + kappa[r]);
        let v_f = 0.5 * (v[l] + v[r]);
        let dlr = (ln_rho[r] - ln_rho[l]) / dx;
        let drift = -eps * kappa_f / c_k * dlr;
        f_rho += drift;
        f_m += v_f * drift;
        f_e += 0.5 * (en[l] / rho[l] + en[r] / rho[r]) * drift;

        let vx = (v[r] - v[l]) / dx;
        let thx = (theta[r] - theta[l]) / dx;
        let sigma = eps * 0.5 * (visc[l] + visc[r]) * vx;
        f_m -= sigma;
        f_e += -sigma * v_f - eps * kappa_f * thx;
        face[i] = [f_rho, f_m, f_e];

        let theta_f = 0.5 * (theta[l] + theta[r]);
        let dlt = (ln_theta[r] - ln_theta[l]) / dx;
        let prod = sigma * vx / theta_f + eps * kappa_f * (dlt * dlt + dlr * dlr / c_k);
        production += prod * dx;
        let s_f = 0.5 * (s[l] + s[r]);
        let sx = (s[r] - s[l]) / dx;
        for (k, &cap) in params.caps.iter().enumerate() {
            let (_, dz, ddz) = z_m(s_f, cap);
            renormalized[k] += (dz * prod - ddz * eps * kappa_f / c_k * sx * sx) * dx;
        }
        viscous += eps * vx * vx * dx;
        thermal += eps * (thx * thx + theta[l] * theta[l]) * dx;
        gradient = gradient.max((v[r] - v[l]).abs());
    }

    let mut rhs = BrennerRhs { rho: vec![0.0; n], m: vec![0.0; n], energy: vec![0.0; n] };
    for i in 0..n {
        let (fr, fl) = (face[i], face[grid.left(i)]);
        rhs.rho[i] = -(fr[0] - fl[0]) / dx;
        rhs.m[i] = -(fr[1] - fl[1]) / dx;
        rhs.energy[i] = -(fr[2] - fl[2]) / dx;
    }
    Ok(Stage {
        rhs,
        theta,
        v,
        max_wave,
        d_max,
        production,
        renormalized,
        viscous,
        thermal,
        gradient,
        min_principle,
    })
}

/// Semidiscrete right-hand side at a snapshot.
pub fn brenner_rhs(snap: &Snapshot, params: &BrennerParams, model: &GasModel) -> Result<BrennerRhs> {
    require_ideal(model)?;
    let grid = Grid1D::new(snap.n())?;
    Ok(evaluate(&grid, &snap.rho, &snap.m, &snap.energy, params, model, snap.t)?.rhs)
}

fn stable_dt(grid: &Grid1D, stage: &Stage, params: &BrennerParams) -> f64 {
    let dx = grid.dx();
    let hyperbolic = dx / stage.max_wave;
    let parabolic = if stage.d_max > 0.0 && params.epsilon > 0.0 {
        dx * dx / (2.0 * params.epsilon * stage.d_max)
    } else {
        f64::INFINITY
    };
    params.cfl * hyperbolic.min(parabolic)
}

/// `∑ ρ Z_M(s) dx`.
fn renormalized_total(snap: &Snapshot, model: &GasModel, cap: f64) -> f64 {
    let v: Vec<f64> = (0..snap.n())
        .map(|i| snap.rho[i] * z_m(model.specific_entropy_raw(snap.rho[i], snap.theta[i]), cap).0)
        .collect();
    cell_sum(&v)
}

/// Integrates from `initial` (ρ, m = ρv, E) to `params.t_end`.
pub fn run(initial: &Snapshot, params: &BrennerParams, model: &GasModel) -> Result<Trajectory> {
    require_ideal(model)?;
    params.validate()?;
    let grid = Grid1D::new(initial.n())?;
    let n = grid.n();
    let targets = output_times(initial.t, params.t_end, &params.snapshot_times)?;

    let mut rho = initial.rho.clone();
    let mut m = initial.m.clone();
    let mut en = initial.energy.clone();
    let mut t = initial.t;
    let mut stage = evaluate(&grid, &rho, &m, &en, params, model, t)?;

    let mut stats = RunStats {
        min_dt: f64::INFINITY,
        min_principle_initial: Some(stage.min_principle),
        min_principle_max: Some(stage.min_principle),
        ..RunStats::default()
    };
    let mut production = 0.0;
    let mut renorm = vec![0.0; params.caps.len()];
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut balance = Vec::with_capacity(targets.len());
    let mut record = |t: f64, rho: &[f64], m: &[f64], en: &[f64], st: &Stage, production: f64, renorm: &[f64]| {
        let snap = Snapshot {
            t,
            rho: rho.to_vec(),
            m: m.to_vec(),
            energy: en.to_vec(),
            theta: st.theta.clone(),
            u: st.v.clone(),
        };
        let ent: Vec<f64> = (0..n).map(|i| rho[i] * model.specific_entropy_raw(rho[i], st.theta[i])).collect();
        balance.push(BalanceRecord {
            t,
            mass: snap.total_mass(),
            momentum: snap.total_momentum(),
            energy: snap.total_energy(),
            cooling: 0.0,
            entropy: cell_sum(&ent),
            entropy_production: production,
            renormalized: params
                .caps
                .iter()
                .zip(renorm)
                .map(|(&cap, &p)| RenormalizedRecord { cap, total: renormalized_total(&snap, model, cap), production: p })
                .collect(),
        });
        snapshots.push(snap);
    };
    record(t, &rho, &m, &en, &stage, production, &renorm);

    for &target in &targets[1..] {
        while t < target {
            let dt_stable = stable_dt(&grid, &stage, params);
            if !(dt_stable >= DT_FLOOR) {
                return Err(abort(t, 0, format!("time step {dt_stable:e} underflow")));
            }
            let (dt, clipped) = clip_step(t, dt_stable, target);
            let r0 = &stage.rhs;
            let rho1: Vec<f64> = (0..n).map(|i| rho[i] + dt * r0.rho[i]).collect();
            let m1: Vec<f64> = (0..n).map(|i| m[i] + dt * r0.m[i]).collect();
            let en1: Vec<f64> = (0..n).map(|i| en[i] + dt * r0.energy[i]).collect();
            let stage1 = evaluate(&grid, &rho1, &m1, &en1, params, model, t + dt)?;
            let r1 = &stage1.rhs;
            let rho2: Vec<f64> = (0..n).map(|i| 0.5 * rho[i] + 0.5 * (rho1[i] + dt * r1.rho[i])).collect();
            let m2: Vec<f64> = (0..n).map(|i| 0.5 * m[i] + 0.5 * (m1[i] + dt * r1.m[i])).collect();
            let en2: Vec<f64> = (0..n).map(|i| 0.5 * en[i] + 0.5 * (en1[i] + dt * r1.energy[i])).collect();
            let t_next = if clipped { target } else { t + dt };
            let next = evaluate(&grid, &rho2, &m2, &en2, params, model, t_next)?;

            production += 0.5 * dt * (stage.production + stage1.production);
            for (k, acc) in renorm.iter_mut().enumerate() {
                *acc += 0.5 * dt * (stage.renormalized[k] + stage1.renormalized[k]);
            }
            stats.viscous_dissipation += 0.5 * dt * (stage.viscous + stage1.viscous);
            stats.thermal_dissipation += 0.5 * dt * (stage.thermal + stage1.thermal);
            stats.max_gradient_indicator = stats.max_gradient_indicator.max(stage.gradient);
            stats.min_principle_max = stats.min_principle_max.map(|v| v.max(next.min_principle));
            stats.steps += 1;
            stats.min_dt = stats.min_dt.min(dt);
            stats.max_dt = stats.max_dt.max(dt);

            rho = rho2;
            m = m2;
            en = en2;
            stage = next;
            t = t_next;
        }
        record(t, &rho, &m, &en, &stage, production, &renorm);
    }
    stats.max_gradient_indicator = stats.max_gradient_indicator.max(stage.gradient);

    Ok(Trajectory {
        source: SolverKind::Brenner,
        grid,
        epsilon: params.epsilon,
        a_rad: 0.0,
        snapshots,
        balance,
        stats,
    })
}

/// `[∑ρs dx]₀^τ − ∫₀^τ (production) dt`; zero for smooth solutions up to the
/// scheme's error.
pub fn entropy_balance_residual(traj: &Trajectory) -> SlackSeries {
    let s0 = traj.balance[0].entropy;
    SlackSeries {
        times: traj.balance.iter().map(|b| b.t).collect(),
        values: traj.balance.iter().map(|b| (b.entropy - s0) - b.entropy_production).collect(),
    }
}

/// The renormalized counterpart for a cap `M` tracked during the run.
pub fn renormalized_entropy_residual(traj: &Trajectory, cap: f64) -> Result<SlackSeries> {
    if !(cap > 0.0) {
        return Err(Error::Domain(format!("cap M must be positive, got {cap}")));
    }
    let k = traj.balance[0]
        .renormalized
        .iter()
        .position(|r| r.cap == cap)
        .ok_or_else(|| Error::Mismatch(format!("cap M = {cap} was not tracked during the run")))?;
    let z0 = traj.balance[0].renormalized[k].total;
    Ok(SlackSeries {
        times: traj.balance.iter().map(|b| b.t).collect(),
        values: traj
            .balance
            .iter()
            .map(|b| (b.renormalized[k].total - z0) - b.renormalized[k].production)
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPrincipleReport {
    pub initial: f64,
    pub running_max: f64,
    /// `running_max / initial − 1`
    pub relative_excess: f64,
    pub passed: bool,
}

/// Running maximum over every accepted step of `ρ^{γ−1}/(c_v θ)`.
pub fn minimum_principle_monitor(traj: &Trajectory, model: &GasModel) -> MinPrincipleReport {
    let ratio = |s: &Snapshot| min_principle_ratio(s, model.gamma(), model.c_v());
    let initial = traj.stats.min_principle_initial.unwrap_or_else(|| ratio(&traj.snapshots[0]));
    let running_max = traj
        .snapshots
        .iter()
        .map(ratio)
        .fold(traj.stats.min_principle_max.unwrap_or(initial), f64::max);
    let relative_excess = running_max / initial - 1.0;
    MinPrincipleReport { initial, running_max, relative_excess, passed: relative_excess <= MIN_PRINCIPLE_TOL }
}
