//! Numerical self-checks of the thermodynamic hypotheses: stability,
//! concavity of the entropy, Gibbs' relation, and negative semidefiniteness
//! of the total-entropy Hessian.

use nalgebra::{Matrix3, SymmetricEigen};
use serde::Serialize;

use super::{ConservativeState, ExtReal, GasModel, PrimitiveState};
use crate::error::Result;

/// Relative step for all central-difference consistency checks.
pub const FD_REL_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    /// Central-difference `∂p/∂ρ`.
    pub min_dp_drho: f64,
    /// Closed-form `∂e/∂θ`.
    pub min_de_dtheta: f64,
    pub samples: usize,
    pub passed: bool,
}

pub fn check_stability(model: &GasModel, samples: &[(f64, f64)]) -> Result<StabilityReport> {
    let mut min_dp = f64::INFINITY;
    let mut min_de = f64::INFINITY;
    for &(rho, theta) in samples {
        PrimitiveState::new(rho, theta, 0.0).check()?;
        let hr = FD_REL_STEP * rho;
        let p = |r: f64| model.pressure(&PrimitiveState::new(r, theta, 0.0));
        let dp = (p(rho + hr)? - p(rho - hr)?) / (2.0 * hr);
        min_dp = min_dp.min(dp);
        // The thermal part of e is ~e^{−q} below the cold energy deep in the
        // degenerate regime, beyond what a difference quotient can resolve.
        min_de = min_de.min(model.heat_capacity_raw(rho, theta));
    }
    Ok(StabilityReport {
        min_dp_drho: min_dp,
        min_de_dtheta: min_de,
        samples: samples.len(),
        passed: min_dp > 0.0 && min_de > 0.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcavityPoint {
    pub z: f64,
    /// `(1−γ) S'(Z) − γ S''(Z) Z`; `None` when `Z` is outside the domain.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcavityReport {
    pub points: Vec<ConcavityPoint>,
    pub out_of_domain: usize,
    pub passed: bool,
}

/// Checks `(1−γ) S'(Z) − γ S''(Z) Z > 0` with central differences of the
/// conservative-variable entropy `S(Z)`. Grid points at or below `p̄` are
/// flagged rather than treated as failures.
pub fn check_concavity_condition(model: &GasModel, z_grid: &[f64]) -> Result<ConcavityReport> {
    let gamma = model.gamma();
    let mut points = Vec::with_capacity(z_grid.len());
    let mut out_of_domain = 0;
    let mut passed = true;
    for &z in z_grid {
        let h = FD_REL_STEP * z;
        if !(z - h > model.p_bar()) {
            out_of_domain += 1;
            points.push(ConcavityPoint { z, value: None });
            continue;
        }
        let s = |x: f64| -> Result<f64> {
            Ok(model.entropy_of_z(x)?.finite().unwrap_or(f64::NEG_INFINITY))
        };
        let (sm, s0, sp) = (s(z - h)?, s(z)?, s(z + h)?);
        let d1 = (sp - sm) / (2.0 * h);
        let d2 = (sp - 2.0 * s0 + sm) / (h * h);
        let value = (1.0 - gamma) * d1 - gamma * d2 * z;
        passed &= value > 0.0;
        points.push(ConcavityPoint { z, value: Some(value) });
    }
    Ok(ConcavityReport { points, out_of_domain, passed: passed && out_of_domain < z_grid.len() })
}

/// Residual of `θ Ds = De + p D(1/ρ)` along the ρ and θ directions.
///
/// Each directional residual is taken as a logarithmic derivative (scaled by
/// ρ or θ) and divided by `e(ρ, θ)`; the larger of the two is returned.
pub fn gibbs_residual(model: &GasModel, state: &PrimitiveState) -> Result<f64> {
    let (rho, theta) = (state.rho, state.theta);
    let e0 = model.internal_energy(state)?;
    let p0 = model.pressure(state)?;
    let s = |r: f64, t: f64| -> Result<f64> {
        Ok(model
            .specific_entropy(&PrimitiveState::new(r, t, 0.0))?
            .finite()
            .unwrap_or(f64::NAN))
    };
    let e = |r: f64, t: f64| model.internal_energy(&PrimitiveState::new(r, t, 0.0));

    let hr = FD_REL_STEP * rho;
    let ds_r = (s(rho + hr, theta)? - s(rho - hr, theta)?) / (2.0 * hr);
    let de_r = (e(rho + hr, theta)? - e(rho - hr, theta)?) / (2.0 * hr);
    let dinv_r = -1.0 / (rho * rho);
    let res_rho = rho * (theta * ds_r - de_r - p0 * dinv_r).abs();

    let ht = FD_REL_STEP * theta;
    let ds_t = (s(rho, theta + ht)? - s(rho, theta - ht)?) / (2.0 * ht);
    let de_t = (e(rho, theta + ht)? - e(rho, theta - ht)?) / (2.0 * ht);
    let res_theta = theta * (theta * ds_t - de_t).abs();

    Ok(res_rho.max(res_theta) / e0)
}

/// Central-difference Hessian of `𝒮(ρ, m, E)`, step `h · max(|x_i|, 1)`.
pub fn entropy_hessian(model: &GasModel, c: &ConservativeState, h: f64) -> Result<Matrix3<f64>> {
    let x = [c.rho, c.m, c.energy];
    let steps: Vec<f64> = x.iter().map(|v| h * v.abs().max(1.0)).collect();
    let eval = |d: [f64; 3]| -> Result<f64> {
        let s = model.total_entropy(&ConservativeState::new(x[0] + d[0], x[1] + d[1], x[2] + d[2]))?;
        Ok(match s {
            ExtReal::Finite(v) => v,
            ExtReal::NegInfinity => f64::NEG_INFINITY,
            ExtReal::PosInfinity => f64::INFINITY,
        })
    };
    let mut hess = Matrix3::zeros();
    let f0 = eval([0.0; 3])?;
    for i in 0..3 {
        let mut d = [0.0; 3];
        d[i] = steps[i];
        let fp = eval(d)?;
        d[i] = -steps[i];
        let fm = eval(d)?;
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (steps[i] * steps[i]);
        for j in (i + 1)..3 {
            let mut acc = 0.0;
            for (si, sj, sign) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
                let mut d = [0.0; 3];
                d[i] = si * steps[i];
                d[j] = sj * steps[j];
                acc += sign * eval(d)?;
            }
            let v = acc / (4.0 * steps[i] * steps[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok(hess)
}

/// Largest eigenvalue of the finite-difference entropy Hessian.
pub fn entropy_hessian_max_eigenvalue(model: &GasModel, c: &ConservativeState, h: f64) -> Result<f64> {
    let hess = entropy_hessian(model, c, h)?;
    let eig = SymmetricEigen::new(hess);
    Ok(eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}
