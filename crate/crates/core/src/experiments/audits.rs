//! Thermodynamic and relative-energy audits over fixed sample sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::relative_energy::{identity_audit, sample_state_pairs};
use crate::thermodynamics::audit::{
    check_concavity_condition, check_stability, entropy_hessian_max_eigenvalue, gibbs_residual, FD_REL_STEP,
};
use crate::thermodynamics::{ConservativeState, ExtReal, GasModel, PrimitiveState};

/// Seed shared by every random sample set of the audits.
pub const AUDIT_SEED: u64 = 20_240_601;

/// Relative step of the entropy Hessian. Near the cold curve the degenerate
/// entropy is steep enough that larger steps leave the domain or let the
/// truncation error flip the sign of the top eigenvalue.
pub const HESSIAN_STEP: f64 = 1e-5;

const RATIO_Q_MAX: f64 = 20.0;

/// `count` points spaced logarithmically on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

/// Random interior conservative states `ρ, θ ∈ [0.5, 2]`, `u ∈ [−1, 1]`.
pub fn sample_states(model: &GasModel, seed: u64, count: usize) -> Result<Vec<ConservativeState>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let s = PrimitiveState::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
            model.primitive_to_conservative(&s)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EosStructure {
    pub p_at_zero: f64,
    /// Smallest finite-difference `P'(q)` on the log grid.
    pub min_p_prime: f64,
    /// Largest `|P'_fd − P'|/P'` between difference quotients and the closed form.
    pub p_prime_mismatch: f64,
    /// Range of `(5/3 P − P' q)/q` on the log grid up to `q = 20`, closed-form `P'`.
    pub structure_ratio: (f64, f64),
    /// `|P(q)/q^{5/3} − p̄|` at `q = 100`.
    pub scaled_p_error_at_100: f64,
    pub entropy_at_100: f64,
    pub entropy_at_1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoAudit {
    pub variant: String,
    /// Max Gibbs residual over a 20×20 log grid of `(ρ, θ) ∈ [0.1, 10]²`.
    pub gibbs_max: f64,
    pub stability_passed: bool,
    /// Smallest `(1−γ)S' − γS''Z` over the `Z` grid.
    pub concavity_min: f64,
    pub concavity_out_of_domain: usize,
    pub concavity_passed: bool,
    /// Largest eigenvalue of the entropy Hessian over the random states.
    pub hessian_max_eigenvalue: f64,
    pub eos: Option<EosStructure>,
}

impl ThermoAudit {
    /// Gibbs tolerance: the degenerate gas carries quadrature error.
    pub fn gibbs_tolerance(&self) -> f64 {
        if self.eos.is_none() { 1e-6 } else { 1e-5 }
    }

    pub fn passed(&self) -> bool {
        let eos_ok = self.eos.as_ref().is_none_or(|e| {
            e.p_at_zero == 0.0
                && e.min_p_prime > 0.0
                && e.p_prime_mismatch < 1e-6
                && e.structure_ratio.0 > 0.0
                && e.structure_ratio.1 <= 0.7
                && e.scaled_p_error_at_100 < 1e-6
                && e.entropy_at_100.abs() < 1e-6
                && (e.entropy_at_1 - 0.219_383_934_395_520_3).abs() < 1e-6
        });
        self.gibbs_max < self.gibbs_tolerance()
            && self.stability_passed
            && self.concavity_passed
            && self.hessian_max_eigenvalue <= 1e-6
            && eos_ok
    }
}

fn eos_structure(model: &GasModel) -> Result<EosStructure> {
    let mut min_p_prime = f64::INFINITY;
    let mut mismatch = 0.0f64;
    let mut ratio = (f64::INFINITY, f64::NEG_INFINITY);
    for q in log_grid(1e-3, 1e2, 61) {
        let h = FD_REL_STEP * q;
        let fd = (model.structure_p(q + h)? - model.structure_p(q - h)?) / (2.0 * h);
        let dp = model.structure_p_derivative(q)?;
        min_p_prime = min_p_prime.min(fd);
        mismatch = mismatch.max((fd - dp).abs() / dp);
        // The numerator is (2/3)e^{−q}, lost to cancellation beyond q ≈ 20.
        if q <= RATIO_Q_MAX {
            let r = (5.0 / 3.0 * model.structure_p(q)? - dp * q) / q;
            ratio = (ratio.0.min(r), ratio.1.max(r));
        }
    }
    let finite = |v: ExtReal| v.finite().unwrap_or(f64::NAN);
    Ok(EosStructure {
        p_at_zero: model.structure_p(0.0)?,
        min_p_prime,
        p_prime_mismatch: mismatch,
        structure_ratio: ratio,
        scaled_p_error_at_100: (model.structure_p(100.0)? / 100f64.powf(5.0 / 3.0) - model.p_bar()).abs(),
        entropy_at_100: finite(model.entropy_of_q(100.0)),
        entropy_at_1: finite(model.entropy_of_q(1.0)),
    })
}

pub fn thermo_audit(model: &GasModel) -> Result<ThermoAudit> {
    let grid = log_grid(0.1, 10.0, 20);
    let mut gibbs_max = 0.0f64;
    let mut samples = Vec::with_capacity(grid.len() * grid.len());
    for &rho in &grid {
        for &theta in &grid {
            gibbs_max = gibbs_max.max(gibbs_residual(model, &PrimitiveState::new(rho, theta, 0.0))?);
            samples.push((rho, theta));
        }
    }
    let stability = check_stability(model, &samples)?;
    let z_grid = log_grid(model.p_bar().max(1e-3) * 1.01, 1e3, 60);
    let concavity = check_concavity_condition(model, &z_grid)?;
    let concavity_min = concavity.points.iter().filter_map(|p| p.value).fold(f64::INFINITY, f64::min);
    let mut hessian_max = f64::NEG_INFINITY;
    for c in sample_states(model, AUDIT_SEED, 100)? {
        hessian_max = hessian_max.max(entropy_hessian_max_eigenvalue(model, &c, HESSIAN_STEP)?);
    }
    Ok(ThermoAudit {
        variant: if model.is_ideal() { "ideal_gas" } else { "monatomic_degenerate" }.into(),
        gibbs_max,
        stability_passed: stability.passed,
        concavity_min,
        concavity_out_of_domain: concavity.out_of_domain,
        concavity_passed: concavity.passed,
        hessian_max_eigenvalue: hessian_max,
        eos: if model.is_ideal() { None } else { Some(eos_structure(model)?) },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelengAudit {
    pub pairs: usize,
    pub max_rel_diff: f64,
    pub min_value: f64,
}

impl RelengAudit {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_rel_diff <= tolerance && self.min_value >= 0.0
    }
}

/// Identity tolerance for a model: tight for the ideal gas, looser where
/// the degenerate entropy goes through quadrature.
pub fn releng_tolerance(model: &GasModel) -> f64 {
    if model.is_ideal() { 1e-10 } else { 1e-6 }
}

/// Primitive against conservative relative energy on seeded state pairs.
pub fn releng_audit(model: &GasModel, count: usize) -> Result<RelengAudit> {
    let rows = identity_audit(model, &sample_state_pairs(AUDIT_SEED, count))?;
    Ok(RelengAudit {
        pairs: rows.len(),
        max_rel_diff: rows.iter().map(|r| r.rel_diff).fold(0.0, f64::max),
        min_value: rows.iter().map(|r| r.primitive).fold(f64::INFINITY, f64::min),
    })
}
