//! Relative energy between two fluid states, evaluated in primitive
//! variables through the ballistic free energy `H_θ̃ = ρ(e − θ̃ s)` and in
//! conservative variables as a Bregman divergence of the total entropy.
//! The two forms agree identically; each is the other's check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::thermodynamics::{ConservativeState, ExtReal, GasModel, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelativeEnergyForm {
    Primitive,
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelativeEnergyValue {
    pub value: ExtReal,
    pub form: RelativeEnergyForm,
}

/// How the entropy gradient at the reference state is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    /// `∂_E 𝒮 = 1/θ`, `∂_m 𝒮 = −u/θ`, `∂_ρ 𝒮 = s − (e + p/ρ − u²/2)/θ`.
    ClosedForm,
    /// Central differences of `𝒮` (audit only).
    FiniteDifference,
}

fn ballistic(model: &GasModel, rho: f64, theta: f64, theta_ref: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let e = model.specific_internal_energy_raw(rho, theta, false);
    let s = model.specific_entropy_raw(rho, theta);
    rho * (e - theta_ref * s)
}

/// `ℰ(ρ, θ, u | ρ̃, θ̃, ũ)` in primitive variables.
pub fn relative_energy_primitive(
    model: &GasModel,
    s: &PrimitiveState,
    reference: &PrimitiveState,
) -> Result<RelativeEnergyValue> {
    // validates both states
    model.pressure(s)?;
    model.pressure(reference)?;
    if reference.rho <= 0.0 {
        return domain("vacuum reference state");
    }
    let (rr, tr) = (reference.rho, reference.theta);
    let e_r = model.specific_internal_energy_raw(rr, tr, false);
    let s_r = model.specific_entropy_raw(rr, tr);
    let (de_drho, ds_drho) = model.density_partials(rr, tr);
    let dh_drho = e_r + rr * de_drho - tr * (s_r + rr * ds_drho);

    let du = s.u - reference.u;
    let value = 0.5 * s.rho * du * du + ballistic(model, s.rho, s.theta, tr)
        - dh_drho * (s.rho - rr)
        - ballistic(model, rr, tr, tr);
    Ok(RelativeEnergyValue { value: ExtReal::Finite(value), form: RelativeEnergyForm::Primitive })
}

/// Gradient of the total entropy at an interior state.
pub fn entropy_gradient(model: &GasModel, c: &ConservativeState, mode: GradientMode) -> Result<[f64; 3]> {
    match mode {
        GradientMode::ClosedForm => {
            let theta = model.temperature_from_conservative(c, 0.0)?;
            let u = c.velocity();
            let e = model.specific_internal_energy_raw(c.rho, theta, false);
            let p = model.pressure_raw(c.rho, theta, false);
            let s = model.specific_entropy_raw(c.rho, theta);
            Ok([s - (e + p / c.rho - 0.5 * u * u) / theta, -u / theta, 1.0 / theta])
        }
        GradientMode::FiniteDifference => {
            let x = [c.rho, c.m, c.energy];
            let mut grad = [0.0; 3];
            for i in 0..3 {
                let h = 1e-6 * x[i].abs().max(1.0);
                let mut xp = x;
                let mut xm = x;
                xp[i] += h;
                xm[i] -= h;
                let fp = model.total_entropy(&ConservativeState::new(xp[0], xp[1], xp[2]))?;
                let fm = model.total_entropy(&ConservativeState::new(xm[0], xm[1], xm[2]))?;
                match (fp, fm) {
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => grad[i] = (a - b) / (2.0 * h),
                    _ => return domain("finite-difference stencil leaves the entropy domain"),
                }
            }
            Ok(grad)
        }
    }
}

/// `ℰ(ρ, m, E | ρ̃, m̃, Ẽ) = −θ̃ [𝒮(U) − ∇𝒮(Ũ)·(U − Ũ) − 𝒮(Ũ)]`.
///
/// States with `𝒮 = −∞` map to `+∞`.
pub fn relative_energy_conservative(
    model: &GasModel,
    c: &ConservativeState,
    reference: &ConservativeState,
) -> Result<RelativeEnergyValue> {
    relative_energy_conservative_with(model, c, reference, GradientMode::ClosedForm)
}

pub fn relative_energy_conservative_with(
    model: &GasModel,
    c: &ConservativeState,
    reference: &ConservativeState,
    mode: GradientMode,
) -> Result<RelativeEnergyValue> {
    if reference.rho <= 0.0 {
        return domain("vacuum reference state");
    }
    let s_ref = match model.total_entropy(reference)? {
        ExtReal::Finite(v) => v,
        _ => return domain("reference state outside the entropy domain"),
    };
    let out = |value| Ok(RelativeEnergyValue { value, form: RelativeEnergyForm::Conservative });
    let s = match model.total_entropy(c)? {
        ExtReal::Finite(v) => v,
        ExtReal::NegInfinity => return out(ExtReal::PosInfinity),
        ExtReal::PosInfinity => return domain("unexpected +∞ total entropy"),
    };
    let theta_ref = model.temperature_from_conservative(reference, 0.0)?;
    let g = entropy_gradient(model, reference, mode)?;
    let bracket = s
        - g[0] * (c.rho - reference.rho)
        - g[1] * (c.m - reference.m)
        - g[2] * (c.energy - reference.energy)
        - s_ref;
    out(ExtReal::Finite(-theta_ref * bracket))
}

/// Seeded random interior primitive state pairs, `ρ, θ ∈ [0.5, 2]`, `u ∈ [−1, 1]`.
pub fn sample_state_pairs(seed: u64, count: usize) -> Vec<(PrimitiveState, PrimitiveState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        PrimitiveState::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0))
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

/// One row of the identity audit.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityAuditRow {
    pub index: usize,
    pub primitive: f64,
    pub conservative: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

/// Evaluates both forms on each pair and records the discrepancy.
pub fn identity_audit(
    model: &GasModel,
    pairs: &[(PrimitiveState, PrimitiveState)],
) -> Result<Vec<IdentityAuditRow>> {
    pairs
        .iter()
        .enumerate()
        .map(|(index, (s, r))| {
            let prim = relative_energy_primitive(model, s, r)?.value.finite().unwrap_or(f64::INFINITY);
            let cs = model.primitive_to_conservative(s)?;
            let cr = model.primitive_to_conservative(r)?;
            let cons = relative_energy_conservative(model, &cs, &cr)?
                .value
                .finite()
                .unwrap_or(f64::INFINITY);
            let abs_diff = (prim - cons).abs();
            Ok(IdentityAuditRow {
                index,
                primitive: prim,
                conservative: cons,
                abs_diff,
                rel_diff: abs_diff / prim.abs().max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_states_give_zero() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        let s = PrimitiveState::new(1.3, 0.7, 0.2);
        let v = relative_energy_primitive(&m, &s, &s).unwrap().value.finite().unwrap();
        assert!(v.abs() < 1e-14);
        let c = m.primitive_to_conservative(&s).unwrap();
        let v = relative_energy_conservative(&m, &c, &c).unwrap().value.finite().unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn velocity_only_perturbation_is_kinetic() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        let delta = 0.37;
        let v = relative_energy_primitive(
            &m,
            &PrimitiveState::new(1.0, 1.0, delta),
            &PrimitiveState::new(1.0, 1.0, 0.0),
        )
        .unwrap();
        assert!((v.value.finite().unwrap() - 0.5 * delta * delta).abs() < 1e-15);
    }

    #[test]
    fn hand_evaluated_ideal_gas_value() {
        // c_v = 3/2, s = (ρ, θ, u) = (1.2, 0.9, 0.3), ref = (1, 1, 0):
        // ½·1.2·0.09 + 1.2(1.35 − (1.5 ln 0.9 − ln 1.2)) − (1.5 + 1)(0.2) − 1.5
        let expected = 0.054
            + 1.2 * (1.35 - (1.5 * 0.9f64.ln() - 1.2f64.ln()))
            - 2.5 * 0.2
            - 1.5;
        let m = GasModel::ideal_gas(1.5).unwrap();
        let v = relative_energy_primitive(
            &m,
            &PrimitiveState::new(1.2, 0.9, 0.3),
            &PrimitiveState::new(1.0, 1.0, 0.0),
        )
        .unwrap()
        .value
        .finite()
        .unwrap();
        assert!(expected > 0.0);
        assert!((v - expected).abs() < 1e-14, "{v} vs {expected}");
    }

    #[test]
    fn closed_form_gradient_matches_finite_differences() {
        for m in [GasModel::ideal_gas(1.5).unwrap(), GasModel::monatomic_degenerate(1.0, 1e-10).unwrap()] {
            let c = m.primitive_to_conservative(&PrimitiveState::new(1.1, 0.8, -0.4)).unwrap();
            let a = entropy_gradient(&m, &c, GradientMode::ClosedForm).unwrap();
            let b = entropy_gradient(&m, &c, GradientMode::FiniteDifference).unwrap();
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-7 * a[i].abs().max(1.0), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn states_below_cold_curve_map_to_infinity() {
        let m = GasModel::monatomic_degenerate(1.0, 1e-10).unwrap();
        let reference = m.primitive_to_conservative(&PrimitiveState::new(1.0, 1.0, 0.0)).unwrap();
        let v = relative_energy_conservative(&m, &ConservativeState::new(1.0, 0.0, 1.0), &reference).unwrap();
        assert_eq!(v.value, ExtReal::PosInfinity);
    }
}
