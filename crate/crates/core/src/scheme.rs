// Pieces shared by the two finite-volume solvers.

use crate::error::{Error, Result};
use crate::thermodynamics::GasModel;

/// Smallest admissible unclipped time step.
pub(crate) const DT_FLOOR: f64 = 1e-12;

/// θ from the internal energy density `ρe + aθ⁴`, with a direct path for
/// the ideal gas without radiation.
pub(crate) fn recover_theta(model: &GasModel, rho: f64, e_int: f64, a_rad: f64, guess: f64) -> Result<f64> {
    if model.is_ideal() && a_rad == 0.0 {
        let theta = e_int / (rho * model.c_v());
        if theta > 0.0 && theta.is_finite() {
            return Ok(theta);
        }
        return Err(Error::InversionFailure(format!("internal energy {e_int} at ρ = {rho}")));
    }
    model.invert_temperature(rho, e_int, a_rad, Some(guess), true)
}

/// The ordered list of output times: the start, every requested time in
/// `(t0, t_end]`, and `t_end` itself.
pub(crate) fn output_times(t0: f64, t_end: f64, requested: &[f64]) -> Result<Vec<f64>> {
    if !(t_end > t0) {
        return Err(Error::Config(format!("t_end = {t_end} must exceed the start time {t0}")));
    }
    if requested.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("snapshot times must be strictly increasing".into()));
    }
    let mut times = vec![t0];
    times.extend(requested.iter().copied().filter(|&t| t > t0 && t < t_end));
    times.push(t_end);
    Ok(times)
}

/// Time step towards `target`: clipped so that outputs land exactly on it.
/// Returns `(dt, clipped)`.
pub(crate) fn clip_step(t: f64, dt: f64, target: f64) -> (f64, bool) {
    if t + dt >= target || target - (t + dt) < 1e-3 * dt {
        (target - t, true)
    } else {
        (dt, false)
    }
}

/// `Z_M(s) = M(1 − e^{−s/M})` and its first two derivatives.
pub fn z_m(s: f64, cap: f64) -> (f64, f64, f64) {
    let x = -s / cap;
    let e = x.exp();
    (-cap * x.exp_m1(), e, -e / cap)
}
