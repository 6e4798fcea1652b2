//! Constitutive closures: equations of state, entropy, transport
//! coefficients, and the extended-value conventions for the total entropy
//! and kinetic energy.
//!
//! Two gases are provided. [`EosVariant::IdealGas`] is the Boyle–Mariotte
//! gas `p = ρθ`, `e = c_v θ`, `s = c_v log θ − log ρ`. The
//! [`EosVariant::MonatomicDegenerate`] gas has `γ = 5/3` and pressure
//! `p = θ^{5/2} P(ρ/θ^{3/2})` with the closure
//!
//! ```text
//! P(q) = q^{5/3} ( p̄ + ∫_q^∞ (2/3) r^{-5/3} e^{-r} dr )
//! ```
//!
//! for which the specific entropy is `S(q) = E1(q)` and
//! `(5/3 P − P'q)/q = (2/3) e^{-q}`.

pub mod audit;
pub mod special;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use special::{exp_integral_e1, integrate_adaptive, MonotoneCubicTable};

/// Range of `log q` covered by the interpolation cache.
const TABLE_LOG_Q: (f64, f64) = (-12.0, 8.0);
const TABLE_NODES: usize = 2001;

/// Real number extended by the two infinities. Used wherever a
/// lower-semicontinuous (kinetic energy) or upper-semicontinuous (entropy)
/// convention produces an infinite value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
}

/// Pointwise state in physical variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveState {
    pub rho: f64,
    pub theta: f64,
    pub u: f64,
}

impl PrimitiveState {
    pub fn new(rho: f64, theta: f64, u: f64) -> Self {
        Self { rho, theta, u }
    }

    fn check(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.theta.is_finite() && self.u.is_finite()) {
            return domain(format!("non-finite primitive state {self:?}"));
        }
        if self.rho < 0.0 || self.theta <= 0.0 {
            return domain(format!("primitive state outside ρ ≥ 0, θ > 0: {self:?}"));
        }
        Ok(())
    }
}

/// Pointwise state in conservative variables `(ρ, m, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservativeState {
    pub rho: f64,
    pub m: f64,
    pub energy: f64,
}

impl ConservativeState {
    pub fn new(rho: f64, m: f64, energy: f64) -> Self {
        Self { rho, m, energy }
    }

    pub fn velocity(&self) -> f64 {
        if self.rho > 0.0 {
            self.m / self.rho
        } else {
            0.0
        }
    }

    /// `E − ½ m²/ρ`, or an error for the rejected vacuum state `(0, m ≠ 0)`.
    pub fn internal_energy_density(&self) -> Result<f64> {
        match kinetic_energy(self.rho, self.m) {
            ExtReal::Finite(k) => Ok(self.energy - k),
            _ => Err(Error::RejectedState(format!(
                "vacuum with nonzero momentum: {self:?}"
            ))),
        }
    }
}

/// `½ m²/ρ` with the convex lower-semicontinuous extension to `ρ = 0`.
pub fn kinetic_energy(rho: f64, m: f64) -> ExtReal {
    if m == 0.0 {
        ExtReal::Finite(0.0)
    } else if rho <= 0.0 {
        ExtReal::PosInfinity
    } else {
        ExtReal::Finite(0.5 * m * m / rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EosVariant {
    IdealGas { c_v: f64 },
    MonatomicDegenerate { p_bar: f64, quadrature_tol: f64 },
}

/// Transport coefficients at a given temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transport {
    pub mu: f64,
    pub eta: f64,
    pub kappa: f64,
}

/// Constitutive closure: equation of state plus transport coefficients.
///
/// Immutable after construction; the interpolation cache of the degenerate
/// gas is built eagerly and shared behind an `Arc`, so clones are cheap.
#[derive(Debug, Clone)]
pub struct GasModel {
    variant: EosVariant,
    gamma: f64,
    c_v: f64,
    mu_lower: f64,
    eta_bar: f64,
    kappa_lower: f64,
    phi_table: Option<Arc<MonotoneCubicTable>>,
}

impl GasModel {
    pub fn ideal_gas(c_v: f64) -> Result<Self> {
        if !(c_v > 0.0 && c_v.is_finite()) {
            return domain(format!("c_v must be positive, got {c_v}"));
        }
        Ok(Self {
            variant: EosVariant::IdealGas { c_v },
            gamma: 1.0 + 1.0 / c_v,
            c_v,
            mu_lower: 1.0,
            eta_bar: 0.0,
            kappa_lower: 1.0,
            phi_table: None,
        })
    }

    pub fn monatomic_degenerate(p_bar: f64, quadrature_tol: f64) -> Result<Self> {
        if !(p_bar > 0.0 && p_bar.is_finite()) {
            return domain(format!("p_bar must be positive, got {p_bar}"));
        }
        if !(quadrature_tol > 0.0 && quadrature_tol < 1e-3) {
            return domain(format!("quadrature_tol out of range: {quadrature_tol}"));
        }
        let mut model = Self {
            variant: EosVariant::MonatomicDegenerate { p_bar, quadrature_tol },
            gamma: 5.0 / 3.0,
            c_v: 1.5,
            mu_lower: 1.0,
            eta_bar: 0.0,
            kappa_lower: 1.0,
            phi_table: None,
        };
        let table = MonotoneCubicTable::build(TABLE_LOG_Q.0, TABLE_LOG_Q.1, TABLE_NODES, |y| {
            let q = y.exp();
            let phi = model.phi_exact(q);
            (phi.ln(), (2.0 / 3.0) * (1.0 - (-q).exp() / phi))
        });
        model.phi_table = Some(Arc::new(table));
        Ok(model)
    }

    pub fn with_transport(mut self, mu_lower: f64, eta_bar: f64, kappa_lower: f64) -> Result<Self> {
        if !(mu_lower > 0.0 && kappa_lower > 0.0 && eta_bar >= 0.0) {
            return domain("transport constants need μ̲ > 0, κ̲ > 0, η̄ ≥ 0");
        }
        self.mu_lower = mu_lower;
        self.eta_bar = eta_bar;
        self.kappa_lower = kappa_lower;
        Ok(self)
    }

    pub fn variant(&self) -> EosVariant {
        self.variant
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c_v(&self) -> f64 {
        self.c_v
    }

    /// Degenerate-pressure constant; zero for the ideal gas.
    pub fn p_bar(&self) -> f64 {
        match self.variant {
            EosVariant::IdealGas { .. } => 0.0,
            EosVariant::MonatomicDegenerate { p_bar, .. } => p_bar,
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self.variant, EosVariant::IdealGas { .. })
    }

    pub fn mu_lower(&self) -> f64 {
        self.mu_lower
    }

    pub fn eta_bar(&self) -> f64 {
        self.eta_bar
    }

    pub fn kappa_lower(&self) -> f64 {
        self.kappa_lower
    }

    /// Upper conductivity constant of the growth bound; equal to κ̲ for the
    /// closure `κ = κ̲(1 + θ³)`.
    pub fn kappa_upper(&self) -> f64 {
        self.kappa_lower
    }

    fn quadrature_tol(&self) -> f64 {
        match self.variant {
            EosVariant::MonatomicDegenerate { quadrature_tol, .. } => quadrature_tol,
            EosVariant::IdealGas { .. } => 1e-12,
        }
    }

    // --- degenerate gas kernels -------------------------------------------------

    /// `e^{q} ∫_0^U exp(−2u/3 − q e^u) du`, the scaled tail integral behind `P`.
    fn scaled_tail(&self, q: f64) -> f64 {
        let upper = (50.0 / q).ln_1p();
        integrate_adaptive(
            |u: f64| (-2.0 * u / 3.0 - q * u.exp_m1()).exp(),
            0.0,
            upper,
            self.quadrature_tol(),
        )
    }

    /// `Φ(q) = P(q)/q` by direct quadrature.
    fn phi_exact(&self, q: f64) -> f64 {
        if q == 0.0 {
            return 1.0;
        }
        self.p_bar() * q.powf(2.0 / 3.0) + (2.0 / 3.0) * (-q).exp() * self.scaled_tail(q)
    }

    /// `Φ(q)` from the interpolation cache when in range.
    fn phi_fast(&self, q: f64) -> f64 {
        if let Some(table) = &self.phi_table {
            let y = q.ln();
            if table.contains(y) {
                return table.eval(y).0.exp();
            }
        }
        self.phi_exact(q)
    }

    /// `ln I(q)` where `I(q) = P(q)/q^{5/3} − p̄`.
    fn ln_tail(&self, q: f64) -> f64 {
        (2.0f64 / 3.0).ln() - (2.0 / 3.0) * q.ln() - q + self.scaled_tail(q).ln()
    }

    /// Solves `P(q)/q^{5/3} = z` for `q`, with `z > p̄`.
    fn q_from_z(&self, z: f64) -> Result<f64> {
        let target = (z - self.p_bar()).ln();
        if !target.is_finite() {
            return domain(format!("Z = {z} is not above the cold curve"));
        }
        let (mut lo, mut hi) = (-80.0f64, 700.0f64);
        if self.ln_tail(lo.exp()) < target {
            return domain(format!("Z = {z} beyond the representable range"));
        }
        if self.ln_tail(hi.exp()) > target {
            return Ok(hi.exp());
        }
        let mut y = (-1.5 * target).clamp(lo + 1.0, hi - 1.0);
        for _ in 0..200 {
            let q = y.exp();
            let jt = self.scaled_tail(q);
            let g = (2.0f64 / 3.0).ln() - (2.0 / 3.0) * y - q + jt.ln() - target;
            if g > 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            // d ln I / dy = −1/J̃
            let mut next = y + g * jt;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - y).abs() < 1e-15 * y.abs().max(1.0) || hi - lo < 1e-15 {
                y = next;
                break;
            }
            y = next;
        }
        Ok(y.exp())
    }

    // --- public constitutive relations -----------------------------------------

    /// Structure function `P(q)` of the degenerate gas.
    pub fn structure_p(&self, q: f64) -> Result<f64> {
        if !matches!(self.variant, EosVariant::MonatomicDegenerate { .. }) {
            return domain("structure_P is defined for the degenerate gas only");
        }
        if !(q >= 0.0) || !q.is_finite() {
            return domain(format!("q must be finite and ≥ 0, got {q}"));
        }
        Ok(q * self.phi_exact(q))
    }

    /// `P'(q) = (5/3) P/q − (2/3) e^{-q}`.
    pub fn structure_p_derivative(&self, q: f64) -> Result<f64> {
        let p = self.structure_p(q)?;
        if q == 0.0 {
            return Ok(1.0);
        }
        Ok(5.0 / 3.0 * p / q - 2.0 / 3.0 * (-q).exp())
    }

    /// Entropy as a function of `q = ρ/θ^{c_v}`.
    pub fn entropy_of_q(&self, q: f64) -> ExtReal {
        if q <= 0.0 {
            return ExtReal::PosInfinity;
        }
        match self.variant {
            EosVariant::IdealGas { .. } => ExtReal::Finite(-q.ln()),
            EosVariant::MonatomicDegenerate { .. } => ExtReal::Finite(exp_integral_e1(q)),
        }
    }

    pub fn pressure(&self, s: &PrimitiveState) -> Result<f64> {
        s.check()?;
        Ok(self.pressure_raw(s.rho, s.theta, false))
    }

    pub fn internal_energy(&self, s: &PrimitiveState) -> Result<f64> {
        s.check()?;
        if s.rho == 0.0 {
            return domain("specific internal energy undefined at ρ = 0");
        }
        Ok(self.specific_internal_energy_raw(s.rho, s.theta, false))
    }

    /// Specific entropy; `+∞` at vacuum.
    pub fn specific_entropy(&self, s: &PrimitiveState) -> Result<ExtReal> {
        s.check()?;
        if s.rho == 0.0 {
            return Ok(ExtReal::PosInfinity);
        }
        Ok(ExtReal::Finite(self.specific_entropy_raw(s.rho, s.theta)))
    }

    pub(crate) fn pressure_raw(&self, rho: f64, theta: f64, fast: bool) -> f64 {
        match self.variant {
            EosVariant::IdealGas { .. } => rho * theta,
            EosVariant::MonatomicDegenerate { .. } => {
                if rho == 0.0 {
                    return 0.0;
                }
                let q = rho / theta.powf(1.5);
                let phi = if fast { self.phi_fast(q) } else { self.phi_exact(q) };
                rho * theta * phi
            }
        }
    }

    pub(crate) fn specific_internal_energy_raw(&self, rho: f64, theta: f64, fast: bool) -> f64 {
        match self.variant {
            EosVariant::IdealGas { c_v } => c_v * theta,
            EosVariant::MonatomicDegenerate { .. } => {
                let q = rho / theta.powf(1.5);
                let phi = if fast { self.phi_fast(q) } else { self.phi_exact(q) };
                1.5 * theta * phi
            }
        }
    }

    pub(crate) fn specific_entropy_raw(&self, rho: f64, theta: f64) -> f64 {
        match self.variant {
            EosVariant::IdealGas { c_v } => c_v * theta.ln() - rho.ln(),
            EosVariant::MonatomicDegenerate { .. } => exp_integral_e1(rho / theta.powf(1.5)),
        }
    }

    /// `∂e/∂θ` at fixed ρ (positive by thermodynamic stability).
    pub(crate) fn heat_capacity_raw(&self, rho: f64, theta: f64) -> f64 {
        match self.variant {
            EosVariant::IdealGas { c_v } => c_v,
            EosVariant::MonatomicDegenerate { .. } => 1.5 * (-(rho / theta.powf(1.5))).exp(),
        }
    }

    /// Closed-form `(∂e/∂ρ, ∂s/∂ρ)` at fixed θ.
    pub(crate) fn density_partials(&self, rho: f64, theta: f64) -> (f64, f64) {
        match self.variant {
            EosVariant::IdealGas { .. } => (0.0, -1.0 / rho),
            EosVariant::MonatomicDegenerate { .. } => {
                let q = rho / theta.powf(1.5);
                let eq = (-q).exp();
                (theta * (self.phi_exact(q) - eq) / rho, -eq / rho)
            }
        }
    }

    /// Limit of `ρe` as `θ → 0` at fixed ρ.
    pub fn cold_internal_energy_density(&self, rho: f64) -> f64 {
        self.p_bar() / (self.gamma - 1.0) * rho.powf(self.gamma)
    }

    /// Total entropy `𝒮(ρ, m, E) = ρ S(Z)`, `Z = (γ−1)(E − ½m²/ρ)/ρ^γ`, with
    /// the upper-semicontinuous extension: `−∞` below the cold curve and `0`
    /// at vacuum.
    pub fn total_entropy(&self, c: &ConservativeState) -> Result<ExtReal> {
        if !(c.rho.is_finite() && c.m.is_finite() && c.energy.is_finite()) {
            return domain(format!("non-finite conservative state {c:?}"));
        }
        if c.rho < 0.0 {
            return domain(format!("negative density {c:?}"));
        }
        if c.rho == 0.0 {
            if c.m != 0.0 {
                return Err(Error::RejectedState(format!(
                    "vacuum with nonzero momentum: {c:?}"
                )));
            }
            return Ok(ExtReal::Finite(0.0));
        }
        let e_int = c.internal_energy_density()?;
        let z = (self.gamma - 1.0) * e_int / c.rho.powf(self.gamma);
        match self.variant {
            EosVariant::IdealGas { c_v } => {
                if z <= 0.0 {
                    return Ok(ExtReal::NegInfinity);
                }
                // s = c_v ln Z for the Boyle–Mariotte gas
                Ok(ExtReal::Finite(c.rho * c_v * z.ln()))
            }
            EosVariant::MonatomicDegenerate { p_bar, .. } => {
                if z < p_bar {
                    return Ok(ExtReal::NegInfinity);
                }
                if z == p_bar {
                    return Ok(ExtReal::Finite(0.0));
                }
                let q = self.q_from_z(z)?;
                Ok(ExtReal::Finite(c.rho * exp_integral_e1(q)))
            }
        }
    }

    /// Entropy in the conservative parametrization `s = S(Z)`, `Z = p/ρ^γ`.
    pub fn entropy_of_z(&self, z: f64) -> Result<ExtReal> {
        match self.variant {
            EosVariant::IdealGas { c_v } => {
                if z <= 0.0 {
                    Ok(ExtReal::NegInfinity)
                } else {
                    Ok(ExtReal::Finite(c_v * z.ln()))
                }
            }
            EosVariant::MonatomicDegenerate { p_bar, .. } => {
                if z < p_bar {
                    Ok(ExtReal::NegInfinity)
                } else if z == p_bar {
                    Ok(ExtReal::Finite(0.0))
                } else {
                    Ok(ExtReal::Finite(exp_integral_e1(self.q_from_z(z)?)))
                }
            }
        }
    }

    pub fn primitive_to_conservative(&self, s: &PrimitiveState) -> Result<ConservativeState> {
        self.primitive_to_conservative_with_radiation(s, 0.0)
    }

    /// Conservative state whose energy includes the radiation part `a θ⁴`.
    pub fn primitive_to_conservative_with_radiation(
        &self,
        s: &PrimitiveState,
        a_rad: f64,
    ) -> Result<ConservativeState> {
        s.check()?;
        let e_int = if s.rho > 0.0 {
            s.rho * self.specific_internal_energy_raw(s.rho, s.theta, false)
        } else {
            0.0
        };
        Ok(ConservativeState {
            rho: s.rho,
            m: s.rho * s.u,
            energy: 0.5 * s.rho * s.u * s.u + e_int + a_rad * s.theta.powi(4),
        })
    }

    /// Recovers θ from `ρ e(ρ, θ) + a θ⁴ = E − ½ m²/ρ`.
    pub fn temperature_from_conservative(&self, c: &ConservativeState, a_rad: f64) -> Result<f64> {
        if !(c.rho > 0.0) {
            return Err(Error::InversionFailure(format!("no temperature at ρ = {}", c.rho)));
        }
        let e_int = c.internal_energy_density()?;
        self.invert_temperature(c.rho, e_int, a_rad, None, false)
    }

    /// Bracketed bisection with safeguarded Newton, relative tolerance 1e-12.
    pub(crate) fn invert_temperature(
        &self,
        rho: f64,
        e_int: f64,
        a_rad: f64,
        guess: Option<f64>,
        fast: bool,
    ) -> Result<f64> {
        let floor = self.cold_internal_energy_density(rho);
        if !(e_int > floor) || !e_int.is_finite() {
            return Err(Error::InversionFailure(format!(
                "internal energy {e_int} not above the cold limit {floor} at ρ = {rho}"
            )));
        }
        let f = |theta: f64| {
            rho * self.specific_internal_energy_raw(rho, theta, fast) + a_rad * theta.powi(4) - e_int
        };
        let df = |theta: f64| rho * self.heat_capacity_raw(rho, theta) + 4.0 * a_rad * theta.powi(3);

        let start = guess.filter(|g| *g > 0.0 && g.is_finite()).unwrap_or(1.0);
        let (mut lo, mut hi) = (start, start);
        let mut doublings = 0;
        while f(hi) < 0.0 {
            hi *= 2.0;
            doublings += 1;
            if doublings > 200 {
                return Err(Error::InversionFailure(format!(
                    "no upper bracket for ρ = {rho}, E_int = {e_int}"
                )));
            }
        }
        let mut halvings = 0;
        while f(lo) > 0.0 {
            lo *= 0.5;
            halvings += 1;
            if halvings > 200 {
                return Err(Error::InversionFailure(format!(
                    "no lower bracket for ρ = {rho}, E_int = {e_int}"
                )));
            }
        }
        if lo == hi {
            return Ok(lo);
        }
        let mut theta = if guess.is_some() { start.clamp(lo, hi) } else { 0.5 * (lo + hi) };
        for _ in 0..200 {
            let value = f(theta);
            if value == 0.0 {
                return Ok(theta);
            }
            if value > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let mut next = theta - value / df(theta);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let converged = (next - theta).abs() <= 1e-14 * theta || (hi - lo) <= 1e-14 * hi;
            theta = next;
            if converged {
                return Ok(theta);
            }
        }
        Ok(theta)
    }

    /// Transport closures `μ = μ̲(1+θ)`, `η = 0`, `κ = κ̲(1+θ³)`.
    pub fn transport(&self, theta: f64) -> Result<Transport> {
        if !(theta >= 0.0) || !theta.is_finite() {
            return domain(format!("temperature must be finite and ≥ 0, got {theta}"));
        }
        Ok(self.transport_raw(theta))
    }

    pub(crate) fn transport_raw(&self, theta: f64) -> Transport {
        Transport {
            mu: self.mu_lower * (1.0 + theta),
            eta: 0.0,
            kappa: self.kappa_lower * (1.0 + theta * theta * theta),
        }
    }

    /// Whether the state lies in the support required for finite entropy
    /// integrals: `E − ½m²/ρ ≥ p̄/(γ−1) ρ^γ`.
    pub fn satisfies_support(&self, c: &ConservativeState) -> bool {
        if c.rho < 0.0 || c.energy < 0.0 {
            return false;
        }
        match c.internal_energy_density() {
            Ok(e_int) => e_int >= self.cold_internal_energy_density(c.rho),
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degenerate() -> GasModel {
        GasModel::monatomic_degenerate(1.0, 1e-10).unwrap()
    }

    #[test]
    fn ideal_gas_pressure_and_energy() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        assert_eq!(m.pressure(&PrimitiveState::new(2.0, 3.0, 0.0)).unwrap(), 6.0);
        assert_eq!(m.internal_energy(&PrimitiveState::new(1.0, 2.0, 0.0)).unwrap(), 3.0);
        let s = m.specific_entropy(&PrimitiveState::new(1.0, 1.0, 0.0)).unwrap();
        assert_eq!(s, ExtReal::Finite(0.0));
        assert!((m.gamma() - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn non_finite_input_is_a_domain_error() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        assert!(m.pressure(&PrimitiveState::new(f64::NAN, 1.0, 0.0)).is_err());
        assert!(degenerate().structure_p(-1.0).is_err());
        assert!(m.transport(-0.1).is_err());
    }

    #[test]
    fn vacuum_conventions() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        assert_eq!(kinetic_energy(0.0, 0.0), ExtReal::Finite(0.0));
        assert_eq!(kinetic_energy(0.0, 1.0), ExtReal::PosInfinity);
        assert_eq!(
            m.total_entropy(&ConservativeState::new(0.0, 0.0, 0.0)).unwrap(),
            ExtReal::Finite(0.0)
        );
        assert!(matches!(
            m.total_entropy(&ConservativeState::new(0.0, 1.0, 1.0)),
            Err(Error::RejectedState(_))
        ));
        let s = m.specific_entropy(&PrimitiveState::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(s, ExtReal::PosInfinity);
    }

    #[test]
    fn ideal_total_entropy_reference_value() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        let s = m.total_entropy(&ConservativeState::new(1.0, 0.0, 1.5)).unwrap();
        assert!(s.finite().unwrap().abs() < 1e-15);
    }

    #[test]
    fn degenerate_below_cold_curve_is_negative_infinity() {
        let m = degenerate();
        // cold energy density (3/2) p̄ ρ^{5/3} = 1.5 at ρ = 1
        let c = ConservativeState::new(1.0, 0.0, 1.4);
        assert_eq!(m.total_entropy(&c).unwrap(), ExtReal::NegInfinity);
        assert!(!m.satisfies_support(&c));
        assert!(m.satisfies_support(&ConservativeState::new(1.0, 0.0, 1.6)));
    }

    #[test]
    fn temperature_inversion_examples() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        let t = m.temperature_from_conservative(&ConservativeState::new(1.0, 0.0, 3.0), 0.0).unwrap();
        assert!((t - 2.0).abs() < 1e-12);
        let t = m.temperature_from_conservative(&ConservativeState::new(1.0, 0.0, 2.5), 1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transport_examples() {
        let m = GasModel::ideal_gas(1.5).unwrap();
        assert_eq!(m.transport(0.0).unwrap().mu, 1.0);
        assert_eq!(m.transport(1.0).unwrap().kappa, 2.0);
        for theta in [0.0, 0.5, 1.0, 10.0] {
            let k = m.transport(theta).unwrap().kappa;
            let bound = 1.0 + theta * theta * theta;
            assert!(m.kappa_lower() * bound <= k && k <= m.kappa_upper() * bound);
        }
    }

    #[test]
    fn fast_and_exact_phi_agree() {
        let m = degenerate();
        for k in 0..200 {
            let y = -11.9 + 0.0997 * k as f64;
            let q = y.exp();
            let rel = (m.phi_fast(q) / m.phi_exact(q) - 1.0).abs();
            assert!(rel < 1e-9, "y = {y}: {rel}");
        }
    }

    #[test]
    fn q_from_z_inverts_structure_function() {
        let m = degenerate();
        // beyond q ≈ 30, Z − p̄ drops below the resolution of Z itself
        for q in [1e-6, 0.01, 0.5, 1.0, 7.0] {
            let z = m.structure_p(q).unwrap() / q.powf(5.0 / 3.0);
            let back = m.q_from_z(z).unwrap();
            assert!((back / q - 1.0).abs() < 1e-10, "q = {q}, back = {back}");
        }
    }
}
