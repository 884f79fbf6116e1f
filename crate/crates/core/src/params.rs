//! Gas constants, the ideal-gas equation of state and the fast/slow time rescaling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{SpectralField, VectorField};

/// Background state and derived constants of the perturbation frame.
///
/// `k1 = sqrt(1/(gamma rho_bar p_bar))` scales the velocity (`v = u/k1`) and
/// `k2 = sqrt(gamma p_bar / rho_bar)` is the acoustic constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasConstants {
    pub gamma: f64,
    pub big_a: f64,
    pub p_bar: f64,
    pub s_bar: f64,
    pub rho_bar: f64,
    pub k1: f64,
    pub k2: f64,
    /// Coefficient of the parabolic relaxed form. Matching the relaxed
    /// velocity law `k1 rho v + grad xi = 0` fixes it to 1.
    pub a_const: f64,
}

impl GasConstants {
    pub fn new(gamma: f64, big_a: f64, p_bar: f64, s_bar: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::param("gamma", format!("{gamma} must be > 1")));
        }
        if !(big_a.is_finite() && big_a > 0.0) {
            return Err(Error::param("bigA", format!("{big_a} must be > 0")));
        }
        if !(p_bar.is_finite() && p_bar > 0.0) {
            return Err(Error::param("p_bar", format!("{p_bar} must be > 0")));
        }
        if !s_bar.is_finite() {
            return Err(Error::param("s_bar", "must be finite"));
        }
        let rho_bar = density(gamma, big_a, p_bar, s_bar);
        let k1 = (1.0 / (gamma * rho_bar * p_bar)).sqrt();
        let k2 = (gamma * p_bar / rho_bar).sqrt();
        Ok(GasConstants {
            gamma,
            big_a,
            p_bar,
            s_bar,
            rho_bar,
            k1,
            k2,
            a_const: 1.0,
        })
    }

    /// γ = 1.4, A = 1, p̄ = 1, S̄ = 0.
    pub fn desk_default() -> Self {
        Self::new(1.4, 1.0, 1.0, 0.0).expect("default constants are valid")
    }

    /// Density of the state `(p, S)`; assumes `p > 0`.
    pub fn density(&self, p: f64, s: f64) -> f64 {
        density(self.gamma, self.big_a, p, s)
    }

    /// `gamma p / (a rho)` at the perturbation `(xi, phi)`.
    pub fn diffusivity(&self, xi: f64, phi: f64) -> f64 {
        let p = xi + self.p_bar;
        self.gamma * p / (self.a_const * self.density(p, phi + self.s_bar))
    }
}

fn density(gamma: f64, big_a: f64, p: f64, s: f64) -> f64 {
    big_a.powf(-1.0 / gamma) * p.powf(1.0 / gamma) * (-s / gamma).exp()
}

/// `rho(p, S) = A^{-1/gamma} p^{1/gamma} e^{-S/gamma}`.
pub fn eos_density(p: f64, s: f64, c: &GasConstants) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::param("p", format!("pressure {p} must be > 0")));
    }
    Ok(c.density(p, s))
}

/// Relaxation time, restricted to `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RelaxationParameter(f64);

impl RelaxationParameter {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::param("tau", format!("{tau} not in (0, 1]")));
        }
        Ok(RelaxationParameter(tau))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> f64 {
        self.0 * self.0
    }
}

/// Pointwise density perturbation `zeta = rho(xi + p_bar, phi + S_bar) - rho_bar`.
pub fn zeta_from_eos(xi: &SpectralField, phi: &SpectralField, c: &GasConstants) -> Result<SpectralField> {
    let min_p = xi.min() + c.p_bar;
    if !(min_p > 0.0) {
        return Err(Error::PressureGuard {
            t: f64::NAN,
            min_pressure: min_p,
            required: 0.0,
        });
    }
    Ok(density_field(xi, phi, c).map(|r| r - c.rho_bar))
}

/// Full density field; caller guarantees positivity of `xi + p_bar`.
pub(crate) fn density_field(xi: &SpectralField, phi: &SpectralField, c: &GasConstants) -> SpectralField {
    xi.zip_map(phi, |x, f| c.density(x + c.p_bar, f + c.s_bar))
}

/// Physical variables `(p, u, S)` at one instant of either time scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    pub t: f64,
    pub pressure: SpectralField,
    pub velocity: VectorField,
    pub entropy: SpectralField,
}

/// Fast time `t'` to slow time `t = tau t'`; `u = u_hat / tau`.
pub fn rescale_fast_to_slow(fast: &PhysicalState, tau: RelaxationParameter) -> PhysicalState {
    let tau = tau.value();
    PhysicalState {
        t: tau * fast.t,
        pressure: fast.pressure.clone(),
        velocity: fast.velocity.iter().map(|u| u.scale(1.0 / tau)).collect(),
        entropy: fast.entropy.clone(),
    }
}

/// Inverse of [`rescale_fast_to_slow`].
pub fn rescale_slow_to_fast(slow: &PhysicalState, tau: RelaxationParameter) -> PhysicalState {
    let tau = tau.value();
    PhysicalState {
        t: slow.t / tau,
        pressure: slow.pressure.clone(),
        velocity: slow.velocity.iter().map(|u| u.scale(tau)).collect(),
        entropy: slow.entropy.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TorusGrid;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2, SQRT_2};

    #[test]
    fn constants_examples() {
        let c = GasConstants::new(2.0, 1.0, 1.0, 0.0).unwrap();
        assert!((c.rho_bar - 1.0).abs() < 1e-15);
        assert!((c.k1 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c.k2 - SQRT_2).abs() < 1e-15);
        assert_eq!(c.a_const, 1.0);

        let c = GasConstants::new(2.0, 1.0, 4.0, 0.0).unwrap();
        assert!((c.rho_bar - 2.0).abs() < 1e-15);
        assert!((c.k1 - 0.25).abs() < 1e-15);
        assert!((c.k2 - 2.0).abs() < 1e-15);

        let c = GasConstants::desk_default();
        assert!((c.rho_bar - 1.0).abs() < 1e-15);
        assert!((c.k1 * c.k2 - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn constants_reject_bad_input() {
        assert!(GasConstants::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(GasConstants::new(0.5, 1.0, 1.0, 0.0).is_err());
        assert!(GasConstants::new(1.4, 0.0, 1.0, 0.0).is_err());
        assert!(GasConstants::new(1.4, 1.0, -1.0, 0.0).is_err());
        assert!(GasConstants::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn eos_examples() {
        let c = GasConstants::new(2.0, 1.0, 1.0, 0.0).unwrap();
        assert!((eos_density(1.0, 0.0, &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((eos_density(4.0, 0.0, &c).unwrap() - 2.0).abs() < 1e-15);
        assert!((eos_density(1.0, 2.0 * LN_2, &c).unwrap() - 0.5).abs() < 1e-15);
        assert!(eos_density(0.0, 0.0, &c).is_err());
        assert!(eos_density(-1.0, 0.0, &c).is_err());
    }

    #[test]
    fn eos_monotone_on_grid() {
        let c = GasConstants::desk_default();
        for i in 0..10 {
            for j in 0..10 {
                let p = 0.2 + 0.3 * i as f64;
                let s = -1.0 + 0.25 * j as f64;
                let r = c.density(p, s);
                assert!(c.density(p + 0.1, s) > r);
                assert!(c.density(p, s + 0.1) < r);
            }
        }
    }

    #[test]
    fn tau_range() {
        assert!(RelaxationParameter::new(0.0).is_err());
        assert!(RelaxationParameter::new(1.5).is_err());
        assert!(RelaxationParameter::new(f64::NAN).is_err());
        assert_eq!(RelaxationParameter::new(1.0).unwrap().value(), 1.0);
    }

    #[test]
    fn zeta_examples() {
        let g = TorusGrid::periodic(1, 64).unwrap();
        let c = GasConstants::new(2.0, 1.0, 1.0, 0.0).unwrap();
        let zero = SpectralField::zeros(&g);
        let z = zeta_from_eos(&zero, &zero, &c).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));

        let three = SpectralField::constant(&g, 3.0);
        let z = zeta_from_eos(&three, &zero, &c).unwrap();
        assert!((z.max() - 1.0).abs() < 1e-15 && (z.min() - 1.0).abs() < 1e-15);

        let low = SpectralField::constant(&g, -1.5);
        assert!(matches!(zeta_from_eos(&low, &zero, &c), Err(Error::PressureGuard { .. })));
    }

    #[test]
    fn zeta_matches_linearization() {
        let g = TorusGrid::periodic(1, 128).unwrap();
        let c = GasConstants::desk_default();
        let xi = SpectralField::from_fn(&g, |x| 0.01 * x[0].sin());
        let phi = SpectralField::zeros(&g);
        let z = zeta_from_eos(&xi, &phi, &c).unwrap();
        let lin = xi.scale(c.rho_bar / (c.gamma * c.p_bar));
        assert!((&z - &lin).sup_norm() <= 1e-4);
    }

    #[test]
    fn rescale_examples() {
        let g = TorusGrid::periodic(1, 16).unwrap();
        let fast = PhysicalState {
            t: 2.0,
            pressure: SpectralField::constant(&g, 1.1),
            velocity: vec![SpectralField::constant(&g, 0.3)],
            entropy: SpectralField::constant(&g, 0.2),
        };
        let tau = RelaxationParameter::new(0.5).unwrap();
        let slow = rescale_fast_to_slow(&fast, tau);
        assert_eq!(slow.t, 1.0);
        assert!((slow.velocity[0].values()[3] - 0.6).abs() < 1e-15);
        assert_eq!(slow.pressure, fast.pressure);

        let one = RelaxationParameter::new(1.0).unwrap();
        assert_eq!(rescale_fast_to_slow(&fast, one), fast);

        let back = rescale_slow_to_fast(&slow, tau);
        assert!((back.t - fast.t).abs() <= 1e-15);
        assert!((&back.velocity[0] - &fast.velocity[0]).sup_norm() <= 1e-15);
    }
}
