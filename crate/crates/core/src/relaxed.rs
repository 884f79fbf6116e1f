//! The relaxed limit in its parabolic-hyperbolic form
//!
//! ```text
//! xi_t  = (gamma p / (a rho)) Lap xi + (p / (a rho)) grad xi . grad phi
//! phi_t = (1 / (a rho)) grad xi . grad phi
//! ```
//!
//! stepped with a second-order integrating-factor scheme: the frozen
//! diffusion `D_bar Lap` (with `D_bar` the grid maximum of `gamma p/(a rho)`)
//! is propagated exactly in Fourier space and the remainder is treated
//! explicitly with a midpoint correction.

use crate::error::{Error, Result};
use crate::params::{density_field, GasConstants};
use crate::relaxing::{check_guards, substeps, Sampling};
use crate::spectral::{dot, SpectralField, TorusGrid, VectorField};

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedState {
    pub t: f64,
    pub xi: SpectralField,
    pub phi: SpectralField,
}

impl RelaxedState {
    pub fn equilibrium(grid: &TorusGrid) -> Self {
        RelaxedState {
            t: 0.0,
            xi: SpectralField::zeros(grid),
            phi: SpectralField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        self.xi.grid()
    }

    pub fn density(&self, c: &GasConstants) -> SpectralField {
        density_field(&self.xi, &self.phi, c)
    }

    pub fn zeta(&self, c: &GasConstants) -> SpectralField {
        self.density(c).map(|r| r - c.rho_bar)
    }

    pub fn check_guards(&self, c: &GasConstants) -> Result<()> {
        check_guards(self.t, &self.xi, &self.phi, c)
    }
}

/// `(xi_t, phi_t)` of the relaxed system.
pub fn relaxed_rhs(s: &RelaxedState, c: &GasConstants) -> Result<(SpectralField, SpectralField)> {
    s.check_guards(c)?;
    Ok(rhs_unchecked(s, c))
}

fn rhs_unchecked(s: &RelaxedState, c: &GasConstants) -> (SpectralField, SpectralField) {
    let rho = s.density(c);
    let p = s.xi.map(|x| x + c.p_bar);
    let coupling = dot(&s.xi.gradient(), &s.phi.gradient());
    let diffusivity = p.zip_map(&rho, |p, r| c.gamma * p / (c.a_const * r));
    let mut xi_t = diffusivity.mul_dealiased(&s.xi.laplacian());
    let drift = p.zip_map(&rho, |p, r| p / (c.a_const * r));
    xi_t.axpy(1.0, &drift.mul_dealiased(&coupling));
    let phi_t = rho.map(|r| 1.0 / (c.a_const * r)).mul_dealiased(&coupling);
    (xi_t, phi_t)
}

/// Grid maximum of `gamma p / (a rho)`.
pub fn frozen_diffusivity(s: &RelaxedState, c: &GasConstants) -> f64 {
    s.xi
        .values()
        .iter()
        .zip(s.phi.values())
        .map(|(&x, &f)| c.diffusivity(x, f))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `max |(1/(a rho)) grad xi|`, the transport speed of `phi`.
pub fn max_drift(s: &RelaxedState, c: &GasConstants) -> f64 {
    let rho = s.density(c);
    let grad = s.xi.gradient();
    (0..rho.values().len())
        .map(|j| {
            let g2: f64 = grad.iter().map(|d| d.values()[j].powi(2)).sum();
            g2.sqrt() / (c.a_const * rho.values()[j])
        })
        .fold(0.0, f64::max)
}

fn remainder(s: &RelaxedState, c: &GasConstants, d_bar: f64) -> (SpectralField, SpectralField) {
    let (mut xi_t, phi_t) = rhs_unchecked(s, c);
    xi_t.axpy(-d_bar, &s.xi.laplacian());
    (xi_t, phi_t)
}

fn step_with(s: &RelaxedState, c: &GasConstants, h: f64) -> Result<RelaxedState> {
    let drift = max_drift(s, c);
    if drift > 0.0 {
        let limit = 0.5 * s.grid().dx() / drift;
        if h > limit {
            return Err(Error::Cfl {
                kind: "relaxed advective",
                dt: h,
                limit,
            });
        }
    }
    let d_bar = frozen_diffusivity(s, c);
    let (n_xi, n_phi) = remainder(s, c, d_bar);

    let mut half_xi = s.xi.clone();
    half_xi.axpy(0.5 * h, &n_xi);
    let mut half_phi = s.phi.clone();
    half_phi.axpy(0.5 * h, &n_phi);
    let mid = RelaxedState {
        t: s.t + 0.5 * h,
        xi: half_xi.heat_propagate(d_bar, 0.5 * h),
        phi: half_phi,
    };
    check_guards(mid.t, &mid.xi, &mid.phi, c)?;
    let (m_xi, m_phi) = remainder(&mid, c, d_bar);

    let mut xi = s.xi.heat_propagate(d_bar, h);
    xi.axpy(h, &m_xi.heat_propagate(d_bar, 0.5 * h));
    let mut phi = s.phi.clone();
    phi.axpy(h, &m_phi);
    let out = RelaxedState { t: s.t + h, xi, phi };
    out.check_guards(c)?;
    Ok(out)
}

pub fn step_relaxed(s: &RelaxedState, c: &GasConstants, dt: f64) -> Result<RelaxedState> {
    if !(dt > 0.0) {
        return Err(Error::param("dt", format!("{dt} must be > 0")));
    }
    step_with(s, c, dt).map_err(|e| e.at_time(s.t))
}

/// Limit velocity `v = -grad xi / (k1 rho)`, evaluated pointwise.
pub fn limit_velocity(s: &RelaxedState, c: &GasConstants) -> VectorField {
    let rho = s.density(c);
    s.xi
        .gradient()
        .iter()
        .map(|d| d.zip_map(&rho, |g, r| -g / (c.k1 * r)))
        .collect()
}

pub type RelaxedObserver<'a> = dyn FnMut(&RelaxedState) + 'a;

pub fn evolve_relaxed(
    state0: &RelaxedState,
    c: &GasConstants,
    dt: f64,
    t_end: f64,
    sampling: Sampling,
    observers: &mut [&mut RelaxedObserver<'_>],
) -> Result<RelaxedState> {
    if t_end < state0.t {
        return Err(Error::param("t_end", format!("{t_end} < start time {}", state0.t)));
    }
    if !(dt > 0.0) {
        return Err(Error::param("dt", format!("{dt} must be > 0")));
    }
    let mut s = state0.clone();
    for t_sample in sampling.times(state0.t, t_end) {
        let span = t_sample - s.t;
        let m = substeps(span, dt);
        let h = span / m as f64;
        for i in 0..m {
            let t_prev = s.t;
            s = step_with(&s, c, h).map_err(|e| e.at_time(t_prev))?;
            if i + 1 == m {
                s.t = t_sample;
            }
        }
        for obs in observers.iter_mut() {
            obs(&s);
        }
    }
    Ok(s)
}
