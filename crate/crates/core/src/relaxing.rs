//! Slow-time integration of the relaxing system in perturbation variables
//! `(xi, v, phi)` with `xi = p - p_bar`, `v = u / k1`, `phi = S - S_bar`.
//!
//! Each step is a Strang composition: exact damping `v <- v e^{-h/(2 tau^2)}`,
//! one classical RK4 step of the non-stiff remainder, then the damping again.

use log::warn;

use crate::error::{Error, Result};
use crate::params::{density_field, GasConstants, PhysicalState, RelaxationParameter};
use crate::spectral::{divergence, dot, SpectralField, TorusGrid, VectorField};

/// Required floor of `min(xi + p_bar) / p_bar`.
pub const PRESSURE_GUARD: f64 = 0.1;
/// Required floor of `min(zeta + rho_bar) / rho_bar`.
pub const DENSITY_GUARD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationState {
    pub t: f64,
    pub xi: SpectralField,
    pub vel: VectorField,
    pub phi: SpectralField,
}

impl PerturbationState {
    pub fn equilibrium(grid: &TorusGrid) -> Self {
        PerturbationState {
            t: 0.0,
            xi: SpectralField::zeros(grid),
            vel: vec![SpectralField::zeros(grid); grid.dim()],
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

    pub fn to_physical(&self, c: &GasConstants) -> PhysicalState {
        PhysicalState {
            t: self.t,
            pressure: self.xi.map(|x| x + c.p_bar),
            velocity: self.vel.iter().map(|v| v.scale(c.k1)).collect(),
            entropy: self.phi.map(|f| f + c.s_bar),
        }
    }

    pub fn from_physical(s: &PhysicalState, c: &GasConstants) -> Self {
        PerturbationState {
            t: s.t,
            xi: s.pressure.map(|p| p - c.p_bar),
            vel: s.velocity.iter().map(|u| u.scale(1.0 / c.k1)).collect(),
            phi: s.entropy.map(|e| e - c.s_bar),
        }
    }
}

pub(crate) fn check_guards(t: f64, xi: &SpectralField, phi: &SpectralField, c: &GasConstants) -> Result<()> {
    let min_p = xi.min() + c.p_bar;
    let required = PRESSURE_GUARD * c.p_bar;
    if !(min_p >= required) {
        return Err(Error::PressureGuard {
            t,
            min_pressure: min_p,
            required,
        });
    }
    let min_rho = density_field(xi, phi, c).min();
    let required = DENSITY_GUARD * c.rho_bar;
    if !(min_rho >= required) {
        return Err(Error::DensityGuard {
            t,
            min_density: min_rho,
            required,
        });
    }
    Ok(())
}

/// Time derivatives `(xi_t, v_t, phi_t)`, or any tangent vector of the state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Rates {
    pub xi: SpectralField,
    pub vel: VectorField,
    pub phi: SpectralField,
}

impl Rates {
    pub fn zeros(grid: &TorusGrid) -> Self {
        Rates {
            xi: SpectralField::zeros(grid),
            vel: vec![SpectralField::zeros(grid); grid.dim()],
            phi: SpectralField::zeros(grid),
        }
    }
}

fn advance(state: &PerturbationState, h: f64, k: &Rates) -> PerturbationState {
    let mut out = state.clone();
    out.xi.axpy(h, &k.xi);
    for (v, kv) in out.vel.iter_mut().zip(&k.vel) {
        v.axpy(h, kv);
    }
    out.phi.axpy(h, &k.phi);
    out
}

/// Right-hand side without the stiff `-v / tau^2` damping.
pub fn explicit_rhs(s: &PerturbationState, tau: RelaxationParameter, c: &GasConstants) -> Rates {
    let inv_tau2 = 1.0 / tau.squared();
    let grad_xi = s.xi.gradient();
    let div_v = divergence(&s.vel);
    let rho = s.density(c);

    let mut xi_t = div_v.scale(-c.k2);
    let mut nonlinear = (&s.xi * &div_v).scale(c.gamma * c.k1);
    nonlinear.axpy(c.k1, &dot(&s.vel, &grad_xi));
    xi_t.axpy(-1.0, &nonlinear.dealias());

    let coef = rho.map(|r| (1.0 / c.rho_bar - 1.0 / r) / c.k1);
    let vel_t = grad_xi
        .iter()
        .zip(&s.vel)
        .map(|(dxi, vi)| {
            let mut out = dxi.scale(-c.k2);
            out.axpy(1.0, &coef.mul_dealiased(dxi));
            out.scale_in_place(inv_tau2);
            out.axpy(-c.k1, &dot(&s.vel, &vi.gradient()).dealias());
            out
        })
        .collect();

    let phi_t = dot(&s.vel, &s.phi.gradient()).dealias().scale(-c.k1);
    Rates {
        xi: xi_t,
        vel: vel_t,
        phi: phi_t,
    }
}

/// Full right-hand side of the relaxing system in slow time.
pub fn relaxing_rhs(s: &PerturbationState, tau: RelaxationParameter, c: &GasConstants) -> Result<Rates> {
    s.check_guards(c)?;
    let mut r = explicit_rhs(s, tau, c);
    let inv_tau2 = 1.0 / tau.squared();
    for (rv, v) in r.vel.iter_mut().zip(&s.vel) {
        rv.axpy(-inv_tau2, v);
    }
    Ok(r)
}

/// Directional derivative of [`relaxing_rhs`] at `s` along `dir`.
///
/// Differentiates the discrete operator term by term, so applying it to
/// `relaxing_rhs(s)` gives the exact second time derivative of the
/// semi-discrete solution.
pub fn rhs_directional_derivative(
    s: &PerturbationState,
    dir: &Rates,
    tau: RelaxationParameter,
    c: &GasConstants,
) -> Rates {
    let inv_tau2 = 1.0 / tau.squared();
    let grad_xi = s.xi.gradient();
    let grad_a = dir.xi.gradient();
    let div_v = divergence(&s.vel);
    let div_b = divergence(&dir.vel);
    let rho = s.density(c);

    let mut dxi = div_b.scale(-c.k2);
    let mut nl = &(&dir.xi * &div_v) + &(&s.xi * &div_b);
    nl.scale_in_place(c.gamma * c.k1);
    nl.axpy(c.k1, &dot(&dir.vel, &grad_xi));
    nl.axpy(c.k1, &dot(&s.vel, &grad_a));
    dxi.axpy(-1.0, &nl.dealias());

    let coef = rho.map(|r| (1.0 / c.rho_bar - 1.0 / r) / c.k1);
    // d(1/rho_bar - 1/rho)/k1 = rho' / (k1 rho^2), rho' = rho (a/(gamma p) - c/gamma)
    let dcoef = {
        let vals = (0..rho.values().len())
            .map(|j| {
                let r = rho.values()[j];
                let p = s.xi.values()[j] + c.p_bar;
                let drho = r * (dir.xi.values()[j] / (c.gamma * p) - dir.phi.values()[j] / c.gamma);
                drho / (c.k1 * r * r)
            })
            .collect();
        SpectralField::from_values(rho.grid(), vals).expect("same grid")
    };
    let dvel = (0..s.vel.len())
        .map(|i| {
            let mut out = grad_a[i].scale(-c.k2);
            out.axpy(-1.0, &dir.vel[i]);
            let prod = &(&coef * &grad_a[i]) + &(&dcoef * &grad_xi[i]);
            out.axpy(1.0, &prod.dealias());
            out.scale_in_place(inv_tau2);
            let adv = &dot(&dir.vel, &s.vel[i].gradient()) + &dot(&s.vel, &dir.vel[i].gradient());
            out.axpy(-c.k1, &adv.dealias());
            out
        })
        .collect();

    let adv = &dot(&dir.vel, &s.phi.gradient()) + &dot(&s.vel, &dir.phi.gradient());
    let dphi = adv.dealias().scale(-c.k1);
    Rates {
        xi: dxi,
        vel: dvel,
        phi: dphi,
    }
}

/// First and second time derivatives of `(xi, v, phi)` at `s`.
pub fn time_derivatives(s: &PerturbationState, tau: RelaxationParameter, c: &GasConstants) -> Result<(Rates, Rates)> {
    let first = relaxing_rhs(s, tau, c)?;
    let second = rhs_directional_derivative(s, &first, tau, c);
    Ok((first, second))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub dt: f64,
    pub cfl_advective: f64,
    pub cfl_acoustic: f64,
}

impl StepControl {
    pub fn new(dt: f64, cfl_advective: f64, cfl_acoustic: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param("dt", format!("{dt} must be > 0")));
        }
        for (name, v) in [("cfl_advective", cfl_advective), ("cfl_acoustic", cfl_acoustic)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::param(name, format!("{v} not in (0, 1]")));
            }
        }
        Ok(StepControl {
            dt,
            cfl_advective,
            cfl_acoustic,
        })
    }

    /// Acoustic limit `cfl_acoustic * tau * dx / k2`.
    pub fn acoustic_limit(&self, grid: &TorusGrid, tau: RelaxationParameter, c: &GasConstants) -> f64 {
        self.cfl_acoustic * tau.value() * grid.dx() / c.k2
    }

    /// Advective limit `cfl_advective * dx / max|k1 v|` (infinite at rest).
    pub fn advective_limit(&self, s: &PerturbationState, c: &GasConstants) -> f64 {
        let vmax = crate::spectral::vector_sup_norm(&s.vel) * c.k1;
        if vmax > 0.0 {
            self.cfl_advective * s.grid().dx() / vmax
        } else {
            f64::INFINITY
        }
    }

    pub fn check(&self, h: f64, s: &PerturbationState, tau: RelaxationParameter, c: &GasConstants) -> Result<()> {
        let acoustic = self.acoustic_limit(s.grid(), tau, c);
        if h > acoustic {
            return Err(Error::Cfl {
                kind: "acoustic",
                dt: h,
                limit: acoustic,
            });
        }
        let advective = self.advective_limit(s, c);
        if h > advective {
            return Err(Error::Cfl {
                kind: "advective",
                dt: h,
                limit: advective,
            });
        }
        Ok(())
    }
}

fn damp(s: &mut PerturbationState, factor: f64) {
    for v in &mut s.vel {
        v.scale_in_place(factor);
    }
}

fn rk4_explicit(s: &PerturbationState, h: f64, tau: RelaxationParameter, c: &GasConstants) -> PerturbationState {
    let k1 = explicit_rhs(s, tau, c);
    let k2 = explicit_rhs(&advance(s, 0.5 * h, &k1), tau, c);
    let k3 = explicit_rhs(&advance(s, 0.5 * h, &k2), tau, c);
    let k4 = explicit_rhs(&advance(s, h, &k3), tau, c);
    let mut out = s.clone();
    for (w, k) in [(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)] {
        let a = w * h / 6.0;
        out.xi.axpy(a, &k.xi);
        for (v, kv) in out.vel.iter_mut().zip(&k.vel) {
            v.axpy(a, kv);
        }
        out.phi.axpy(a, &k.phi);
    }
    out
}

fn step_with(s: &PerturbationState, h: f64, tau: RelaxationParameter, c: &GasConstants, ctrl: &StepControl) -> Result<PerturbationState> {
    ctrl.check(h, s, tau, c)?;
    let half = (-0.5 * h / tau.squared()).exp();
    let mut out = s.clone();
    damp(&mut out, half);
    out = rk4_explicit(&out, h, tau, c);
    damp(&mut out, half);
    out.t = s.t + h;
    out.check_guards(c)?;
    Ok(out)
}

/// One Strang step of length `ctrl.dt`.
pub fn step_relaxing(
    s: &PerturbationState,
    tau: RelaxationParameter,
    c: &GasConstants,
    ctrl: &StepControl,
) -> Result<PerturbationState> {
    step_with(s, ctrl.dt, tau, c, ctrl).map_err(|e| e.at_time(s.t))
}

/// Observer spacing for [`evolve_relaxing`]; `None` samples only at `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub sample_dt: Option<f64>,
}

impl Sampling {
    pub fn every(dt: f64) -> Self {
        Sampling { sample_dt: Some(dt) }
    }

    pub fn end_only() -> Self {
        Sampling { sample_dt: None }
    }

    /// Sample times in `(t0, t_end]`; the last one is exactly `t_end`.
    pub fn times(&self, t0: f64, t_end: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if let Some(dt) = self.sample_dt {
            // Index relative to t = 0 so that resumed runs share the sample grid.
            let mut j = (t0 / dt).floor() as i64 + 1;
            loop {
                let t = j as f64 * dt;
                if t >= t_end - 1e-12 * dt {
                    break;
                }
                if t > t0 + 1e-12 * dt {
                    out.push(t);
                }
                j += 1;
            }
        }
        if t_end > t0 {
            out.push(t_end);
        }
        out
    }
}

/// Number of equal substeps of length at most `dt` covering `span`.
pub(crate) fn substeps(span: f64, dt: f64) -> usize {
    ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

pub type Observer<'a> = dyn FnMut(&PerturbationState) + 'a;

/// Integrates from `state0.t` to `t_end`. Each sampling interval is covered by
/// equal substeps no longer than `ctrl.dt`, so every sample time is hit exactly.
pub fn evolve_relaxing(
    state0: &PerturbationState,
    tau: RelaxationParameter,
    c: &GasConstants,
    ctrl: &StepControl,
    t_end: f64,
    sampling: Sampling,
    observers: &mut [&mut Observer<'_>],
) -> Result<PerturbationState> {
    if t_end < state0.t {
        return Err(Error::param("t_end", format!("{t_end} < start time {}", state0.t)));
    }
    evolve_relaxing_at(state0, tau, c, ctrl, &sampling.times(state0.t, t_end), observers)
}

/// Like [`evolve_relaxing`] with explicit, strictly increasing observation
/// times after `state0.t`; the run ends at the last one.
pub fn evolve_relaxing_at(
    state0: &PerturbationState,
    tau: RelaxationParameter,
    c: &GasConstants,
    ctrl: &StepControl,
    times: &[f64],
    observers: &mut [&mut Observer<'_>],
) -> Result<PerturbationState> {
    let mut prev = state0.t;
    for &t in times {
        if !(t > prev) {
            return Err(Error::param("times", format!("{t} does not follow {prev}")));
        }
        prev = t;
    }
    if tau.value() < 1e-3 {
        warn!("tau = {} < 1e-3: the acoustic CFL makes this run expensive", tau.value());
    }
    let mut s = state0.clone();
    for &t_sample in times {
        let span = t_sample - s.t;
        let m = substeps(span, ctrl.dt);
        let h = span / m as f64;
        for i in 0..m {
            let t_prev = s.t;
            s = step_with(&s, h, tau, c, ctrl).map_err(|e| e.at_time(t_prev))?;
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

/// Integration of the fast-time system in physical variables, kept only as an
/// independent cross-check of the slow-time solver under `t = tau t'`.
pub mod fast {
    use super::*;

    fn explicit(s: &PhysicalState, c: &GasConstants) -> (SpectralField, VectorField, SpectralField) {
        let div_u = divergence(&s.velocity);
        let grad_p = s.pressure.gradient();
        let xi = s.pressure.map(|p| p - c.p_bar);

        let mut p_t = div_u.scale(-c.gamma * c.p_bar);
        let mut nl = (&xi * &div_u).scale(c.gamma);
        nl.axpy(1.0, &dot(&s.velocity, &grad_p));
        p_t.axpy(-1.0, &nl.dealias());

        let rho = s.pressure.zip_map(&s.entropy, |p, e| c.density(p, e));
        let coef = rho.map(|r| 1.0 / c.rho_bar - 1.0 / r);
        let u_t = grad_p
            .iter()
            .zip(&s.velocity)
            .map(|(dp, ui)| {
                let mut out = dp.scale(-1.0 / c.rho_bar);
                out.axpy(1.0, &coef.mul_dealiased(dp));
                out.axpy(-1.0, &dot(&s.velocity, &ui.gradient()).dealias());
                out
            })
            .collect();
        let s_t = dot(&s.velocity, &s.entropy.gradient()).dealias().scale(-1.0);
        (p_t, u_t, s_t)
    }

    fn axpy_state(s: &PhysicalState, h: f64, k: &(SpectralField, VectorField, SpectralField)) -> PhysicalState {
        let mut out = s.clone();
        out.pressure.axpy(h, &k.0);
        for (u, ku) in out.velocity.iter_mut().zip(&k.1) {
            u.axpy(h, ku);
        }
        out.entropy.axpy(h, &k.2);
        out
    }

    /// One Strang step in fast time `t'` with damping `u_hat / tau`.
    pub fn step_fast(s: &PhysicalState, tau: RelaxationParameter, c: &GasConstants, h: f64) -> PhysicalState {
        let half = (-0.5 * h / tau.value()).exp();
        let mut out = s.clone();
        for u in &mut out.velocity {
            u.scale_in_place(half);
        }
        let k1 = explicit(&out, c);
        let k2 = explicit(&axpy_state(&out, 0.5 * h, &k1), c);
        let k3 = explicit(&axpy_state(&out, 0.5 * h, &k2), c);
        let k4 = explicit(&axpy_state(&out, h, &k3), c);
        for (w, k) in [(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)] {
            out = axpy_state(&out, w * h / 6.0, k);
        }
        for u in &mut out.velocity {
            u.scale_in_place(half);
        }
        out.t = s.t + h;
        out
    }

    /// `n_steps` fast steps of length `h`.
    pub fn evolve_fast(s0: &PhysicalState, tau: RelaxationParameter, c: &GasConstants, h: f64, n_steps: usize) -> PhysicalState {
        let mut s = s0.clone();
        for _ in 0..n_steps {
            s = step_fast(&s, tau, c, h);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (TorusGrid, GasConstants) {
        (TorusGrid::periodic(1, 64).unwrap(), GasConstants::desk_default())
    }

    fn tau(t: f64) -> RelaxationParameter {
        RelaxationParameter::new(t).unwrap()
    }

    #[test]
    fn rhs_vanishes_at_equilibrium() {
        let (g, c) = setup();
        let s = PerturbationState::equilibrium(&g);
        let r = relaxing_rhs(&s, tau(0.3), &c).unwrap();
        assert_eq!(r, Rates::zeros(&g));
    }

    #[test]
    fn rhs_uniform_velocity_is_pure_damping() {
        let (g, c) = setup();
        let mut s = PerturbationState::equilibrium(&g);
        s.vel[0] = SpectralField::constant(&g, 0.2);
        let t = tau(0.5);
        let r = relaxing_rhs(&s, t, &c).unwrap();
        assert!(r.xi.sup_norm() <= 1e-15);
        assert!(r.phi.sup_norm() <= 1e-15);
        let expect = SpectralField::constant(&g, -0.2 / 0.25);
        assert!((&r.vel[0] - &expect).sup_norm() <= 1e-13);
    }

    #[test]
    fn rhs_small_pressure_wave_matches_linearization() {
        let (g, c) = setup();
        let eps = 1e-6;
        let mut s = PerturbationState::equilibrium(&g);
        s.xi = SpectralField::from_fn(&g, |x| eps * x[0].sin());
        let r = relaxing_rhs(&s, tau(1.0), &c).unwrap();
        assert!(r.xi.sup_norm() <= 1e-20);
        let lin = SpectralField::from_fn(&g, |x| -c.k2 * eps * x[0].cos());
        let rel = (&r.vel[0] - &lin).sup_norm() / lin.sup_norm();
        assert!(rel <= 1e-4, "relative error {rel}");
    }

    #[test]
    fn guard_violation_reports_minimum() {
        let (g, c) = setup();
        let mut s = PerturbationState::equilibrium(&g);
        s.xi = SpectralField::from_fn(&g, |x| 0.95 * x[0].sin());
        match relaxing_rhs(&s, tau(1.0), &c) {
            Err(Error::PressureGuard { min_pressure, .. }) => assert!(min_pressure < 0.1),
            other => panic!("expected pressure guard, got {other:?}"),
        }
    }

    #[test]
    fn directional_derivative_matches_central_difference() {
        let (g, c) = setup();
        let t = tau(0.5);
        let mut s = PerturbationState::equilibrium(&g);
        s.xi = SpectralField::from_fn(&g, |x| 0.05 * x[0].sin() + 0.01 * (2.0 * x[0]).cos());
        s.vel[0] = SpectralField::from_fn(&g, |x| 0.03 * x[0].cos());
        s.phi = SpectralField::from_fn(&g, |x| 0.02 * (3.0 * x[0]).sin());
        let dir = Rates {
            xi: SpectralField::from_fn(&g, |x| 0.3 * (2.0 * x[0]).sin()),
            vel: vec![SpectralField::from_fn(&g, |x| -0.2 * x[0].sin())],
            phi: SpectralField::from_fn(&g, |x| 0.1 * x[0].cos()),
        };
        let jvp = rhs_directional_derivative(&s, &dir, t, &c);
        let h = 1e-5;
        let plus = relaxing_rhs(&advance(&s, h, &dir), t, &c).unwrap();
        let minus = relaxing_rhs(&advance(&s, -h, &dir), t, &c).unwrap();
        let fd = |a: &SpectralField, b: &SpectralField| (a - b).scale(0.5 / h);
        assert!((&fd(&plus.xi, &minus.xi) - &jvp.xi).sup_norm() <= 1e-8);
        assert!((&fd(&plus.vel[0], &minus.vel[0]) - &jvp.vel[0]).sup_norm() <= 1e-8);
        assert!((&fd(&plus.phi, &minus.phi) - &jvp.phi).sup_norm() <= 1e-8);
    }

    #[test]
    fn step_preserves_equilibrium_bitwise() {
        let (g, c) = setup();
        let s = PerturbationState::equilibrium(&g);
        let ctrl = StepControl::new(1e-3, 0.5, 0.5).unwrap();
        let out = step_relaxing(&s, tau(1.0), &c, &ctrl).unwrap();
        assert_eq!(out.xi, s.xi);
        assert_eq!(out.vel, s.vel);
        assert_eq!(out.phi, s.phi);
    }

    #[test]
    fn step_rejects_cfl_violation() {
        let (g, c) = setup();
        let s = PerturbationState::equilibrium(&g);
        let ctrl = StepControl::new(0.5, 0.5, 0.5).unwrap();
        let err = step_relaxing(&s, tau(0.1), &c, &ctrl).unwrap_err();
        assert!(matches!(err, Error::AtTime { ref inner, .. } if matches!(**inner, Error::Cfl { kind: "acoustic", .. })));
    }

    #[test]
    fn evolve_to_start_time_is_identity() {
        let (g, c) = setup();
        let mut s = PerturbationState::equilibrium(&g);
        s.xi = SpectralField::from_fn(&g, |x| 0.01 * x[0].sin());
        let ctrl = StepControl::new(1e-3, 0.5, 0.5).unwrap();
        let mut calls = 0;
        let mut obs = |_: &PerturbationState| calls += 1;
        let out = evolve_relaxing(&s, tau(1.0), &c, &ctrl, 0.0, Sampling::every(0.1), &mut [&mut obs]).unwrap();
        assert_eq!(out, s);
        assert_eq!(calls, 0);
    }

    #[test]
    fn sampling_times_end_exactly() {
        let ts = Sampling::every(0.25).times(0.0, 1.0);
        assert_eq!(ts, vec![0.25, 0.5, 0.75, 1.0]);
        let ts = Sampling::every(0.3).times(0.0, 1.0);
        assert_eq!(ts.len(), 4);
        assert_eq!(*ts.last().unwrap(), 1.0);
        let ts = Sampling::every(0.25).times(0.5, 1.0);
        assert_eq!(ts, vec![0.75, 1.0]);
        assert!(Sampling::end_only().times(1.0, 1.0).is_empty());
    }

    #[test]
    fn substep_count() {
        assert_eq!(substeps(1.0, 0.1), 10);
        assert_eq!(substeps(1.0, 0.3), 4);
        assert_eq!(substeps(0.1, 1.0), 1);
    }
}
