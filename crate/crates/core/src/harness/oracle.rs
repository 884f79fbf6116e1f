//! Solver-vs-oracle checks on the grid and constants of a scenario.

use num_complex::Complex64;

use crate::diagnostics::{heat_mode_factor, linear_mode_oracle};
use crate::error::Result;
use crate::harness::scenario::Scenario;
use crate::params::RelaxationParameter;
use crate::relaxed::{evolve_relaxed, RelaxedState};
use crate::relaxing::{evolve_relaxing, PerturbationState, Sampling, StepControl};
use crate::spectral::{SpectralField, TorusGrid};

/// Amplitude of the probe modes; small enough to stay linear.
pub const PROBE_AMPLITUDE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// `Re(a e^{i k0 x_0})`.
pub fn mode_field(grid: &TorusGrid, a: Complex64) -> SpectralField {
    let k0 = grid.k0();
    SpectralField::from_fn(grid, |x| a.re * (k0 * x[0]).cos() - a.im * (k0 * x[0]).sin())
}

/// L2 distance between the relaxing solution of one acoustic mode and the
/// exact linear solution at `t_end`.
pub fn linear_mode_error(grid: &TorusGrid, sc: &Scenario, tau: RelaxationParameter, dt: f64, t_end: f64) -> Result<f64> {
    let c = &sc.constants;
    let a = Complex64::new(PROBE_AMPLITUDE, 0.0);
    let mut s0 = PerturbationState::equilibrium(grid);
    s0.xi = mode_field(grid, a);
    let ctrl = StepControl::new(dt, sc.step.cfl_advective, sc.step.cfl_acoustic)?;
    let end = evolve_relaxing(&s0, tau, c, &ctrl, t_end, Sampling::end_only(), &mut [])?;
    let mut k = vec![0i64; grid.dim()];
    k[0] = 1;
    let exact = linear_mode_oracle(&k, grid.length(), tau, c, a, t_end);
    let mut err = (&end.xi - &mode_field(grid, exact.xi)).l2_norm_sq();
    for (i, v) in end.vel.iter().enumerate() {
        let e = if i == 0 {
            mode_field(grid, exact.vel[0])
        } else {
            SpectralField::zeros(grid)
        };
        err += (v - &e).l2_norm_sq();
    }
    Ok(err.sqrt())
}

/// Relative error of the relaxed solver's decay factor for one heat mode.
pub fn heat_mode_error(sc: &Scenario, dt: f64, t_end: f64) -> Result<f64> {
    let grid = &sc.grid;
    let c = &sc.constants;
    let s0 = RelaxedState {
        t: 0.0,
        xi: mode_field(grid, Complex64::new(PROBE_AMPLITUDE, 0.0)),
        phi: SpectralField::zeros(grid),
    };
    let end = evolve_relaxed(&s0, c, dt, t_end, Sampling::end_only(), &mut [])?;
    let mut k = vec![0i64; grid.dim()];
    k[0] = 1;
    let idx = grid.spectral_index(&k);
    let measured = end.xi.coeffs()[idx].norm() / s0.xi.coeffs()[idx].norm();
    let expect = heat_mode_factor(&k, grid.length(), c, t_end);
    Ok((measured / expect - 1.0).abs())
}

/// Linear acoustic mode per tau (to `min(t_end, 1)`) and the heat mode (to 0.1).
pub fn oracle_checks(sc: &Scenario) -> Result<Vec<OracleCheck>> {
    let mut out = Vec::new();
    let t_end = sc.t_end.min(1.0);
    for &tau in &sc.tau_list {
        let dt = sc.step_control(tau)?.dt.min(1e-3);
        out.push(OracleCheck {
            name: format!("linear acoustic mode, tau = {}", tau.value()),
            error: linear_mode_error(&sc.grid, sc, tau, dt, t_end)?,
            tolerance: 1e-3 * PROBE_AMPLITUDE,
        });
    }
    out.push(OracleCheck {
        name: "relaxed heat mode".into(),
        error: heat_mode_error(sc, sc.step.relaxed_dt, 0.1)?,
        tolerance: 1e-5,
    });
    Ok(out)
}
