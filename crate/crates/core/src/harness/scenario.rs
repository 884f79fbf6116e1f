//! Validated scenario and synthesis of initial data.

use crate::error::{Error, Result};
use crate::harness::config::{Config, Mode, OffsetMode, PreparationKind};
use crate::params::{GasConstants, RelaxationParameter};
use crate::relaxed::{limit_velocity, RelaxedState};
use crate::relaxing::{PerturbationState, Sampling, StepControl};
use crate::spectral::{SpectralField, TorusGrid};

#[derive(Debug, Clone, PartialEq)]
pub enum Preparation {
    Well,
    Ill(Vec<OffsetMode>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepSettings {
    pub cfl_acoustic: f64,
    pub cfl_advective: f64,
    pub tau2_fraction: f64,
    pub relaxed_dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub grid: TorusGrid,
    pub constants: GasConstants,
    pub xi0: Vec<Mode>,
    pub phi0: Vec<Mode>,
    pub preparation: Preparation,
    /// Strictly decreasing.
    pub tau_list: Vec<RelaxationParameter>,
    pub t_end: f64,
    pub sample_dt: f64,
    pub step: StepSettings,
    pub config_hash: String,
}

fn check_mode(grid: &TorusGrid, k: &[i64], amplitude: f64, phase: f64) -> Result<()> {
    if k.len() != grid.dim() {
        return Err(Error::Config(format!(
            "mode wavevector {k:?} has {} entries, grid dim is {}",
            k.len(),
            grid.dim()
        )));
    }
    let cutoff = grid.dealias_cutoff();
    if k.iter().any(|&m| (m.unsigned_abs() as f64) > cutoff) {
        return Err(Error::Config(format!("mode {k:?} lies above the dealiasing cutoff {cutoff}")));
    }
    if !(amplitude.is_finite() && phase.is_finite()) {
        return Err(Error::Config(format!("mode {k:?}: amplitude and phase must be finite")));
    }
    Ok(())
}

/// Sum of `amplitude * sin(k0 k.x + phase)` over the modes.
pub fn synthesize(grid: &TorusGrid, modes: &[Mode]) -> SpectralField {
    let k0 = grid.k0();
    SpectralField::from_fn(grid, |x| {
        modes
            .iter()
            .map(|m| {
                let arg: f64 = m.k.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum();
                m.amplitude * (k0 * arg + m.phase).sin()
            })
            .sum()
    })
}

impl Scenario {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let grid = TorusGrid::new(cfg.grid.dim, cfg.grid.n_per_dim, cfg.grid.length)?;
        let k = &cfg.constants;
        let constants = GasConstants::new(k.gamma, k.big_a, k.p_bar, k.s_bar)?;
        for m in cfg.scenario.xi0.iter().chain(&cfg.scenario.phi0) {
            check_mode(&grid, &m.k, m.amplitude, m.phase)?;
        }
        for m in &cfg.scenario.offset {
            check_mode(&grid, &m.k, m.amplitude, m.phase)?;
            if m.axis >= grid.dim() {
                return Err(Error::Config(format!("offset axis {} out of range", m.axis)));
            }
        }
        let preparation = match cfg.scenario.preparation {
            PreparationKind::Well => {
                if !cfg.scenario.offset.is_empty() {
                    return Err(Error::Config("well-prepared scenario must not list an offset".into()));
                }
                Preparation::Well
            }
            PreparationKind::Ill => {
                if cfg.scenario.offset.iter().all(|m| m.amplitude == 0.0) {
                    return Err(Error::Config("ill-prepared scenario needs a nonzero offset".into()));
                }
                Preparation::Ill(cfg.scenario.offset.clone())
            }
        };

        let s = &cfg.sweep;
        let tau_list = s
            .tau_list
            .iter()
            .map(|&t| RelaxationParameter::new(t))
            .collect::<Result<Vec<_>>>()?;
        if tau_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("tau_list must be strictly decreasing".into()));
        }
        if !(s.t_end.is_finite() && s.t_end > 0.0) {
            return Err(Error::Config(format!("t_end = {} must be > 0", s.t_end)));
        }
        if !(s.sample_dt > 0.0 && s.sample_dt <= s.t_end) {
            return Err(Error::Config(format!("sample_dt = {} not in (0, t_end]", s.sample_dt)));
        }
        if !(s.tau2_fraction > 0.0 && s.tau2_fraction <= 1.0) {
            return Err(Error::Config(format!("tau2_fraction = {} not in (0, 1]", s.tau2_fraction)));
        }
        if !(s.relaxed_dt > 0.0 && s.relaxed_dt.is_finite()) {
            return Err(Error::Config(format!("relaxed_dt = {} must be > 0", s.relaxed_dt)));
        }
        StepControl::new(1.0, s.cfl_advective, s.cfl_acoustic)?;

        let sc = Scenario {
            name: cfg.scenario.name.clone(),
            grid,
            constants,
            xi0: cfg.scenario.xi0.clone(),
            phi0: cfg.scenario.phi0.clone(),
            preparation,
            tau_list,
            t_end: s.t_end,
            sample_dt: s.sample_dt,
            step: StepSettings {
                cfl_acoustic: s.cfl_acoustic,
                cfl_advective: s.cfl_advective,
                tau2_fraction: s.tau2_fraction,
                relaxed_dt: s.relaxed_dt,
            },
            config_hash: cfg.hash(),
        };
        // the guard has to hold for the initial data
        sc.relaxed_initial_state().check_guards(&sc.constants).map_err(|e| Error::Config(e.to_string()))?;
        Ok(sc)
    }

    /// `(xi0, phi0)`, shared by the relaxed reference and every relaxing run.
    pub fn relaxed_initial_state(&self) -> RelaxedState {
        RelaxedState {
            t: 0.0,
            xi: synthesize(&self.grid, &self.xi0),
            phi: synthesize(&self.grid, &self.phi0),
        }
    }

    /// Sample times including `t = 0`; identical for every tau.
    pub fn sample_times(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        out.extend(self.sampling().times(0.0, self.t_end));
        out
    }

    pub fn sampling(&self) -> Sampling {
        Sampling::every(self.sample_dt)
    }

    /// Relaxing step: `tau2_fraction * tau^2`, capped by the acoustic CFL limit.
    pub fn step_control(&self, tau: RelaxationParameter) -> Result<StepControl> {
        let probe = StepControl::new(1.0, self.step.cfl_advective, self.step.cfl_acoustic)?;
        let dt = (self.step.tau2_fraction * tau.squared()).min(probe.acoustic_limit(&self.grid, tau, &self.constants));
        StepControl::new(dt, self.step.cfl_advective, self.step.cfl_acoustic)
    }
}

/// Initial relaxing state; the velocity is `-grad xi0 / (k1 rho0)` plus
/// the offset for ill-prepared data. Independent of `tau`.
pub fn build_initial_state(sc: &Scenario, tau: RelaxationParameter) -> Result<PerturbationState> {
    let _ = tau;
    let r = sc.relaxed_initial_state();
    r.check_guards(&sc.constants)?;
    let mut vel = limit_velocity(&r, &sc.constants);
    if let Preparation::Ill(offset) = &sc.preparation {
        for m in offset {
            let f = synthesize(
                &sc.grid,
                &[Mode {
                    k: m.k.clone(),
                    amplitude: m.amplitude,
                    phase: m.phase,
                }],
            );
            vel[m.axis].axpy(1.0, &f);
        }
    }
    Ok(PerturbationState {
        t: 0.0,
        xi: r.xi,
        vel,
        phi: r.phi,
    })
}
