//! Relaxing-vs-relaxed comparison over a list of relaxation times.

use log::{info, warn};
use rayon::prelude::*;

use crate::diagnostics::{compute_eta, energy_report, estimate_layer, EnergyReport, LayerReport};
use crate::error::{Error, Result};
use crate::harness::scenario::{build_initial_state, Scenario};
use crate::params::RelaxationParameter;
use crate::relaxed::{evolve_relaxed, limit_velocity, RelaxedState};
use crate::relaxing::{evolve_relaxing_at, PerturbationState};
use crate::spectral::{vector_l2_norm_sq, vector_sup_norm, SpectralField, VectorField};

/// Threshold ratio used for every layer estimate of a sweep.
pub const LAYER_THRESHOLD: f64 = 0.01;
/// Extra `eta` observations resolve the layer: spacing `tau^2 / 8` ...
pub const LAYER_SAMPLES_PER_TAU2: f64 = 8.0;
/// ... on `(0, 12 tau^2)`, where `e^{-t/tau^2}` has fallen below `1e-5`.
pub const LAYER_WINDOW_TAU2: f64 = 12.0;

/// Layer observation times in `(t0, t_end)` that are not regular samples.
/// They lie on a grid anchored at `t = 0`, so resumed runs see the same times.
pub fn layer_times(sc: &Scenario, tau: RelaxationParameter, t0: f64, t_end: f64) -> Vec<f64> {
    let h = tau.squared() / LAYER_SAMPLES_PER_TAU2;
    if h >= sc.sample_dt {
        return Vec::new();
    }
    let window = (LAYER_WINDOW_TAU2 * tau.squared()).min(t_end);
    let tol = 1e-9 * h;
    (1..)
        .map(|j| j as f64 * h)
        .take_while(|&t| t < window)
        .filter(|&t| t > t0 + tol && t < t_end - tol)
        .filter(|&t| {
            let r = t / sc.sample_dt;
            (r - r.round()).abs() * sc.sample_dt > tol
        })
        .collect()
}

/// Relaxed reference at one sample time.
#[derive(Debug, Clone)]
pub struct ReferenceSample {
    pub state: RelaxedState,
    pub vel: VectorField,
    pub zeta: SpectralField,
}

/// Distances to the relaxed reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub xi_l2: f64,
    pub phi_l2: f64,
    pub zeta_l2: f64,
    pub v_l2: f64,
    pub v_sup: f64,
}

#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub t: f64,
    pub errors: Option<ErrorNorms>,
    pub eta_h2_sq: f64,
    pub eta_sup: f64,
    pub energy: EnergyReport,
    /// Trapezoid integral of `E[v]` over the samples up to `t`.
    pub int_e_v_to_t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSummary {
    pub t: f64,
    pub xi_l2: f64,
    pub vel_l2: f64,
    pub phi_l2: f64,
    pub min_pressure: f64,
}

impl StateSummary {
    pub fn of(s: &PerturbationState, p_bar: f64) -> Self {
        StateSummary {
            t: s.t,
            xi_l2: s.xi.l2_norm_sq().sqrt(),
            vel_l2: vector_l2_norm_sq(&s.vel).sqrt(),
            phi_l2: s.phi.l2_norm_sq().sqrt(),
            min_pressure: s.xi.min() + p_bar,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TauRun {
    pub tau: RelaxationParameter,
    pub config_hash: String,
    pub samples: Vec<SampleRecord>,
    /// Estimated on the amplitude series `||eta||_{H^2}`, sampled at the
    /// regular times plus [`layer_times`].
    pub layer: LayerReport,
    pub int_e_v: f64,
    pub summary: StateSummary,
    pub final_state: PerturbationState,
}

#[derive(Debug)]
pub struct TauOutcome {
    pub tau: RelaxationParameter,
    pub config_hash: String,
    pub result: Result<TauRun>,
}

#[derive(Debug)]
pub struct SweepResult {
    pub scenario: String,
    pub config_hash: String,
    pub sample_times: Vec<f64>,
    /// Sorted by tau, descending.
    pub runs: Vec<TauOutcome>,
}

impl SweepResult {
    pub fn all_succeeded(&self) -> bool {
        self.runs.iter().all(|r| r.result.is_ok())
    }

    pub fn run(&self, tau: f64) -> Option<&TauRun> {
        self.runs
            .iter()
            .find(|r| r.tau.value() == tau)
            .and_then(|r| r.result.as_ref().ok())
    }
}

fn reference_sample(state: &RelaxedState, sc: &Scenario) -> ReferenceSample {
    ReferenceSample {
        vel: limit_velocity(state, &sc.constants),
        zeta: state.zeta(&sc.constants),
        state: state.clone(),
    }
}

/// Relaxed run sampled on [`Scenario::sample_times`].
pub fn run_reference(sc: &Scenario) -> Result<Vec<ReferenceSample>> {
    let s0 = sc.relaxed_initial_state();
    let mut out = vec![reference_sample(&s0, sc)];
    {
        let mut obs = |s: &RelaxedState| out.push(reference_sample(s, sc));
        evolve_relaxed(&s0, &sc.constants, sc.step.relaxed_dt, sc.t_end, sc.sampling(), &mut [&mut obs])?;
    }
    Ok(out)
}

fn error_norms(s: &PerturbationState, r: &ReferenceSample, sc: &Scenario) -> ErrorNorms {
    let dv: VectorField = s.vel.iter().zip(&r.vel).map(|(a, b)| a - b).collect();
    ErrorNorms {
        xi_l2: (&s.xi - &r.state.xi).l2_norm_sq().sqrt(),
        phi_l2: (&s.phi - &r.state.phi).l2_norm_sq().sqrt(),
        zeta_l2: (&s.zeta(&sc.constants) - &r.zeta).l2_norm_sq().sqrt(),
        v_l2: vector_l2_norm_sq(&dv).sqrt(),
        v_sup: vector_sup_norm(&dv),
    }
}

/// Diagnostics of one sample; the energy integral is filled in later.
fn record(
    s: &PerturbationState,
    tau: RelaxationParameter,
    sc: &Scenario,
    reference: Option<&ReferenceSample>,
) -> Result<SampleRecord> {
    let eta = compute_eta(s, &sc.constants)?;
    let energy = energy_report(s, tau, &sc.constants)?;
    Ok(SampleRecord {
        t: s.t,
        errors: reference.map(|r| error_norms(s, r, sc)),
        eta_h2_sq: eta.h2_norm_sq,
        eta_sup: eta.sup_norm,
        energy,
        int_e_v_to_t: 0.0,
    })
}

/// Evolves `state0` to `t_end`, sampling on the scenario grid. With a
/// reference, its samples must line up with `[state0.t] ++ sample times`.
pub fn run_relaxing(
    sc: &Scenario,
    tau: RelaxationParameter,
    state0: &PerturbationState,
    t_end: f64,
    reference: Option<&[ReferenceSample]>,
) -> Result<TauRun> {
    let ctrl = sc.step_control(tau)?;
    let times = sc.sampling().times(state0.t, t_end);
    if let Some(r) = reference {
        if r.len() != times.len() + 1 {
            return Err(Error::GridMismatch(format!(
                "reference has {} samples, run has {}",
                r.len(),
                times.len() + 1
            )));
        }
    }
    let mut all_times: Vec<f64> = times.iter().copied().chain(layer_times(sc, tau, state0.t, t_end)).collect();
    all_times.sort_by(f64::total_cmp);

    let mut samples = vec![record(state0, tau, sc, reference.map(|r| &r[0]))?];
    let mut traj = vec![(0.0, samples[0].eta_h2_sq.sqrt())];
    let mut failure: Option<Error> = None;
    let final_state = {
        let mut obs = |s: &PerturbationState| {
            if failure.is_some() {
                return;
            }
            let i = samples.len();
            if times.get(i - 1) == Some(&s.t) {
                match record(s, tau, sc, reference.map(|r| &r[i])) {
                    Ok(rec) => {
                        traj.push((s.t - state0.t, rec.eta_h2_sq.sqrt()));
                        samples.push(rec);
                    }
                    Err(e) => failure = Some(e.at_time(s.t)),
                }
            } else {
                match compute_eta(s, &sc.constants) {
                    Ok(e) => traj.push((s.t - state0.t, e.h2_norm_sq.sqrt())),
                    Err(e) => failure = Some(e.at_time(s.t)),
                }
            }
        };
        evolve_relaxing_at(state0, tau, &sc.constants, &ctrl, &all_times, &mut [&mut obs])?
    };
    if let Some(e) = failure {
        return Err(e);
    }

    let mut acc = 0.0;
    for i in 1..samples.len() {
        let (a, b) = (&samples[i - 1], &samples[i]);
        acc += 0.5 * (b.t - a.t) * (a.energy.e_v + b.energy.e_v);
        samples[i].int_e_v_to_t = acc;
    }
    let layer = estimate_layer(&traj, tau, LAYER_THRESHOLD)?;
    Ok(TauRun {
        tau,
        config_hash: sc.config_hash.clone(),
        samples,
        layer,
        int_e_v: acc,
        summary: StateSummary::of(&final_state, sc.constants.p_bar),
        final_state,
    })
}

fn run_one(sc: &Scenario, tau: RelaxationParameter, reference: &[ReferenceSample]) -> TauOutcome {
    let result = build_initial_state(sc, tau).and_then(|s0| run_relaxing(sc, tau, &s0, sc.t_end, Some(reference)));
    match &result {
        Ok(_) => info!("tau = {}: done", tau.value()),
        Err(e) => warn!("tau = {}: {e}", tau.value()),
    }
    TauOutcome {
        tau,
        config_hash: sc.config_hash.clone(),
        result,
    }
}

/// Relaxed reference once, then one relaxing run per tau (in parallel).
pub fn run_sweep(sc: &Scenario) -> Result<SweepResult> {
    run_sweep_with(sc, true)
}

pub fn run_sweep_with(sc: &Scenario, parallel: bool) -> Result<SweepResult> {
    let reference = run_reference(sc)?;
    let mut runs: Vec<TauOutcome> = if parallel {
        sc.tau_list.par_iter().map(|&tau| run_one(sc, tau, &reference)).collect()
    } else {
        sc.tau_list.iter().map(|&tau| run_one(sc, tau, &reference)).collect()
    };
    runs.sort_by(|a, b| b.tau.value().total_cmp(&a.tau.value()));
    Ok(SweepResult {
        scenario: sc.name.clone(),
        config_hash: sc.config_hash.clone(),
        sample_times: sc.sample_times(),
        runs,
    })
}

/// Relaxing runs from the scenario's initial data without a relaxed
/// reference; error columns stay empty.
pub fn run_unreferenced(sc: &Scenario) -> SweepResult {
    let mut runs: Vec<TauOutcome> = sc
        .tau_list
        .par_iter()
        .map(|&tau| TauOutcome {
            tau,
            config_hash: sc.config_hash.clone(),
            result: build_initial_state(sc, tau).and_then(|s0| run_relaxing(sc, tau, &s0, sc.t_end, None)),
        })
        .collect();
    runs.sort_by(|a, b| b.tau.value().total_cmp(&a.tau.value()));
    SweepResult {
        scenario: sc.name.clone(),
        config_hash: sc.config_hash.clone(),
        sample_times: sc.sample_times(),
        runs,
    }
}
