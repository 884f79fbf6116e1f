use relaxlab::diagnostics::compute_eta;
use relaxlab::harness::{build_initial_state, Config, Scenario};
use relaxlab::params::{rescale_fast_to_slow, rescale_slow_to_fast};
use relaxlab::relaxing::fast::evolve_fast;
use relaxlab::relaxing::{evolve_relaxing, relaxing_rhs, PerturbationState, Rates, Sampling, StepControl};
use relaxlab::spectral::{divergence, dot, vector_l2_norm_sq, NormConvention, SpectralField, TorusGrid};
use relaxlab::{GasConstants, RelaxationParameter};

fn tau(t: f64) -> RelaxationParameter {
    RelaxationParameter::new(t).unwrap()
}

fn default_scenario() -> Scenario {
    Scenario::from_config(&Config::default_ill_prepared()).unwrap()
}

fn state_distance(a: &PerturbationState, b: &PerturbationState) -> f64 {
    let dv: Vec<SpectralField> = a.vel.iter().zip(&b.vel).map(|(x, y)| x - y).collect();
    ((&a.xi - &b.xi).l2_norm_sq() + vector_l2_norm_sq(&dv) + (&a.phi - &b.phi).l2_norm_sq()).sqrt()
}

fn smooth_state(g: &TorusGrid) -> PerturbationState {
    PerturbationState {
        t: 0.0,
        xi: SpectralField::from_fn(g, |x| 0.05 * x[0].sin() + 0.02 * (2.0 * x[0]).cos()),
        vel: vec![SpectralField::from_fn(g, |x| 0.04 * (x[0] + 0.3).cos())],
        phi: SpectralField::from_fn(g, |x| 0.02 * x[0].cos()),
    }
}

#[test]
fn zero_length_evolution_is_identity() {
    let g = TorusGrid::periodic(1, 64).unwrap();
    let c = GasConstants::desk_default();
    let s = smooth_state(&g);
    let ctrl = StepControl::new(1e-3, 0.5, 0.5).unwrap();
    let mut calls = 0;
    let mut obs = |_: &PerturbationState| calls += 1;
    let out = evolve_relaxing(&s, tau(0.5), &c, &ctrl, 0.0, Sampling::every(0.01), &mut [&mut obs]).unwrap();
    assert_eq!(out, s);
    assert_eq!(calls, 0);
}

#[test]
fn halves_match_whole_run() {
    let g = TorusGrid::periodic(1, 64).unwrap();
    let c = GasConstants::desk_default();
    let s = smooth_state(&g);
    let ctrl = StepControl::new(2e-3, 0.5, 0.5).unwrap();
    let samp = Sampling::every(0.05);
    let whole = evolve_relaxing(&s, tau(0.25), &c, &ctrl, 0.2, samp, &mut []).unwrap();
    let half = evolve_relaxing(&s, tau(0.25), &c, &ctrl, 0.1, samp, &mut []).unwrap();
    let rest = evolve_relaxing(&half, tau(0.25), &c, &ctrl, 0.2, samp, &mut []).unwrap();
    assert!(state_distance(&whole, &rest) <= 1e-13);
}

#[test]
fn slow_and_fast_time_agree() {
    let sc = default_scenario();
    let c = &sc.constants;
    let t = tau(0.25);
    let s0 = build_initial_state(&sc, t).unwrap();
    let dt = 1e-3;
    let ctrl = StepControl::new(dt, 0.5, 0.5).unwrap();
    let slow = evolve_relaxing(&s0, t, c, &ctrl, 0.25, Sampling::end_only(), &mut []).unwrap();

    let fast0 = rescale_slow_to_fast(&s0.to_physical(c), t);
    let fast = evolve_fast(&fast0, t, c, dt / t.value(), 250);
    let back = PerturbationState::from_physical(&rescale_fast_to_slow(&fast, t), c);
    assert!((back.t - 0.25).abs() < 1e-12);
    let d = state_distance(&slow, &back);
    assert!(d <= 1e-8, "slow vs fast distance {d}");
}

#[test]
fn entropy_range_does_not_grow() {
    let sc = default_scenario();
    let c = &sc.constants;
    let t = tau(0.25);
    let s0 = build_initial_state(&sc, t).unwrap();
    let ctrl = sc.step_control(t).unwrap();
    let (lo, hi) = (s0.phi.min(), s0.phi.max());
    let mut growth: f64 = 0.0;
    let mut obs = |s: &PerturbationState| growth = growth.max(s.phi.max() - hi).max(lo - s.phi.min());
    evolve_relaxing(&s0, t, c, &ctrl, sc.t_end, sc.sampling(), &mut [&mut obs]).unwrap();
    assert!(growth <= 1e-6 * s0.phi.sup_norm(), "range grew by {growth}");
}

/// `(xi, v, phi)` rates plus `zeta_t = -k1 v.grad zeta - k1 rho div v`.
fn augmented_rhs(s: &PerturbationState, zeta: &SpectralField, t: RelaxationParameter, c: &GasConstants) -> (Rates, SpectralField) {
    let r = relaxing_rhs(s, t, c).unwrap();
    let rho = zeta.map(|z| z + c.rho_bar);
    let mut z_t = dot(&s.vel, &zeta.gradient()).dealias().scale(-c.k1);
    z_t.axpy(-c.k1, &rho.mul_dealiased(&divergence(&s.vel)));
    (r, z_t)
}

fn shifted(s: &PerturbationState, z: &SpectralField, h: f64, k: &(Rates, SpectralField)) -> (PerturbationState, SpectralField) {
    let mut o = s.clone();
    o.xi.axpy(h, &k.0.xi);
    for (v, kv) in o.vel.iter_mut().zip(&k.0.vel) {
        v.axpy(h, kv);
    }
    o.phi.axpy(h, &k.0.phi);
    let mut oz = z.clone();
    oz.axpy(h, &k.1);
    (o, oz)
}

#[test]
fn continuity_equation_consistent_with_eos() {
    // classical RK4 on the system augmented with the continuity equation
    let sc = default_scenario();
    let c = &sc.constants;
    let t = tau(0.25);
    let mut s = build_initial_state(&sc, t).unwrap();
    let mut z = s.zeta(c);
    let h = 1e-3;
    for _ in 0..500 {
        let k1 = augmented_rhs(&s, &z, t, c);
        let (s2, z2) = shifted(&s, &z, 0.5 * h, &k1);
        let k2 = augmented_rhs(&s2, &z2, t, c);
        let (s3, z3) = shifted(&s, &z, 0.5 * h, &k2);
        let k3 = augmented_rhs(&s3, &z3, t, c);
        let (s4, z4) = shifted(&s, &z, h, &k3);
        let k4 = augmented_rhs(&s4, &z4, t, c);
        for (w, k) in [(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)] {
            let (ns, nz) = shifted(&s, &z, w * h / 6.0, k);
            s = ns;
            z = nz;
        }
    }
    let d = (&z - &s.zeta(c)).sup_norm();
    assert!(d <= 1e-5, "evolved zeta differs from EOS zeta by {d}");
}

fn run_with_dt(s: &PerturbationState, t: RelaxationParameter, dt: f64) -> PerturbationState {
    let c = GasConstants::desk_default();
    let ctrl = StepControl::new(dt, 0.5, 0.5).unwrap();
    evolve_relaxing(s, t, &c, &ctrl, 0.2, Sampling::end_only(), &mut []).unwrap()
}

#[test]
fn second_order_in_time() {
    let g = TorusGrid::periodic(1, 64).unwrap();
    let s = smooth_state(&g);
    let t = tau(0.5);
    let a = run_with_dt(&s, t, 8e-3);
    let b = run_with_dt(&s, t, 4e-3);
    let d = run_with_dt(&s, t, 2e-3);
    let ratio = state_distance(&a, &b) / state_distance(&b, &d);
    assert!((3.4..=4.6).contains(&ratio), "self-convergence ratio {ratio}");
}

#[test]
fn well_prepared_eta_bound_calibrated_at_quarter() {
    let sc = Scenario::from_config(&Config::default_well_prepared()).unwrap();
    let c = &sc.constants;
    let data = sc.relaxed_initial_state();
    let data_h4 = data.xi.sobolev_norm_sq(4, NormConvention::DerivativeSum)
        + data.phi.sobolev_norm_sq(4, NormConvention::DerivativeSum);
    let sup_eta = |t: RelaxationParameter| {
        let s0 = build_initial_state(&sc, t).unwrap();
        let ctrl = sc.step_control(t).unwrap();
        let mut sup: f64 = 0.0;
        let mut obs = |s: &PerturbationState| sup = sup.max(compute_eta(s, c).unwrap().h2_norm_sq);
        evolve_relaxing(&s0, t, c, &ctrl, sc.t_end, sc.sampling(), &mut [&mut obs]).unwrap();
        sup
    };
    let quarter = tau(0.25);
    let cal = sup_eta(quarter) / (quarter.squared() * data_h4);
    for t in [tau(0.125), tau(0.0625)] {
        let sup = sup_eta(t);
        assert!(sup <= 25.0 * t.squared() * data_h4, "tau {}: {sup}", t.value());
        assert!(sup <= cal * t.squared() * data_h4, "tau {}: {sup} above calibrated bound", t.value());
    }
}
