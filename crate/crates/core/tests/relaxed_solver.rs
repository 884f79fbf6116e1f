use relaxlab::diagnostics::heat_mode_factor;
use relaxlab::harness::{Config, Scenario};
use relaxlab::relaxed::{evolve_relaxed, limit_velocity, RelaxedState};
use relaxlab::relaxing::Sampling;
use relaxlab::spectral::{SpectralField, TorusGrid};
use relaxlab::GasConstants;

fn smooth(g: &TorusGrid, eps: f64) -> RelaxedState {
    RelaxedState {
        t: 0.0,
        xi: SpectralField::from_fn(g, |x| eps * (x[0].sin() + 0.4 * (2.0 * x[0] + 0.7).cos())),
        phi: SpectralField::from_fn(g, |x| 0.4 * eps * (x[0] - 0.2).cos()),
    }
}

fn distance(a: &RelaxedState, b: &RelaxedState) -> f64 {
    ((&a.xi - &b.xi).l2_norm_sq() + (&a.phi - &b.phi).l2_norm_sq()).sqrt()
}

#[test]
fn entropy_range_at_defaults() {
    let sc = Scenario::from_config(&Config::default_ill_prepared()).unwrap();
    let s0 = sc.relaxed_initial_state();
    let (lo, hi) = (s0.phi.min(), s0.phi.max());
    let mut growth: f64 = 0.0;
    let mut obs = |s: &RelaxedState| growth = growth.max(s.phi.max() - hi).max(lo - s.phi.min());
    evolve_relaxed(&s0, &sc.constants, sc.step.relaxed_dt, sc.t_end, sc.sampling(), &mut [&mut obs]).unwrap();
    assert!(growth <= 1e-6 * s0.phi.sup_norm(), "range grew by {growth}");
}

#[test]
fn zero_entropy_stays_zero() {
    let g = TorusGrid::periodic(1, 128).unwrap();
    let c = GasConstants::desk_default();
    let mut s0 = smooth(&g, 0.05);
    s0.phi = SpectralField::zeros(&g);
    let mut worst: f64 = 0.0;
    let mut obs = |s: &RelaxedState| worst = worst.max(s.phi.sup_norm());
    evolve_relaxed(&s0, &c, 2.5e-4, 0.5, Sampling::every(0.05), &mut [&mut obs]).unwrap();
    assert!(worst <= 1e-12);
}

#[test]
fn mean_constant_in_linear_regime() {
    let g = TorusGrid::periodic(1, 64).unwrap();
    let c = GasConstants::desk_default();
    let mut s0 = smooth(&g, 1e-6);
    s0.xi = s0.xi.map(|x| x + 2e-6);
    let end = evolve_relaxed(&s0, &c, 1e-3, 0.5, Sampling::end_only(), &mut []).unwrap();
    assert!((end.xi.mean() - s0.xi.mean()).abs() <= 1e-10);
}

#[test]
fn second_order_self_convergence() {
    let g = TorusGrid::periodic(1, 64).unwrap();
    let c = GasConstants::desk_default();
    let s0 = smooth(&g, 0.1);
    let run = |dt: f64| evolve_relaxed(&s0, &c, dt, 0.2, Sampling::end_only(), &mut []).unwrap();
    let (a, b, d) = (run(4e-3), run(2e-3), run(1e-3));
    let ratio = distance(&a, &b) / distance(&b, &d);
    assert!((3.4..=4.6).contains(&ratio), "ratio {ratio}");
}

#[test]
fn heat_mode_decay_to_point_one() {
    let g = TorusGrid::periodic(1, 64).unwrap();
    let c = GasConstants::desk_default();
    for k in [1i64, 3] {
        let s0 = RelaxedState {
            t: 0.0,
            xi: SpectralField::from_fn(&g, |x| 1e-6 * (k as f64 * x[0]).sin()),
            phi: SpectralField::zeros(&g),
        };
        let end = evolve_relaxed(&s0, &c, 2.5e-4, 0.1, Sampling::end_only(), &mut []).unwrap();
        let idx = g.spectral_index(&[k]);
        let factor = end.xi.coeffs()[idx].norm() / s0.xi.coeffs()[idx].norm();
        let expect = heat_mode_factor(&[k], g.length(), &c, 0.1);
        assert!((factor / expect - 1.0).abs() <= 1e-5, "k = {k}: {factor} vs {expect}");
    }
}

#[test]
fn repeated_runs_bit_identical() {
    let g = TorusGrid::periodic(2, 32).unwrap();
    let c = GasConstants::desk_default();
    let s0 = RelaxedState {
        t: 0.0,
        xi: SpectralField::from_fn(&g, |x| 0.05 * x[0].sin() * x[1].cos()),
        phi: SpectralField::from_fn(&g, |x| 0.02 * (x[0] + x[1]).cos()),
    };
    let a = evolve_relaxed(&s0, &c, 1e-3, 0.05, Sampling::end_only(), &mut []).unwrap();
    let b = evolve_relaxed(&s0, &c, 1e-3, 0.05, Sampling::end_only(), &mut []).unwrap();
    assert_eq!(a, b);
}

#[test]
fn limit_velocity_residual_in_two_dimensions() {
    let g = TorusGrid::periodic(2, 32).unwrap();
    let c = GasConstants::desk_default();
    let s = RelaxedState {
        t: 0.0,
        xi: SpectralField::from_fn(&g, |x| 0.07 * (x[0] + 0.2).sin() + 0.03 * (2.0 * x[1]).cos()),
        phi: SpectralField::from_fn(&g, |x| 0.05 * (x[0] - x[1]).sin()),
    };
    let v = limit_velocity(&s, &c);
    let rho = s.density(&c);
    for (vi, gi) in v.iter().zip(s.xi.gradient()) {
        let n = vi.values().len();
        for j in 0..n {
            let r = rho.values()[j];
            let g = gi.values()[j];
            let res = c.k2 * g + vi.values()[j] - (1.0 / c.rho_bar - 1.0 / r) * g / c.k1;
            assert!(res.abs() <= 1e-12);
        }
    }
}
