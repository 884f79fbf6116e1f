//! Manifold distance `eta`, energy functionals, layer estimates and the
//! analytic oracles the solvers are checked against.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{GasConstants, RelaxationParameter};
use crate::relaxed::{limit_velocity, relaxed_rhs, RelaxedState};
use crate::relaxing::{time_derivatives, PerturbationState, Rates};
use crate::spectral::{
    divergence, vector_sobolev_norm_sq, vector_sup_norm, NormConvention, SpectralField, VectorField,
};

/// Norm used for every `||eta||_{H^2}` value.
pub const ETA_NORM: NormConvention = NormConvention::FourierMultiplier;
/// Norm used for every energy functional.
pub const ENERGY_NORM: NormConvention = NormConvention::DerivativeSum;

#[derive(Debug, Clone)]
pub struct EtaSnapshot {
    pub t: f64,
    pub eta: VectorField,
    pub h2_norm_sq: f64,
    pub sup_norm: f64,
}

/// `eta = v + grad xi / (k1 rho)`, pointwise.
pub fn eta_field(s: &PerturbationState, c: &GasConstants) -> VectorField {
    let rho = s.density(c);
    s.xi
        .gradient()
        .iter()
        .zip(&s.vel)
        .map(|(g, v)| {
            let mut e = g.zip_map(&rho, |g, r| g / (c.k1 * r));
            e.axpy(1.0, v);
            e
        })
        .collect()
}

pub fn compute_eta(s: &PerturbationState, c: &GasConstants) -> Result<EtaSnapshot> {
    s.check_guards(c)?;
    let eta = eta_field(s, c);
    Ok(EtaSnapshot {
        t: s.t,
        h2_norm_sq: vector_sobolev_norm_sq(&eta, 2, ETA_NORM),
        sup_norm: vector_sup_norm(&eta),
        eta,
    })
}

/// Sup-norm defect of the damped transport equation satisfied by `eta`,
/// with `eta_t` assembled from `state_rhs` by the chain rule.
pub fn eta_residual(s: &PerturbationState, state_rhs: &Rates, tau: RelaxationParameter, c: &GasConstants) -> f64 {
    let inv_tau2 = 1.0 / tau.squared();
    let dim = s.vel.len();
    let rho = s.density(c);
    let p = s.xi.map(|x| x + c.p_bar);
    let inv_rho = rho.map(|r| 1.0 / r);
    let grad_xi = s.xi.gradient();
    let grad_xi_t = state_rhs.xi.gradient();
    let div_v = divergence(&s.vel);
    let grad_div_v = div_v.gradient();
    let grad_inv_rho = inv_rho.gradient();
    let grad_rho = rho.gradient();

    // rho_t through the equation of state
    let rho_t = {
        let q = state_rhs
            .xi
            .zip_map(&p, |xt, p| xt / (c.gamma * p))
            .zip_map(&state_rhs.phi, |a, ft| a - ft / c.gamma);
        &rho * &q
    };
    let eta = eta_field(s, c);

    let v_dot = |f: &[SpectralField]| {
        let mut out = &s.vel[0] * &f[0];
        for (vj, fj) in s.vel.iter().zip(f).skip(1) {
            out.axpy(1.0, &(vj * fj));
        }
        out
    };
    let v_grad_inv_rho = v_dot(&grad_inv_rho);
    let v_grad_rho = v_dot(&grad_rho);

    let mut worst: f64 = 0.0;
    for i in 0..dim {
        let n = rho.values().len();
        let grad_eta_i = eta[i].gradient();
        let grad_vj_i: Vec<SpectralField> = (0..dim).map(|j| s.vel[j].derivative(i, 1)).collect();
        for x in 0..n {
            let r = rho.values()[x];
            let dxi = grad_xi[i].values()[x];
            let eta_t = state_rhs.vel[i].values()[x] + grad_xi_t[i].values()[x] / (c.k1 * r)
                - rho_t.values()[x] * dxi / (c.k1 * r * r);
            let adv: f64 = (0..dim).map(|j| s.vel[j].values()[x] * grad_eta_i[j].values()[x]).sum();
            let lhs = eta_t + c.k1 * adv + inv_tau2 * eta[i].values()[x];

            let dv = div_v.values()[x];
            let grad_v_grad_xi: f64 = (0..dim)
                .map(|j| grad_vj_i[j].values()[x] * grad_xi[j].values()[x])
                .sum();
            let forcing = v_grad_inv_rho.values()[x] * dxi - grad_v_grad_xi / r - c.gamma / r * dxi * dv
                - c.gamma / r * p.values()[x] * grad_div_v[i].values()[x]
                + (v_grad_rho.values()[x] + r * dv) * dxi / (r * r);
            worst = worst.max((lhs - forcing).abs());
        }
    }
    worst
}

/// Energy functionals of the relaxing state (derivative-sum convention).
#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub t: f64,
    pub e_xi: f64,
    /// `E[tau v] = tau^2 E[v]`.
    pub e_tau_v: f64,
    pub e_v: f64,
    pub e_phi: f64,
    pub e_zeta: f64,
    pub e_x_xi: f64,
    pub f_family: Option<RelaxedEnergies>,
}

/// Energies of a relaxed state.
#[derive(Debug, Clone, Serialize)]
pub struct RelaxedEnergies {
    pub f_xi: f64,
    pub f_tilde_xi: f64,
    pub f_x_xi: f64,
    pub f_v: f64,
    pub f_phi: f64,
    pub f_zeta: f64,
}

fn norm(f: &SpectralField, s: u32) -> f64 {
    f.sobolev_norm_sq(s, ENERGY_NORM)
}

fn vnorm(v: &[SpectralField], s: u32) -> f64 {
    vector_sobolev_norm_sq(v, s, ENERGY_NORM)
}

/// Sum over `l <= 2`, `l + |alpha| <= 4` of `||d_t^l D^alpha f||^2`.
fn time_space_energy(f: &SpectralField, ft: &SpectralField, ftt: &SpectralField) -> f64 {
    norm(f, 4) + norm(ft, 3) + norm(ftt, 2)
}

/// `(zeta_t, zeta_tt)` from the equation of state and the rates of `(xi, phi)`.
fn density_rates(
    xi: &SpectralField,
    rho: &SpectralField,
    xi_t: &SpectralField,
    xi_tt: &SpectralField,
    phi_t: &SpectralField,
    phi_tt: &SpectralField,
    c: &GasConstants,
) -> (SpectralField, SpectralField) {
    let n = xi.values().len();
    let mut zt = Vec::with_capacity(n);
    let mut ztt = Vec::with_capacity(n);
    for j in 0..n {
        let p = xi.values()[j] + c.p_bar;
        let r = rho.values()[j];
        let (a, b) = (xi_t.values()[j], xi_tt.values()[j]);
        let (f1, f2) = (phi_t.values()[j], phi_tt.values()[j]);
        let q = a / (c.gamma * p) - f1 / c.gamma;
        let q_t = b / (c.gamma * p) - a * a / (c.gamma * p * p) - f2 / c.gamma;
        zt.push(r * q);
        ztt.push(r * q * q + r * q_t);
    }
    let g = xi.grid();
    (
        SpectralField::from_values(g, zt).expect("same grid"),
        SpectralField::from_values(g, ztt).expect("same grid"),
    )
}

pub fn energy_report(s: &PerturbationState, tau: RelaxationParameter, c: &GasConstants) -> Result<EnergyReport> {
    let (d1, d2) = time_derivatives(s, tau, c)?;
    let e_xi = time_space_energy(&s.xi, &d1.xi, &d2.xi);
    let e_v = vnorm(&s.vel, 4) + vnorm(&d1.vel, 3) + vnorm(&d2.vel, 2);
    let e_phi = time_space_energy(&s.phi, &d1.phi, &d2.phi);
    let rho = s.density(c);
    let zeta = rho.map(|r| r - c.rho_bar);
    let (zt, ztt) = density_rates(&s.xi, &rho, &d1.xi, &d2.xi, &d1.phi, &d2.phi, c);
    let e_zeta = time_space_energy(&zeta, &zt, &ztt);
    let e_x_xi = (e_xi - s.xi.l2_norm_sq()).max(0.0);
    Ok(EnergyReport {
        t: s.t,
        e_xi,
        e_tau_v: tau.squared() * e_v,
        e_v,
        e_phi,
        e_zeta,
        e_x_xi,
        f_family: None,
    })
}

/// Energies of a relaxed state, with `v` the limit velocity.
pub fn relaxed_energies(s: &RelaxedState, c: &GasConstants) -> Result<RelaxedEnergies> {
    let (xi_t, phi_t) = relaxed_rhs(s, c)?;
    let rho = s.density(c);
    let p = s.xi.map(|x| x + c.p_bar);
    let rho_t = {
        let q = xi_t
            .zip_map(&p, |a, p| a / (c.gamma * p))
            .zip_map(&phi_t, |a, f| a - f / c.gamma);
        &rho * &q
    };
    let v = limit_velocity(s, c);
    // v = -grad xi / (k1 rho)  =>  v_t = -grad xi_t / (k1 rho) + rho_t grad xi / (k1 rho^2)
    let v_t: VectorField = s
        .xi
        .gradient()
        .iter()
        .zip(xi_t.gradient())
        .map(|(g, gt)| {
            let n = g.values().len();
            let vals = (0..n)
                .map(|j| {
                    let r = rho.values()[j];
                    -gt.values()[j] / (c.k1 * r) + rho_t.values()[j] * g.values()[j] / (c.k1 * r * r)
                })
                .collect();
            SpectralField::from_values(g.grid(), vals).expect("same grid")
        })
        .collect();
    let zeta = rho.map(|r| r - c.rho_bar);
    let f_xi = norm(&s.xi, 4) + norm(&xi_t, 2);
    Ok(RelaxedEnergies {
        f_xi,
        f_tilde_xi: norm(&s.xi, 5) + norm(&xi_t, 3),
        f_x_xi: (f_xi - s.xi.l2_norm_sq()).max(0.0),
        f_v: vnorm(&v, 4) + vnorm(&v_t, 2),
        f_phi: norm(&s.phi, 4) + norm(&phi_t, 2),
        f_zeta: norm(&zeta, 4) + norm(&rho_t, 2),
    })
}

/// Roots of `tau^2 lambda^2 + lambda + k2^2 kappa^2 = 0`.
pub fn linear_mode_eigenvalues(kappa: f64, tau: RelaxationParameter, c: &GasConstants) -> [Complex64; 2] {
    let t2 = tau.squared();
    let disc = Complex64::new(1.0 - 4.0 * t2 * c.k2 * c.k2 * kappa * kappa, 0.0).sqrt();
    [(-1.0 + disc) / (2.0 * t2), (-1.0 - disc) / (2.0 * t2)]
}

/// Fourier amplitudes of one linear acoustic mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    pub xi: Complex64,
    /// Velocity amplitude per axis (purely longitudinal).
    pub vel: Vec<Complex64>,
}

/// Exact solution of the linearized relaxing system for the single mode
/// `k` (integer wavevector on a torus of period `length`), starting from
/// `xi_hat = amplitude`, `v_hat = 0`.
pub fn linear_mode_oracle(
    k: &[i64],
    length: f64,
    tau: RelaxationParameter,
    c: &GasConstants,
    amplitude: Complex64,
    t: f64,
) -> ModeAmplitudes {
    let k0 = 2.0 * std::f64::consts::PI / length;
    let kvec: Vec<f64> = k.iter().map(|&m| k0 * m as f64).collect();
    let kappa = kvec.iter().map(|x| x * x).sum::<f64>().sqrt();
    if kappa == 0.0 {
        return ModeAmplitudes {
            xi: amplitude,
            vel: vec![Complex64::new(0.0, 0.0); k.len()],
        };
    }
    let t2 = tau.squared();
    let i = Complex64::i();
    // d/dt (xi, w) = M (xi, w), w = longitudinal velocity amplitude
    let m12 = -i * c.k2 * kappa;
    let m21 = -i * c.k2 * kappa / t2;
    let m22 = Complex64::new(-1.0 / t2, 0.0);
    let mu = m22 * 0.5;
    // N = M - mu I has N^2 = delta I
    let n11 = -mu;
    let n22 = m22 - mu;
    let delta = mu * mu - (-(m12 * m21));
    let s = delta.sqrt();
    let st = s * t;
    let cosh = st.cosh();
    let sinh_over_s = if st.norm() < 1e-8 {
        Complex64::new(t, 0.0) * (1.0 + st * st / 6.0)
    } else {
        st.sinh() / s
    };
    let e = (mu * t).exp();
    let xi = e * (cosh + sinh_over_s * n11) * amplitude;
    let w = e * (sinh_over_s * m21) * amplitude;
    let _ = n22;
    ModeAmplitudes {
        xi,
        vel: kvec.iter().map(|kc| w * (kc / kappa)).collect(),
    }
}

/// Decay factor `e^{-k2^2 |k|^2 t}` of a linear heat mode of the relaxed system.
pub fn heat_mode_factor(k: &[i64], length: f64, c: &GasConstants, t: f64) -> f64 {
    let k0 = 2.0 * std::f64::consts::PI / length;
    let k2: f64 = k.iter().map(|&m| (k0 * m as f64).powi(2)).sum();
    (-c.k2 * c.k2 * k2 * t).exp()
}

/// Leading-order initial-layer correction `eta0 e^{-z}` at fast time `z = t / tau^2`.
pub fn layer_profile_oracle(eta0: &[SpectralField], z: f64) -> Result<VectorField> {
    if !(z >= 0.0) {
        return Err(Error::param("z", format!("{z} must be >= 0")));
    }
    let f = (-z).exp();
    Ok(eta0.iter().map(|e| e.scale(f)).collect())
}

/// Samples needed before a decay-rate fit is reported.
pub const MIN_FIT_SAMPLES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    pub tau: f64,
    pub eta0_norm: f64,
    pub trajectory: Vec<(f64, f64)>,
    pub fitted_rate: Option<f64>,
    pub t_star: Option<f64>,
    pub plateau: f64,
    pub crossed: bool,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Layer width and decay rate of a sampled norm trajectory starting at `t = 0`.
///
/// The plateau is the median of the final quartile; `t_star` is the first
/// sample after `t = 0` at or below `max(threshold_ratio * value(0), 4 * plateau)`,
/// provided `value(0)` starts above that level;
/// the rate is `-d ln(value)/dt` fitted over the leading samples that stay at
/// or above `10 * plateau`.
pub fn estimate_layer(traj: &[(f64, f64)], tau: RelaxationParameter, threshold_ratio: f64) -> Result<LayerReport> {
    if !(threshold_ratio > 0.0 && threshold_ratio < 1.0) {
        return Err(Error::param("threshold_ratio", format!("{threshold_ratio} not in (0, 1)")));
    }
    if traj.is_empty() {
        return Err(Error::param("trajectory", "empty"));
    }
    if traj.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::param("trajectory", "sample times must increase"));
    }
    let eta0 = traj[0].1;
    let n = traj.len();
    let tail_len = n.div_ceil(4);
    let plateau = median(traj[n - tail_len..].iter().map(|p| p.1).collect());
    let threshold = (threshold_ratio * eta0).max(4.0 * plateau);
    // a trajectory that starts at or below the threshold has no layer to cross
    let t_star = if eta0 > threshold {
        traj.iter().skip(1).find(|p| p.1 <= threshold).map(|p| p.0)
    } else {
        None
    };

    let window: Vec<&(f64, f64)> = traj
        .iter()
        .take_while(|p| p.1 >= 10.0 * plateau && p.1 > 0.0)
        .collect();
    let fitted_rate = if window.len() >= MIN_FIT_SAMPLES {
        let x: Vec<f64> = window.iter().map(|p| p.0).collect();
        let y: Vec<f64> = window.iter().map(|p| p.1.ln()).collect();
        Some(-linear_fit(&x, &y).0)
    } else {
        None
    };
    Ok(LayerReport {
        tau: tau.value(),
        eta0_norm: eta0,
        trajectory: traj.to_vec(),
        fitted_rate,
        t_star,
        plateau,
        crossed: t_star.is_some(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceFit {
    /// Slope of `ln(error)` against `ln(tau)`.
    pub rate: f64,
    /// `ln(e_i / e_{i+1}) / ln(tau_i / tau_{i+1})` for consecutive pairs.
    pub pairwise: Vec<f64>,
    /// `log2(e_i / e_{i+1})` for consecutive pairs.
    pub log2_ratios: Vec<f64>,
}

pub fn convergence_fit(errors: &[(f64, f64)]) -> Result<ConvergenceFit> {
    if errors.len() < 2 {
        return Err(Error::param("errors", "need at least two (tau, error) pairs"));
    }
    if errors.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::param("errors", "tau must be strictly decreasing"));
    }
    if errors.iter().any(|e| !(e.1 > 0.0) || !(e.0 > 0.0)) {
        return Err(Error::param("errors", "tau and errors must be positive"));
    }
    let x: Vec<f64> = errors.iter().map(|e| e.0.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.1.ln()).collect();
    let (rate, _) = linear_fit(&x, &y);
    let pairwise = errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect();
    let log2_ratios = errors.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect();
    Ok(ConvergenceFit {
        rate,
        pairwise,
        log2_ratios,
    })
}
