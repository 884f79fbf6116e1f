//! Real fields on the periodic d-torus and their Fourier representation.
//!
//! Grid points are stored row-major: axis 0 is the slowest-varying index.
//! Fourier coefficients are normalized so that `f(x) = sum_k c_k e^{i k.x}`,
//! i.e. `c_k = (1/N) sum_j f_j e^{-i k.x_j}`. With this convention
//! `||f||^2_{L^2} = vol * sum_k |c_k|^2`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Highest derivative order (and Sobolev index) supported.
pub const MAX_ORDER: u32 = 5;
/// Largest supported number of grid points (`512^3`).
pub const MAX_POINTS: usize = 1 << 27;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    n_per_dim: usize,
    length: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, n_per_dim: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::param("dim", format!("{dim} not in 1..=3")));
        }
        if n_per_dim < 16 || !n_per_dim.is_power_of_two() {
            return Err(Error::param(
                "n_per_dim",
                format!("{n_per_dim} is not a power of two >= 16"),
            ));
        }
        match n_per_dim.checked_pow(dim as u32) {
            Some(total) if total <= MAX_POINTS => {}
            _ => {
                return Err(Error::param(
                    "n_per_dim",
                    format!("{n_per_dim}^{dim} exceeds {MAX_POINTS} grid points"),
                ))
            }
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::param("length", format!("{length} must be > 0")));
        }
        Ok(TorusGrid {
            dim,
            n_per_dim,
            length,
        })
    }

    /// `dim`-torus of period 2π.
    pub fn periodic(dim: usize, n_per_dim: usize) -> Result<Self> {
        Self::new(dim, n_per_dim, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_per_dim(&self) -> usize {
        self.n_per_dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n_per_dim.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_per_dim as f64
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    fn stride(&self, axis: usize) -> usize {
        self.n_per_dim.pow((self.dim - 1 - axis) as u32)
    }

    /// Per-axis grid indices of a flat index.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.n_per_dim;
            flat /= self.n_per_dim;
        }
        idx
    }

    /// Coordinates of a flat grid index.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let dx = self.dx();
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = idx[axis] as f64 * dx;
        }
        x
    }

    /// Signed integer mode number of a per-axis index. The Nyquist index
    /// maps to `+n/2`.
    pub fn mode_number(&self, j: usize) -> i64 {
        let n = self.n_per_dim as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    fn is_nyquist(&self, j: usize) -> bool {
        j == self.n_per_dim / 2
    }

    /// Angular wavenumber scale 2π/L.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Integer wavevector of a flat spectral index.
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let idx = self.unravel(flat);
        let mut k = [0; 3];
        for axis in 0..self.dim {
            k[axis] = self.mode_number(idx[axis]);
        }
        k
    }

    /// Flat spectral index of an integer wavevector (components taken mod n).
    pub fn spectral_index(&self, k: &[i64]) -> usize {
        let n = self.n_per_dim as i64;
        let mut flat = 0;
        for axis in 0..self.dim {
            let m = k.get(axis).copied().unwrap_or(0).rem_euclid(n) as usize;
            flat = flat * self.n_per_dim + m;
        }
        flat
    }

    /// 2/3-rule cutoff on |mode number|.
    pub fn dealias_cutoff(&self) -> f64 {
        self.n_per_dim as f64 / 3.0
    }

    fn fft_in_place(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n_per_dim;
        let fft = plan(n, inverse);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for axis in 0..self.dim {
            let stride = self.stride(axis);
            let block = stride * n;
            for outer in (0..data.len()).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (m, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + m * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (m, slot) in line.iter().enumerate() {
                        data[base + m * stride] = *slot;
                    }
                }
            }
        }
    }

    /// Normalized forward transform of real grid values.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft_in_place(&mut data, false);
        let scale = 1.0 / self.len() as f64;
        for c in &mut data {
            *c *= scale;
        }
        data
    }

    /// Inverse transform; the imaginary part is discarded.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut data = coeffs.to_vec();
        self.fft_in_place(&mut data, true);
        data.into_iter().map(|c| c.re).collect()
    }
}

/// Which weights define the discrete H^s norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    /// `sum_{|alpha| <= s} ||D^alpha f||^2`, one term per multi-index.
    DerivativeSum,
    /// `sum_k (1 + |k|^2)^s |c_k|^2 vol`.
    FourierMultiplier,
}

impl NormConvention {
    pub fn label(self) -> &'static str {
        match self {
            NormConvention::DerivativeSum => "derivative-sum",
            NormConvention::FourierMultiplier => "fourier-multiplier (1+|k|^2)^s",
        }
    }
}

/// Sum over multi-indices `|alpha| <= s` in `dim` variables of `prod_i w_i^{alpha_i}`.
fn multi_index_weight(w: &[f64], s: u32) -> f64 {
    // Complete homogeneous symmetric polynomials h_m(w), accumulated for m <= s.
    let mut h = vec![0.0; s as usize + 1];
    h[0] = 1.0;
    for &wi in w {
        for m in 1..=s as usize {
            h[m] += wi * h[m - 1];
        }
    }
    h.iter().sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl SpectralField {
    pub fn zeros(grid: &TorusGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &TorusGrid, c: f64) -> Self {
        SpectralField {
            grid: *grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn from_values(grid: &TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(SpectralField {
            grid: *grid,
            values,
        })
    }

    /// Samples `f` at every grid point; `f` receives the coordinate slice of length `dim`.
    pub fn from_fn(grid: &TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|j| {
                let x = grid.point(j);
                f(&x[..grid.dim()])
            })
            .collect();
        SpectralField {
            grid: *grid,
            values,
        }
    }

    pub fn from_coeffs(grid: &TorusGrid, coeffs: &[Complex64]) -> Self {
        SpectralField {
            grid: *grid,
            values: grid.inverse(coeffs),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn coeffs(&self) -> Vec<Complex64> {
        self.grid.forward(&self.values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        SpectralField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        SpectralField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &Self) {
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
    }

    pub fn scale_in_place(&mut self, a: f64) {
        for x in &mut self.values {
            *x *= a;
        }
    }

    fn spectral_multiply(&self, mult: impl Fn(&[i64; 3], usize) -> Complex64) -> Self {
        let mut c = self.coeffs();
        for (flat, ck) in c.iter_mut().enumerate() {
            let k = self.grid.wavevector(flat);
            *ck *= mult(&k, flat);
        }
        Self::from_coeffs(&self.grid, &c)
    }

    /// Spectral derivative of the given order along `axis`. Odd orders zero the
    /// Nyquist mode along that axis.
    pub fn derivative(&self, axis: usize, order: u32) -> Self {
        assert!(axis < self.grid.dim, "axis {axis} out of range");
        assert!(order <= MAX_ORDER, "derivative order {order} > {MAX_ORDER}");
        if order == 0 {
            return self.clone();
        }
        let k0 = self.grid.k0();
        let grid = self.grid;
        self.spectral_multiply(|k, flat| {
            let j = grid.unravel(flat)[axis];
            if order % 2 == 1 && grid.is_nyquist(j) {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(0.0, k0 * k[axis] as f64).powu(order)
        })
    }

    pub fn gradient(&self) -> Vec<SpectralField> {
        (0..self.grid.dim).map(|a| self.derivative(a, 1)).collect()
    }

    pub fn laplacian(&self) -> Self {
        let k0 = self.grid.k0();
        let dim = self.grid.dim;
        self.spectral_multiply(|k, _| {
            let k2: f64 = k[..dim].iter().map(|&m| (k0 * m as f64).powi(2)).sum();
            Complex64::new(-k2, 0.0)
        })
    }

    /// Zeroes every coefficient with some `|k_i| > n/3`.
    pub fn dealias(&self) -> Self {
        let cutoff = self.grid.dealias_cutoff();
        let dim = self.grid.dim;
        self.spectral_multiply(|k, _| {
            if k[..dim].iter().any(|&m| (m.abs() as f64) > cutoff) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    /// Pointwise product followed by 2/3-rule truncation.
    pub fn mul_dealiased(&self, other: &Self) -> Self {
        (self * other).dealias()
    }

    /// Multiplies every coefficient by `e^{-rate |k|^2 h}` (exact heat propagator).
    pub fn heat_propagate(&self, diffusivity: f64, h: f64) -> Self {
        let k0 = self.grid.k0();
        let dim = self.grid.dim;
        self.spectral_multiply(|k, _| {
            let k2: f64 = k[..dim].iter().map(|&m| (k0 * m as f64).powi(2)).sum();
            Complex64::new((-diffusivity * k2 * h).exp(), 0.0)
        })
    }

    /// `||f||^2_{L^2}` via Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        let vol = self.grid.volume();
        vol * self.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// `||f||^2_{L^2}` by the rectangle rule on grid values.
    pub fn l2_norm_sq_quadrature(&self) -> f64 {
        let w = self.grid.volume() / self.grid.len() as f64;
        w * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn sobolev_norm_sq(&self, s: u32, convention: NormConvention) -> f64 {
        assert!(s <= MAX_ORDER, "Sobolev index {s} > {MAX_ORDER}");
        let k0 = self.grid.k0();
        let dim = self.grid.dim;
        let vol = self.grid.volume();
        let c = self.coeffs();
        let mut acc = 0.0;
        let mut w = [0.0; 3];
        for (flat, ck) in c.iter().enumerate() {
            let k = self.grid.wavevector(flat);
            for axis in 0..dim {
                w[axis] = (k0 * k[axis] as f64).powi(2);
            }
            let weight = match convention {
                NormConvention::DerivativeSum => multi_index_weight(&w[..dim], s),
                NormConvention::FourierMultiplier => (1.0 + w[..dim].iter().sum::<f64>()).powi(s as i32),
            };
            acc += weight * ck.norm_sqr();
        }
        vol * acc
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: &SpectralField) -> SpectralField {
        self.zip_map(rhs, |a, b| a * b)
    }
}

impl Mul<&SpectralField> for f64 {
    type Output = SpectralField;
    fn mul(self, rhs: &SpectralField) -> SpectralField {
        rhs.scale(self)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

/// Vector-valued field: one component per spatial axis.
pub type VectorField = Vec<SpectralField>;

pub fn divergence(v: &[SpectralField]) -> SpectralField {
    let mut out = v[0].derivative(0, 1);
    for (axis, comp) in v.iter().enumerate().skip(1) {
        out.axpy(1.0, &comp.derivative(axis, 1));
    }
    out
}

/// `sum_i a_i b_i`, pointwise.
pub fn dot(a: &[SpectralField], b: &[SpectralField]) -> SpectralField {
    let mut out = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        out.axpy(1.0, &(x * y));
    }
    out
}

pub fn vector_l2_norm_sq(v: &[SpectralField]) -> f64 {
    v.iter().map(SpectralField::l2_norm_sq).sum()
}

pub fn vector_sobolev_norm_sq(v: &[SpectralField], s: u32, convention: NormConvention) -> f64 {
    v.iter().map(|c| c.sobolev_norm_sq(s, convention)).sum()
}

/// Largest pointwise Euclidean magnitude of a vector field.
pub fn vector_sup_norm(v: &[SpectralField]) -> f64 {
    let n = v[0].values().len();
    (0..n)
        .map(|j| v.iter().map(|c| c.values()[j].powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}
