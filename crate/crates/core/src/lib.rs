//! Numerical lab for the relaxing non-isentropic compressible Euler system
//! with damping on a periodic torus, and for its parabolic relaxed limit.
//!
//! Perturbation variables are `xi = p - p_bar`, `v = u / k1` and
//! `phi = S - S_bar`. The relaxing solver works in slow time and the
//! relaxed solver integrates the limit system directly; [`diagnostics`]
//! measures the distance between the two.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod params;
pub mod relaxed;
pub mod relaxing;
pub mod spectral;

pub use error::{Error, Result};
pub use params::{GasConstants, RelaxationParameter};
pub use relaxed::RelaxedState;
pub use relaxing::PerturbationState;
pub use spectral::{NormConvention, SpectralField, TorusGrid, VectorField};
