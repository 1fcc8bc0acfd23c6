//! Numerics for a single-photon pulse reflecting off an open, lossy cavity
//! loaded with two dipole-coupled quantum emitters.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`emitters`]: the two-emitter eigensystem and classical-pulse preparation
//!   of the dark or bright state,
//! * [`pulse`]: the discretized mode grid of the external beam and Gaussian
//!   single-photon wavepackets,
//! * [`analytic`]: closed-form reflection coefficient, critical coupling and
//!   pure-dephasing noise estimates,
//! * [`dynamics`]: direct time-domain integration of the amplitude equations,
//!   with optional Langevin noise, used as an independent check of [`analytic`],
//! * [`polarization`]: single-photon polarization algebra and the detection
//!   statistics of the reflected photon.
//!
//! All quantities are dimensionless with `ħ = 1`; rates are normally quoted in
//! units of the cavity outcoupling rate `κ`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analytic;
pub mod dynamics;
pub mod emitters;
mod error;
pub mod params;
pub mod polarization;
pub mod pulse;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::SystemParams;

/// Margin used to turn "much less than" into a testable inequality: `a ≪ b`
/// is read as `MUCH_LESS_MARGIN * a < b`.
pub const MUCH_LESS_MARGIN: f64 = 5.0;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
