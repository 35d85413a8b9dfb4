//! Fundamental solution of the one-dimensional space-time fractional wave
//! equation.
//!
//! For order `a` between 1 and 2 the equation interpolates between ordinary
//! diffusion and the classical wave equation, and its fundamental solution
//! `G_a(x, t)` is a spatial probability density that propagates damped
//! pulses. This crate evaluates `G_a` in closed form, cross-checks that
//! closed form against the convergent power series and the Fourier-integral
//! representation, and computes the derived quantities that characterise the
//! damped waves: one-sided moments, location of the maximum, the maximum
//! product invariant, and the phase / group / pulse / centrovelocities.
//!
//! Module layout:
//!
//! * [`special`] — sin/cos with exact pi-argument reduction, reciprocal
//!   gamma, and the Mittag-Leffler function on the negative axis,
//! * [`quad`] — adaptive Gauss-Kronrod quadrature on finite and
//!   semi-infinite intervals, plus the kernel-specific integrals,
//! * [`green`] — the fundamental solution itself in its three
//!   representations,
//! * [`moments`] — one-sided fractional moments and velocity definitions,
//! * [`extrema`] — location and height of the maximum, the product
//!   invariant, and order recovery from it.

pub mod error;
pub mod extrema;
pub mod green;
pub mod moments;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
