//! Spectral laboratory for the 1-D linear Schrödinger equation and its
//! finite-difference space semi-discretization.
//!
//! The building blocks:
//!
//! - [`grid`]: periodic lattices, field containers, and the semi-discrete
//!   Fourier transform pair;
//! - [`dispersion`]: the continuous symbol `xi^2` and the lattice symbol
//!   `4 sin^2(xi h/2)/h^2`, their critical points, and quadratic Taylor
//!   models;
//! - [`wavepacket`]: truncated Gaussian initial data concentrated at a
//!   carrier wavenumber;
//! - [`bigrid`]: two-grid interpolation/projection operators and their
//!   Fourier weights;
//! - [`evolution`]: exact Fourier-multiplier propagation, fractional
//!   derivatives, and the quadratic-model solution split;
//! - [`analysis`]: packet metrics, band decomposition, space-time norms and
//!   local-smoothing functionals;
//! - [`predictor`]: closed-form predictions of how filtered packets split,
//!   move, spread and decay;
//! - [`io`]: plain-text snapshot output.
//!
//! Everything is pure and immutable after construction; values are safe to
//! share across threads.

// validation guards use `!(x > 0.0)` on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bigrid;
pub mod dispersion;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod io;
pub mod predictor;
pub mod wavepacket;

pub use error::{Error, Result};
pub use grid::{isdft, sdft, Grid, PhysicalField, SpectralField};
