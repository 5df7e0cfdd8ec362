//! Simulation and search toolkit for robust two-level control with chirped,
//! detuned Gaussian pulses.
//!
//! The crate is organized around the stages of a robustness study:
//!
//! * [`pulse`] — frequency-domain pulse definition and its analytic
//!   time-domain envelope, chirp, and Rabi frequency, plus a discrete-Fourier
//!   synthesis oracle for cross-checking the closed forms.
//! * [`dynamics`] — unitary integration of the driven two-level Schrödinger
//!   equation, populations, and Bloch coordinates.
//! * [`robustness`] — fidelity under pulse-amplitude fluctuation and the
//!   curvature of the fidelity at zero fluctuation, by finite differences and
//!   by a perturbative operator integral.
//! * [`geometry`] — area-parameterized final-state trajectories on the Bloch
//!   sphere, endpoint speeds, and loop/cusp/unlooped classification.
//! * [`explorer`] — parameter-space maps, Gaussian-ensemble averaging,
//!   robust-point search, robust-line continuation, and logistic fits.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is
//! enabled; all operations are pure functions over immutable inputs and are
//! safe to run concurrently from a host application.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod explorer;
pub mod geometry;
pub mod linalg;
pub mod pulse;
pub mod robustness;

pub use error::Error;
pub use linalg::{Mat2, C64};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
