//! Spectral estimation of Pauli-sum Hamiltonians from the time series
//! `u(t) = Tr(exp(-iHt))`.
//!
//! Two estimators are provided side by side:
//!
//! * a Hadamard test on a maximally mixed register, simulated at gate level
//!   (with hardware-oriented synthesis of the controlled evolution, routing
//!   onto a coupling graph, noise channels and a calibration-based fidelity
//!   estimate), and
//! * the classical stochastic baseline that averages autocorrelations of
//!   random-phase states.
//!
//! Both produce [`protocol::TimeSeries`] values that [`spectral`] turns into
//! power spectra and eigenvalue estimates. [`operator::diagonalize`] is the
//! exact reference used for verification throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
mod dense;
mod error;
pub mod operator;
pub mod protocol;
pub mod seed;
pub mod simulator;
pub mod spectral;
pub mod synthesis;

pub use error::{Error, Result};

/// Complex scalar used by every backend.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix used by every backend.
pub type CMatrix = nalgebra::DMatrix<C64>;
