//! Discrete-time quantum walk on a line with a single phase impurity at the
//! origin.
//!
//! The crate is organised around the one-step operator `W = T C P`
//! (impurity phase, then coin rotation, then conditional shift):
//!
//! * [`walk`] holds the exact state representation and unitary evolution,
//!   together with the sublattice and reflection operators.
//! * [`spectral`] diagonalizes the step operator on a finite ring and is used
//!   as an independent check of the analytic solver.
//! * [`bound`] solves the impurity bound states with transfer matrices and
//!   derives localisation lengths, overlaps and long-time distributions.
//! * [`localisation`] averages evolved distributions over initial coins and
//!   computes participation ratios.
//! * [`open_system`] traces out position and quantifies the non-Markovianity
//!   of the coin (trace-distance and concurrence based measures).
//! * [`cli`] drives parameter sweeps and writes CSV output.

pub mod bound;
pub mod cli;
pub mod error;
pub mod localisation;
pub mod open_system;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Wrap an angle into the principal branch `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}
