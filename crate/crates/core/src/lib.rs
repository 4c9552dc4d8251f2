//! Numerical laboratory for rigidity phenomena of Hilbert-space contractions.
//!
//! The crate models unitaries and contractions in forms where powers have
//! closed-form or cheaply iterable expressions (spectral diagonals, shifts,
//! Koopman permutation operators, dense matrices, rescalings, direct sums),
//! and builds on top of them:
//!
//! * probe-weighted operator metrics and rigidity seminorms ([`metrics`]),
//! * discrete measures on the circle and their Fourier analysis ([`measures`]),
//! * periodic approximants that agree with a target power exactly ([`models`]),
//! * rigidity certificates, recurrence search, and density estimates
//!   ([`rigidity`]),
//! * one-parameter multiplication groups mirroring the discrete theory
//!   ([`semigroup`]).
//!
//! Everything is deterministic: randomness only enters through explicitly
//! seeded probe generation.

#![forbid(unsafe_code)]

pub mod error;
pub mod measures;
pub mod metrics;
pub mod models;
pub mod operator;
pub mod probe;
pub mod rigidity;
pub mod semigroup;
mod util;
pub mod vector;

pub use error::CoreError;
