//! Duality maps between finite-dimensional quantum systems.
//!
//! The central object is the canonical duality map
//! `Phi(A) = f(A) U (A^{+p} (+) conj(A)^{+q}) U^dag`, a spectrum-rescaling
//! generalisation of spectrum-preserving encodings. This crate builds and
//! composes such maps, the compatible map on density operators, and verifies
//! the three equivalent formulations of duality (measurement outcomes,
//! partition functions, entropies) numerically on concrete instances. It also
//! carries approximate dualities with controlled error propagation and the
//! classical 2D Ising Kramers-Wannier duality as a worked end-to-end example.
//!
//! The crate is `no_std` (with `alloc`); all IO, serialization and the CLI
//! harness live in the companion `dualis-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod approx;
pub mod duality;
pub mod equivalence;
pub mod error;
pub mod ising;
pub mod matrix;
pub mod opscore;
pub mod random;

pub use error::Error;
pub use matrix::{Complex64, ComplexMatrix};
pub use opscore::{DensityState, HermitianOperator, Projector, Spectrum};

/// `Result` alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
