//! Perturbation theory under the truncated Wigner approximation for a discrete
//! quantum system coupled to a harmonic environment.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds units, Hamiltonians, baths and initial states.
//! * [`corr`] evaluates bath correlation kernels and influence phases.
//! * [`pathways`] enumerates Liouville pathways and their weights.
//! * [`engine`] runs the nested time quadrature and assembles the series.
//! * [`envmode`] computes reduced density matrices of single bath modes.
//! * [`oracle`] is a dense exact propagator for small discrete baths.
//! * [`cli`] drives the packaged experiments and writes CSV/SVG output.
//!
//! Energies are in cm⁻¹, times in fs and bath coordinates are mass weighted.

pub mod cli;
pub mod corr;
pub mod engine;
pub mod envmode;
mod error;
pub mod model;
pub mod oracle;
pub mod pathways;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
