//! Observables of single environmental modes: Weyl symbols of Fock-space
//! projectors, closed-form Gaussian phase-space integrals, per-mode reduced
//! density matrices and their entanglement entropy.

mod gaussian;
mod mode;
mod poly;
mod weyl;

pub use gaussian::{gaussian_phase_integral, GaussianForm};
pub use mode::{entropy, mode_rdm, ModeProbe, ModeRDM, DEFAULT_N_MAX, DEFAULT_PROBE_SLICE, NEGATIVE_EIGENVALUE_LIMIT};
pub use poly::Poly2;
pub use weyl::{weyl_coefficients, weyl_projection, WeylProjector};
