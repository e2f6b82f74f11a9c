//! Parameter sets of the packaged experiments.

use nalgebra::DMatrix;

use super::{BathSpec, DiscreteMode, InitialSystemDensity, OpenSystem, SpectralChannel, SystemModel, UnitSystem, WidthRule};
use crate::{Result, C64};

pub const QUBIT_DETUNING: f64 = 50.0;
pub const QUBIT_TUNNELING: f64 = 10.0;
pub const QUBIT_LAMBDA: f64 = 50.0;
pub const QUBIT_OMEGA_C: f64 = 100.0;

pub const WEAK_GAP: f64 = 100.0;
pub const WEAK_TUNNELING: f64 = 10.0;
pub const WEAK_LAMBDA: f64 = 1.0;
pub const WEAK_OMEGA_C: f64 = 53.08;
pub const WEAK_TEMPERATURE: f64 = 300.0;

pub const SINGLE_MODE_OMEGA: f64 = 500.0;
pub const SINGLE_MODE_LAMBDA: f64 = 25.0;
pub const SINGLE_MODE_TEMPERATURE: f64 = 300.0;

/// Qubit with ε = 50, Δ = 10 cm⁻¹ in a zero-temperature Drude-Lorentz bath
/// (λ = 50, ω_c = 100 cm⁻¹), started in (|↑⟩ + |↓⟩)/√2.
pub fn qubit_decoherence() -> Result<OpenSystem> {
    qubit_decoherence_windowed(0.0, f64::INFINITY)
}

/// As [`qubit_decoherence`] with the bath restricted to [lo, hi].
pub fn qubit_decoherence_windowed(lo: f64, hi: f64) -> Result<OpenSystem> {
    let units = UnitSystem::default();
    let system = SystemModel::qubit(QUBIT_DETUNING, QUBIT_TUNNELING)?;
    let bath = BathSpec::new(
        vec![SpectralChannel::windowed_drude_lorentz(QUBIT_LAMBDA, QUBIT_OMEGA_C, lo, hi)],
        0.0,
        WidthRule::GroundState,
    )?;
    let initial = InitialSystemDensity::pure(&[C64::ONE, C64::ONE])?;
    OpenSystem::new(units, system, bath, initial)
}

/// Donor/acceptor pair with a 100 cm⁻¹ gap, Δ = 10 cm⁻¹, each state coupled to its
/// own weak Drude-Lorentz bath at 300 K. The initial state is the equal
/// superposition, which gives ρ^(2,1)(0) = `coherence` = 0.5.
pub fn weak_coupling() -> Result<OpenSystem> {
    let units = UnitSystem::default();
    let couplings = DMatrix::from_row_slice(
        2,
        2,
        &[C64::ZERO, C64::new(WEAK_TUNNELING, 0.0), C64::new(WEAK_TUNNELING, 0.0), C64::ZERO],
    );
    let system = SystemModel::new(vec![0.5 * WEAK_GAP, -0.5 * WEAK_GAP], couplings, vec![vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let ch = SpectralChannel::drude_lorentz(WEAK_LAMBDA, WEAK_OMEGA_C);
    let bath = BathSpec::new(vec![ch.clone(), ch], WEAK_TEMPERATURE, WidthRule::Thermal)?;
    let initial = InitialSystemDensity::pure(&[C64::ONE, C64::ONE])?;
    OpenSystem::new(units, system, bath, initial)
}

/// Donor (state 0) and acceptor (state 1) with the acceptor coupled to one
/// 500 cm⁻¹ mode of reorganization 25 cm⁻¹, resonant gap ε_1 − ε_2 = ħω_0,
/// thermal at 300 K, started on the donor.
pub fn single_mode(tunneling: f64) -> Result<OpenSystem> {
    let units = UnitSystem::default();
    let t = C64::new(tunneling, 0.0);
    let couplings = DMatrix::from_row_slice(2, 2, &[C64::ZERO, t, t, C64::ZERO]);
    let system = SystemModel::new(vec![SINGLE_MODE_OMEGA, 0.0], couplings, vec![vec![0.0], vec![1.0]])?;
    let mode = DiscreteMode::from_reorganization(SINGLE_MODE_OMEGA, SINGLE_MODE_LAMBDA, &units);
    let bath = BathSpec::new(
        vec![SpectralChannel::Discrete { modes: vec![mode] }],
        SINGLE_MODE_TEMPERATURE,
        WidthRule::Thermal,
    )?;
    let initial = InitialSystemDensity::population(0, 2)?;
    OpenSystem::new(units, system, bath, initial)
}
