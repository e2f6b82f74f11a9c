//! Domain types: units, system Hamiltonian, harmonic bath and initial state.

mod bath;
mod io;
pub mod presets;
mod system;
mod units;

pub use bath::{
    discretize_channel, drude_lorentz, drude_lorentz_h, suppression_cutoffs, windowed_reorganization, BathSpec,
    DiscreteMode, DEFAULT_DISCRETE_MODES, DEFAULT_OMEGA_MAX_FACTOR, DiscretizationScheme, SpectralChannel, WidthRule,
};
pub use io::{load_model, parse_model, ModelFile};
pub use system::{diagonalize_system, EigenBasisModel, InitialSystemDensity, SystemModel};
pub use units::{UnitSystem, HBAR_CM_FS, KB_CM_K};

use crate::error::validation;
use crate::Result;

/// Everything needed to run the perturbative engines.
#[derive(Clone, Debug)]
pub struct OpenSystem {
    pub units: UnitSystem,
    pub system: SystemModel,
    pub bath: BathSpec,
    pub initial: InitialSystemDensity,
}

impl OpenSystem {
    pub fn new(units: UnitSystem, system: SystemModel, bath: BathSpec, initial: InitialSystemDensity) -> Result<Self> {
        bath.validate()?;
        if system.channel_count() != bath.channels.len() {
            return validation(format!(
                "system couples to {} channels but the bath defines {}",
                system.channel_count(),
                bath.channels.len()
            ));
        }
        if initial.dimension() != system.dimension() {
            return validation("initial density dimension differs from the system dimension");
        }
        Ok(Self { units, system, bath, initial })
    }

    pub fn dimension(&self) -> usize {
        self.system.dimension()
    }

    pub fn channel_reorganization(&self) -> Vec<f64> {
        self.bath.channel_reorganization(&self.units)
    }

    /// Vertical energies ε̃_n = ε_n + Σ_c g_n² λ_c.
    pub fn vertical_energies(&self) -> Vec<f64> {
        self.system.vertical_energies(&self.channel_reorganization())
    }

    pub fn eigenbasis(&self) -> Result<EigenBasisModel> {
        diagonalize_system(&self.system, &self.system.reorganization_shift(&self.channel_reorganization()))
    }

    pub fn with_bath(&self, bath: BathSpec) -> Result<Self> {
        Self::new(self.units, self.system.clone(), bath, self.initial.clone())
    }

    pub fn with_couplings(&self, couplings: crate::CMatrix) -> Result<Self> {
        let system = SystemModel::new(self.system.energies.clone(), couplings, self.system.channel_coefficients.clone())?;
        Self::new(self.units, system, self.bath.clone(), self.initial.clone())
    }

    /// Copy with every coupling multiplied by `factor`.
    pub fn with_scaled_couplings(&self, factor: f64) -> Result<Self> {
        self.with_couplings(self.system.couplings.map(|c| c * factor))
    }
}
