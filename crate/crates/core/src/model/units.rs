use serde::{Deserialize, Serialize};

/// Reduced Planck constant in cm⁻¹·fs, i.e. 1/(2πc) with c in cm/fs.
pub const HBAR_CM_FS: f64 = 5308.837;
/// Boltzmann constant in cm⁻¹/K.
pub const KB_CM_K: f64 = 0.695035;

/// Constants tying spectroscopic energies (cm⁻¹) to times (fs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub kb: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hbar: HBAR_CM_FS, kb: KB_CM_K }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, kb: f64) -> crate::Result<Self> {
        if !(hbar > 0.0 && kb > 0.0 && hbar.is_finite() && kb.is_finite()) {
            return crate::error::validation("hbar and kB must be positive and finite");
        }
        Ok(Self { hbar, kb })
    }

    /// Angular frequency in fs⁻¹ for an energy in cm⁻¹.
    #[inline]
    pub fn angular(&self, energy: f64) -> f64 {
        energy / self.hbar
    }

    /// Phase accumulated by `energy` over `t` fs.
    #[inline]
    pub fn phase(&self, energy: f64, t: f64) -> f64 {
        energy * t / self.hbar
    }

    /// βħω/2 for a mode of `omega` cm⁻¹ at `temperature` K. Infinite at T = 0.
    pub fn half_beta_hbar_omega(&self, omega: f64, temperature: f64) -> f64 {
        if temperature <= 0.0 {
            f64::INFINITY
        } else {
            omega / (2.0 * self.kb * temperature)
        }
    }
}
