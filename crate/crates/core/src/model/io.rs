//! JSON model files.
//!
//! ```json
//! {
//!   "system": {
//!     "energies": [25.0, -25.0],
//!     "couplings": [[0, 10], [10, 0]],
//!     "channel_coefficients": [[1.0], [-1.0]]
//!   },
//!   "bath": {
//!     "channels": [{"type": "drude_lorentz", "lambda": 50, "omega_c": 100, "window": [0, null]}],
//!     "temperature_K": 0,
//!     "width_rule": "ground_state"
//!   },
//!   "initial_density": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]]
//! }
//! ```
//!
//! Complex entries are either a number or a `[re, im]` pair. Discrete modes
//! give `omega` and either `x0` or `reorganization`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BathSpec, DiscreteMode, InitialSystemDensity, OpenSystem, SpectralChannel, SystemModel, UnitSystem, WidthRule};
use crate::error::validation;
use crate::{CMatrix, Result, C64};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexEntry {
    fn value(self) -> C64 {
        match self {
            Self::Real(r) => C64::new(r, 0.0),
            Self::Pair([r, i]) => C64::new(r, i),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub energies: Vec<f64>,
    pub couplings: Vec<Vec<ComplexEntry>>,
    pub channel_coefficients: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModeFile {
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reorganization: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelFile {
    DrudeLorentz {
        lambda: f64,
        omega_c: f64,
        #[serde(default)]
        window: Option<(f64, Option<f64>)>,
    },
    Discrete { modes: Vec<ModeFile> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BathFile {
    pub channels: Vec<ChannelFile>,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    #[serde(default)]
    pub width_rule: WidthRule,
    #[serde(default)]
    pub centers: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub system: SystemFile,
    pub bath: BathFile,
    pub initial_density: Vec<ComplexEntry>,
}

impl ModelFile {
    pub fn into_model(self, units: UnitSystem) -> Result<OpenSystem> {
        let m = self.system.energies.len();
        if self.system.couplings.len() != m || self.system.couplings.iter().any(|r| r.len() != m) {
            return validation(format!("couplings must be a {m}x{m} array"));
        }
        let couplings = CMatrix::from_fn(m, m, |i, j| self.system.couplings[i][j].value());
        let system = SystemModel::new(self.system.energies, couplings, self.system.channel_coefficients)?;

        let channels = self
            .bath
            .channels
            .into_iter()
            .map(|c| match c {
                ChannelFile::DrudeLorentz { lambda, omega_c, window } => {
                    let (lo, hi) = window.unwrap_or((0.0, None));
                    Ok(SpectralChannel::windowed_drude_lorentz(lambda, omega_c, lo, hi.unwrap_or(f64::INFINITY)))
                }
                ChannelFile::Discrete { modes } => {
                    let modes = modes
                        .into_iter()
                        .map(|m| match (m.x0, m.reorganization) {
                            (Some(x0), None) => Ok(DiscreteMode { omega: m.omega, x0 }),
                            (None, Some(l)) if l >= 0.0 => Ok(DiscreteMode::from_reorganization(m.omega, l, &units)),
                            _ => validation("each mode needs exactly one of x0 or a non-negative reorganization"),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(SpectralChannel::Discrete { modes })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let n_ch = channels.len();
        let mut bath = BathSpec::new(channels, self.bath.temperature_k, self.bath.width_rule)?;
        if !self.bath.centers.is_empty() {
            if self.bath.centers.len() != n_ch {
                return validation("centers must list one array per channel");
            }
            bath = bath.with_centers(self.bath.centers)?;
        }

        if self.initial_density.len() != m * m {
            return validation(format!("initial_density must hold {} entries", m * m));
        }
        let rho = CMatrix::from_fn(m, m, |i, j| self.initial_density[i * m + j].value());
        OpenSystem::new(units, system, bath, InitialSystemDensity::new(rho)?)
    }
}

/// Reads a JSON model file with the default unit system.
pub fn load_model(path: &Path) -> Result<OpenSystem> {
    let text = std::fs::read_to_string(path)?;
    parse_model(&text)
}

pub fn parse_model(text: &str) -> Result<OpenSystem> {
    let file: ModelFile = serde_json::from_str(text)?;
    file.into_model(UnitSystem::default())
}
