use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::units::UnitSystem;
use crate::error::validation;
use crate::{Error, Result};

/// Drude-Lorentz spectral density J(ω) = 2λ(ω/ω_c)/(1 + (ω/ω_c)²).
#[inline]
pub fn drude_lorentz(lambda: f64, omega_c: f64, omega: f64) -> f64 {
    let r = omega / omega_c;
    2.0 * lambda * r / (1.0 + r * r)
}

/// Closed-form h(t) = (λ/w_c)(1 − e^{−w_c t}) of an unwindowed Drude-Lorentz
/// channel, w_c = ω_c/ħ. Odd in t.
pub fn drude_lorentz_h(lambda: f64, omega_c: f64, t: f64, units: &UnitSystem) -> f64 {
    let wc = units.angular(omega_c);
    t.signum() * (lambda / wc) * (-(-wc * t.abs()).exp_m1())
}

/// A single harmonic mode with mass-weighted displacement `x0` for unit channel coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMode {
    /// Frequency in cm⁻¹.
    pub omega: f64,
    /// Mass-weighted displacement in √(cm⁻¹)·fs.
    pub x0: f64,
}

impl DiscreteMode {
    /// Mode whose displacement carries reorganization λ = ½w²x0².
    pub fn from_reorganization(omega: f64, lambda: f64, units: &UnitSystem) -> Self {
        Self { omega, x0: (2.0 * lambda).sqrt() / units.angular(omega) }
    }

    pub fn reorganization(&self, units: &UnitSystem) -> f64 {
        let w = units.angular(self.omega);
        0.5 * w * w * self.x0 * self.x0
    }

    /// Dimensionless displacement x0/ℓ with ℓ = √(ħ/w).
    pub fn dimensionless(&self, units: &UnitSystem) -> f64 {
        self.x0 * (units.angular(self.omega) / units.hbar).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpectralChannel {
    DrudeLorentz {
        lambda: f64,
        omega_c: f64,
        /// [ν_lo, ν_hi]; ν_hi may be infinite.
        #[serde(default = "full_window", with = "window_serde")]
        window: (f64, f64),
    },
    Discrete { modes: Vec<DiscreteMode> },
}

fn full_window() -> (f64, f64) {
    (0.0, f64::INFINITY)
}

mod window_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(w: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
        let hi = if w.1.is_finite() { Some(w.1) } else { None };
        (w.0, hi).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(f64, f64), D::Error> {
        let (lo, hi): (f64, Option<f64>) = Deserialize::deserialize(d)?;
        Ok((lo, hi.unwrap_or(f64::INFINITY)))
    }
}

impl SpectralChannel {
    pub fn drude_lorentz(lambda: f64, omega_c: f64) -> Self {
        Self::DrudeLorentz { lambda, omega_c, window: full_window() }
    }

    pub fn windowed_drude_lorentz(lambda: f64, omega_c: f64, lo: f64, hi: f64) -> Self {
        Self::DrudeLorentz { lambda, omega_c, window: (lo, hi) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::DrudeLorentz { lambda, omega_c, window: (lo, hi) } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return validation("Drude-Lorentz lambda must be positive");
                }
                if !(*omega_c > 0.0 && omega_c.is_finite()) {
                    return validation("Drude-Lorentz omega_c must be positive");
                }
                if !(*lo >= 0.0 && lo < hi && lo.is_finite()) || hi.is_nan() {
                    return validation("window must satisfy 0 <= lo < hi");
                }
            }
            Self::Discrete { modes } => {
                if modes.is_empty() {
                    return validation("discrete channel has no modes");
                }
                for (i, m) in modes.iter().enumerate() {
                    if !(m.omega > 0.0 && m.omega.is_finite() && m.x0.is_finite()) {
                        return validation("discrete mode frequencies must be positive");
                    }
                    if modes[..i].iter().any(|o| o.omega == m.omega) {
                        return validation("discrete mode frequencies must be distinct");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete { .. })
    }

    /// Total reorganization (1/π)∫J/ω over the window, or Σ½w²x0² for modes.
    pub fn reorganization(&self, units: &UnitSystem) -> f64 {
        match self {
            Self::DrudeLorentz { lambda, omega_c, window } => {
                windowed_reorganization(*lambda, *omega_c, window.0, window.1)
            }
            Self::Discrete { modes } => modes.iter().map(|m| m.reorganization(units)).sum(),
        }
    }

    /// Spectral density at ω (cm⁻¹); zero outside the window. Discrete channels have none.
    pub fn density(&self, omega: f64) -> Option<f64> {
        match self {
            Self::DrudeLorentz { lambda, omega_c, window } => Some(if omega < window.0 || omega > window.1 {
                0.0
            } else {
                drude_lorentz(*lambda, *omega_c, omega)
            }),
            Self::Discrete { .. } => None,
        }
    }

    pub fn modes(&self) -> Option<&[DiscreteMode]> {
        match self {
            Self::Discrete { modes } => Some(modes),
            _ => None,
        }
    }
}

/// (2λ/π)(arctan(hi/ω_c) − arctan(lo/ω_c)).
pub fn windowed_reorganization(lambda: f64, omega_c: f64, lo: f64, hi: f64) -> f64 {
    2.0 * lambda / PI * (atan_ratio(hi, omega_c) - atan_ratio(lo, omega_c))
}

fn atan_ratio(x: f64, omega_c: f64) -> f64 {
    if x.is_infinite() {
        FRAC_PI_2
    } else {
        (x / omega_c).atan()
    }
}

/// Cutoffs (ν_h, ν_l) keeping a fraction α of the Drude-Lorentz reorganization
/// by removing high or low frequencies respectively.
pub fn suppression_cutoffs(lambda: f64, omega_c: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(lambda > 0.0 && omega_c > 0.0) {
        return Err(Error::Domain("lambda and omega_c must be positive".into()));
    }
    Ok((omega_c * (FRAC_PI_2 * alpha).tan(), omega_c * (FRAC_PI_2 * (1.0 - alpha)).tan()))
}

/// Modes per channel used when a continuous bath is discretized by default.
pub const DEFAULT_DISCRETE_MODES: usize = 300;
/// Default upper frequency of a discretized channel, in units of ω_c.
pub const DEFAULT_OMEGA_MAX_FACTOR: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DiscretizationScheme {
    /// Midpoint nodes on a uniform frequency grid, λ_k = J(ω_k)Δω/(πω_k).
    #[default]
    EqualSpacing,
    /// Nodes ω_c·tan θ at uniform midpoints in θ = arctan(ω/ω_c); each mode carries λ_window/K.
    EqualReorganization,
}

/// Replaces a Drude-Lorentz channel by K discrete modes.
///
/// The window is clipped at `omega_max`. `omega_max` may be infinite for the
/// equal-reorganization scheme only.
pub fn discretize_channel(
    channel: &SpectralChannel,
    k: usize,
    omega_max: f64,
    scheme: DiscretizationScheme,
    units: &UnitSystem,
) -> Result<SpectralChannel> {
    let SpectralChannel::DrudeLorentz { lambda, omega_c, window } = channel else {
        return validation("only Drude-Lorentz channels can be discretized");
    };
    channel.validate()?;
    if k == 0 {
        return validation("K must be at least 1");
    }
    if !(omega_max > 0.0) {
        return validation("omega_max must be positive");
    }
    let lo = window.0;
    let hi = window.1.min(omega_max);
    if hi <= lo {
        return validation("window lies entirely above omega_max");
    }
    let modes = match scheme {
        DiscretizationScheme::EqualSpacing => {
            if !hi.is_finite() {
                return validation("equal spacing needs a finite omega_max");
            }
            let dw = (hi - lo) / k as f64;
            (0..k)
                .map(|i| {
                    let w = lo + (i as f64 + 0.5) * dw;
                    let l = drude_lorentz(*lambda, *omega_c, w) * dw / (PI * w);
                    DiscreteMode::from_reorganization(w, l, units)
                })
                .collect()
        }
        DiscretizationScheme::EqualReorganization => {
            let (t0, t1) = (atan_ratio(lo, *omega_c), atan_ratio(hi, *omega_c));
            let per_mode = windowed_reorganization(*lambda, *omega_c, lo, hi) / k as f64;
            let dt = (t1 - t0) / k as f64;
            (0..k)
                .map(|i| {
                    let w = omega_c * (t0 + (i as f64 + 0.5) * dt).tan();
                    DiscreteMode::from_reorganization(w, per_mode, units)
                })
                .collect()
        }
    };
    Ok(SpectralChannel::Discrete { modes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WidthRule {
    /// σ_x = √(ħ/(2ω·tanh(βħω/2))).
    #[default]
    Thermal,
    /// σ_x = √(ħ/(2ω)).
    GroundState,
}

/// Harmonic bath: channels, temperature, Wigner widths and centers.
#[derive(Clone, Debug, PartialEq)]
pub struct BathSpec {
    pub channels: Vec<SpectralChannel>,
    pub temperature: f64,
    pub width_rule: WidthRule,
    /// Per channel, per mode (x'_k, p'_k). Empty rows mean all zero; only
    /// discrete channels may carry centers.
    pub centers: Vec<Vec<(f64, f64)>>,
}

impl BathSpec {
    pub fn new(channels: Vec<SpectralChannel>, temperature: f64, width_rule: WidthRule) -> Result<Self> {
        let centers = vec![Vec::new(); channels.len()];
        let bath = Self { channels, temperature, width_rule, centers };
        bath.validate()?;
        Ok(bath)
    }

    pub fn with_centers(mut self, centers: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        self.centers = centers;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return validation("temperature must be non-negative");
        }
        for ch in &self.channels {
            ch.validate()?;
        }
        if self.centers.len() != self.channels.len() {
            return validation("one center list per channel is required");
        }
        for (ch, c) in self.channels.iter().zip(&self.centers) {
            if c.is_empty() {
                continue;
            }
            match ch.modes() {
                Some(m) if m.len() == c.len() => {}
                Some(_) => return validation("center list length must match the mode count"),
                None => return validation("Wigner centers are only supported on discrete channels"),
            }
        }
        Ok(())
    }

    /// σ_xσ_p for a mode of frequency ω (cm⁻¹), in cm⁻¹·fs.
    pub fn sigma_product(&self, omega: f64, units: &UnitSystem) -> f64 {
        0.5 * units.hbar * self.coth_factor(omega, units)
    }

    /// coth(βħω/2), or 1 for the ground-state rule and at T = 0.
    pub fn coth_factor(&self, omega: f64, units: &UnitSystem) -> f64 {
        match self.width_rule {
            WidthRule::GroundState => 1.0,
            WidthRule::Thermal => {
                let y = units.half_beta_hbar_omega(omega, self.temperature);
                if y > 20.0 {
                    1.0
                } else {
                    1.0 / y.tanh()
                }
            }
        }
    }

    /// (σ_x, σ_p) for a mode of frequency ω (cm⁻¹).
    pub fn widths(&self, omega: f64, units: &UnitSystem) -> (f64, f64) {
        let w = units.angular(omega);
        let sx = (self.sigma_product(omega, units) / w).sqrt();
        (sx, w * sx)
    }

    pub fn center(&self, channel: usize, mode: usize) -> (f64, f64) {
        self.centers[channel].get(mode).copied().unwrap_or((0.0, 0.0))
    }

    pub fn has_centers(&self) -> bool {
        self.centers.iter().flatten().any(|&(x, p)| x != 0.0 || p != 0.0)
    }

    pub fn channel_reorganization(&self, units: &UnitSystem) -> Vec<f64> {
        self.channels.iter().map(|c| c.reorganization(units)).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.channels.iter().all(SpectralChannel::is_discrete)
    }

    /// Copy with every Drude-Lorentz channel discretized. Centers are kept.
    pub fn discretized(&self, k: usize, omega_max_factor: f64, scheme: DiscretizationScheme, units: &UnitSystem) -> Result<Self> {
        let channels = self
            .channels
            .iter()
            .map(|ch| match ch {
                SpectralChannel::DrudeLorentz { omega_c, .. } => {
                    discretize_channel(ch, k, omega_max_factor * omega_c, scheme, units)
                }
                other => Ok(other.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { channels, ..self.clone() })
    }
}
