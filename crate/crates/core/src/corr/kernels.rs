use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::model::{drude_lorentz_h, BathSpec, SpectralChannel, UnitSystem};
use crate::{Error, Result};

/// Per-channel base kernels, all for unit channel coefficient.
///
/// With x_k the mode displacement, σσ_k = σ_xσ_p and w_k in fs⁻¹:
///
/// | kernel    | mode sum                                  |
/// |-----------|-------------------------------------------|
/// | `H`       | Σ ½ w x² sin(wt)                          |
/// | `DeltaG`  | Σ (σσ/ħ) w x² (cos(wt) − 1)               |
/// | `G`       | Σ (σσ/ħ) w x² cos(wt) (discrete only)     |
/// | `I`       | (1/ħ) Σ σσ w² x² sin(wt)                  |
/// | `J`       | Σ w² x² cos(wt)                           |
/// | `L`       | Σ σσ w³ x² cos(wt)                        |
/// | `M`       | ħ Σ w³ x² sin(wt)                         |
/// | `CenterQ` | Σ x (w x' sin(wt) − p' cos(wt))           |
/// | `CenterC` | Σ w² x (x' cos(wt) + (p'/w) sin(wt))      |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseKernel {
    H,
    DeltaG,
    G,
    I,
    J,
    L,
    M,
    CenterQ,
    CenterC,
}

impl BaseKernel {
    /// +1 for even kernels, −1 for odd ones; `None` for the center sums.
    pub fn parity(self) -> Option<f64> {
        match self {
            Self::H | Self::I | Self::M => Some(-1.0),
            Self::DeltaG | Self::G | Self::J | Self::L => Some(1.0),
            Self::CenterQ | Self::CenterC => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct KernelMode {
    pub w: f64,
    pub x2: f64,
    pub x: f64,
    pub sp: f64,
    pub xc: f64,
    pub pc: f64,
}

/// Kernel evaluator for one bath channel.
#[derive(Clone, Debug)]
pub struct ChannelKernel {
    pub(crate) modes: Vec<KernelMode>,
    closed_h: Option<(f64, f64)>,
    discrete: bool,
    units: UnitSystem,
}

/// Upper edge of the panelled part of a continuum integral, in units of ω_c.
const PANEL_EDGE: f64 = 50.0;
const GL_ORDER: usize = 16;
const MIN_PANELS: usize = 125;
const TAIL_PANELS: usize = 64;

impl ChannelKernel {
    /// Kernels of discrete channel `index` of `bath`.
    pub fn discrete(bath: &BathSpec, index: usize, units: &UnitSystem) -> Result<Self> {
        let modes = bath.channels[index]
            .modes()
            .ok_or_else(|| Error::Validation("channel is not discrete".into()))?;
        let modes = modes
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let (xc, pc) = bath.center(index, k);
                KernelMode {
                    w: units.angular(m.omega),
                    x2: m.x0 * m.x0,
                    x: m.x0,
                    sp: bath.sigma_product(m.omega, units),
                    xc,
                    pc,
                }
            })
            .collect();
        Ok(Self { modes, closed_h: None, discrete: true, units: *units })
    }

    /// Kernels of a Drude-Lorentz channel by composite Gauss-Legendre quadrature
    /// resolved for |t| ≤ `t_max`.
    pub fn continuum(bath: &BathSpec, index: usize, units: &UnitSystem, t_max: f64) -> Result<Self> {
        let SpectralChannel::DrudeLorentz { lambda, omega_c, window } = bath.channels[index] else {
            return Err(Error::Validation("channel is not Drude-Lorentz".into()));
        };
        let (lo, hi) = window;
        let rule = GaussLegendre::new(NonZeroUsize::new(GL_ORDER).unwrap());
        let nodes = rule.as_node_weight_pairs();
        let mut modes = Vec::new();
        let mut push = |omega: f64, weight: f64| {
            let j = crate::model::drude_lorentz(lambda, omega_c, omega);
            let lam = weight * j / (PI * omega);
            let w = units.angular(omega);
            modes.push(KernelMode {
                w,
                x2: 2.0 * lam / (w * w),
                x: (2.0 * lam).sqrt() / w,
                sp: bath.sigma_product(omega, units),
                xc: 0.0,
                pc: 0.0,
            });
        };

        let split = lo.max(hi.min(PANEL_EDGE * omega_c));
        if split > lo {
            let period = 2.0 * PI * units.hbar / t_max.max(1e-9);
            let panels = (((split - lo) / period).ceil() as usize).max(MIN_PANELS);
            let width = (split - lo) / panels as f64;
            for p in 0..panels {
                let a = lo + p as f64 * width;
                for &(x, wt) in nodes {
                    push(a + 0.5 * width * (x + 1.0), 0.5 * width * wt);
                }
            }
        }
        if hi > split {
            // ω = split/u on u ∈ [split/hi, 1]
            let u0 = if hi.is_finite() { split / hi } else { 0.0 };
            let width = (1.0 - u0) / TAIL_PANELS as f64;
            for p in 0..TAIL_PANELS {
                let a = u0 + p as f64 * width;
                for &(x, wt) in nodes {
                    let u = a + 0.5 * width * (x + 1.0);
                    push(split / u, 0.5 * width * wt * split / (u * u));
                }
            }
        }
        let closed_h = (lo == 0.0 && hi.is_infinite()).then_some((lambda, omega_c));
        Ok(Self { modes, closed_h, discrete: false, units: *units })
    }

    pub fn is_discrete(&self) -> bool {
        self.discrete
    }

    pub fn node_count(&self) -> usize {
        self.modes.len()
    }

    /// Base kernel at time `t` (fs).
    pub fn eval(&self, kernel: BaseKernel, t: f64) -> Result<f64> {
        let hbar = self.units.hbar;
        let v = match kernel {
            BaseKernel::H => match self.closed_h {
                Some((l, wc)) => drude_lorentz_h(l, wc, t, &self.units),
                None => self.modes.iter().map(|m| 0.5 * m.w * m.x2 * (m.w * t).sin()).sum(),
            },
            BaseKernel::DeltaG => self
                .modes
                .iter()
                .map(|m| {
                    let s = (0.5 * m.w * t).sin();
                    -2.0 * (m.sp / hbar) * m.w * m.x2 * s * s
                })
                .sum(),
            BaseKernel::G => {
                self.require_discrete("G")?;
                self.modes.iter().map(|m| (m.sp / hbar) * m.w * m.x2 * (m.w * t).cos()).sum()
            }
            BaseKernel::I => {
                self.require_discrete("I")?;
                self.modes.iter().map(|m| m.sp * m.w * m.w * m.x2 * (m.w * t).sin()).sum::<f64>() / hbar
            }
            BaseKernel::J => {
                self.require_discrete("J")?;
                self.modes.iter().map(|m| m.w * m.w * m.x2 * (m.w * t).cos()).sum()
            }
            BaseKernel::L => {
                self.require_discrete("L")?;
                self.modes.iter().map(|m| m.sp * m.w.powi(3) * m.x2 * (m.w * t).cos()).sum()
            }
            BaseKernel::M => {
                self.require_discrete("M")?;
                hbar * self.modes.iter().map(|m| m.w.powi(3) * m.x2 * (m.w * t).sin()).sum::<f64>()
            }
            BaseKernel::CenterQ => self
                .modes
                .iter()
                .map(|m| m.x * (m.w * m.xc * (m.w * t).sin() - m.pc * (m.w * t).cos()))
                .sum(),
            BaseKernel::CenterC => self
                .modes
                .iter()
                .map(|m| m.w * m.w * m.x * (m.xc * (m.w * t).cos() + m.pc / m.w * (m.w * t).sin()))
                .sum(),
        };
        Ok(v)
    }

    fn require_discrete(&self, name: &str) -> Result<()> {
        if self.discrete {
            Ok(())
        } else {
            Err(Error::Validation(format!("kernel {name} needs a discrete or discretized bath")))
        }
    }
}

/// Kernel evaluators for every channel of a bath.
#[derive(Clone, Debug)]
pub struct BathKernels {
    pub units: UnitSystem,
    pub channels: Vec<ChannelKernel>,
}

impl BathKernels {
    /// Continuum channels are resolved for |t| ≤ `t_max`.
    pub fn new(bath: &BathSpec, units: &UnitSystem, t_max: f64) -> Result<Self> {
        bath.validate()?;
        let channels = (0..bath.channels.len())
            .map(|i| {
                if bath.channels[i].is_discrete() {
                    ChannelKernel::discrete(bath, i, units)
                } else {
                    ChannelKernel::continuum(bath, i, units, t_max)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { units: *units, channels })
    }

    pub fn is_discrete(&self) -> bool {
        self.channels.iter().all(ChannelKernel::is_discrete)
    }

    pub fn eval(&self, channel: usize, kernel: BaseKernel, t: f64) -> Result<f64> {
        self.channels[channel].eval(kernel, t)
    }
}
