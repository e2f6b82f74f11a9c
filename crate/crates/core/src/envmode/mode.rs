use nalgebra::SymmetricEigen;

use super::weyl::weyl_coefficients;
use crate::engine::{LocalEngine, QuadratureSpec};
use crate::error::validation;
use crate::model::{OpenSystem, SpectralChannel};
use crate::{CMatrix, Error, Result, C64};

pub const DEFAULT_N_MAX: usize = 2;
/// Width (cm⁻¹) of the spectral slice a probe mode represents.
pub const DEFAULT_PROBE_SLICE: f64 = 10.0;
/// Eigenvalues below −this are treated as a numerical failure instead of being clipped.
pub const NEGATIVE_EIGENVALUE_LIMIT: f64 = 1e-8;
const LOW_POPULATION: f64 = 0.99;

/// The environmental mode whose reduced density matrix is wanted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeProbe {
    pub channel: usize,
    /// cm⁻¹.
    pub omega: f64,
    /// Displacement for unit channel coefficient.
    pub x0: f64,
    pub center: (f64, f64),
}

impl ModeProbe {
    /// Mode `index` of discrete channel `channel`.
    pub fn discrete(system: &OpenSystem, channel: usize, index: usize) -> Result<Self> {
        let modes = system
            .bath
            .channels
            .get(channel)
            .and_then(SpectralChannel::modes)
            .ok_or_else(|| Error::Validation(format!("channel {channel} is not discrete")))?;
        let m = modes.get(index).ok_or_else(|| Error::Validation(format!("no mode {index} in channel {channel}")))?;
        Ok(Self { channel, omega: m.omega, x0: m.x0, center: system.bath.center(channel, index) })
    }

    /// Representative mode at `omega` of a continuous channel, carrying the
    /// reorganization J(ω)·slice/(πω) of a slice of width `slice`.
    pub fn slice(system: &OpenSystem, channel: usize, omega: f64, slice: f64) -> Result<Self> {
        let ch = system.bath.channels.get(channel).ok_or_else(|| Error::Validation("no such channel".into()))?;
        let j = ch.density(omega).ok_or_else(|| Error::Validation("probe slices need a continuous channel".into()))?;
        if !(omega > 0.0 && slice > 0.0) {
            return validation("probe frequency and slice width must be positive");
        }
        let lambda = j * slice / (std::f64::consts::PI * omega);
        let m = crate::model::DiscreteMode::from_reorganization(omega, lambda, &system.units);
        Ok(Self { channel, omega, x0: m.x0, center: (0.0, 0.0) })
    }

    /// Discrete mode if the channel is discrete (nearest frequency), slice otherwise.
    pub fn at(system: &OpenSystem, channel: usize, omega: f64) -> Result<Self> {
        match system.bath.channels.get(channel).and_then(SpectralChannel::modes) {
            Some(modes) => {
                let k = (0..modes.len())
                    .min_by(|&a, &b| (modes[a].omega - omega).abs().total_cmp(&(modes[b].omega - omega).abs()))
                    .ok_or_else(|| Error::Validation("empty channel".into()))?;
                Self::discrete(system, channel, k)
            }
            None => Self::slice(system, channel, omega, DEFAULT_PROBE_SLICE),
        }
    }
}

/// Reduced density matrix of one mode in the truncated Fock basis.
#[derive(Clone, Debug)]
pub struct ModeRDM {
    pub omega: f64,
    pub t: f64,
    pub matrix: CMatrix,
    /// Trace of the raw truncated matrix before renormalization.
    pub population: f64,
}

impl ModeRDM {
    /// Hermitizes, clips eigenvalues in [−limit, 0) and renormalizes.
    pub fn from_raw(omega: f64, t: f64, raw: &CMatrix, limit: f64) -> Result<Self> {
        let population = raw.trace().re;
        if population < LOW_POPULATION {
            log::warn!("mode {omega} cm^-1 at {t} fs keeps only {population:.4} of its population below the cutoff");
        }
        let h = (raw + raw.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        let scale = population.abs().max(1e-300);
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -limit * scale {
            return Err(Error::Numerical(format!(
                "mode {omega} cm^-1 at {t} fs has eigenvalue {min:.3e}; refine the grid"
            )));
        }
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            clipped.len(),
            clipped.iter().map(|&l| C64::new(l / total, 0.0)),
        ));
        let matrix = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        Ok(Self { omega, t, matrix, population })
    }

    pub fn entropy(&self) -> Result<f64> {
        entropy(&self.matrix)
    }
}

/// Von Neumann entropy −Σ λ ln λ (k_B = 1) of a unit-trace Hermitian matrix.
pub fn entropy(rho: &CMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr - C64::ONE).norm() > 1e-6 {
        return validation(format!("entropy needs unit trace, got {tr}"));
    }
    let eig = SymmetricEigen::new((rho + rho.adjoint()) * C64::new(0.5, 0.0));
    Ok(eig.eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum())
}

/// Fixed per-mode quantities of the Gaussian integrals.
struct ModeGaussian {
    w: f64,
    hbar: f64,
    s: f64,
    p1: [f64; 2],
    b1_real: [f64; 2],
    p: [f64; 2],
    coeffs: Vec<Vec<Vec<f64>>>,
}

impl ModeGaussian {
    /// Fills `out[(mm, nn)] += scale · I(|nn⟩⟨mm|)/I(1)` for one time tuple.
    #[allow(clippy::too_many_arguments)]
    fn accumulate(&self, ez_t: C64, z: C64, a: f64, b: f64, n_max: usize, scale: C64, out: &mut CMatrix) {
        let (w, hbar) = (self.w, self.hbar);
        let b1 = [C64::new(self.b1_real[0], a), C64::new(self.b1_real[1], b)];
        let rot = ez_t * z.conj();
        let l = [-2.0 * w / hbar * rot.re, -2.0 / hbar * (C64::I * rot).re];
        let bb = [b1[0] + l[0], b1[1] + l[1]];
        let log_r = C64::new(-(w / hbar) * z.norm_sqr(), 0.0)
            + 0.5 * ((self.p1[0] * self.p1[1]) / (self.p[0] * self.p[1])).ln()
            + 0.5 * (bb[0] * bb[0] / self.p[0] + bb[1] * bb[1] / self.p[1])
            - 0.5 * (b1[0] * b1[0] / self.p1[0] + b1[1] * b1[1] / self.p1[1]);
        let r = log_r.exp() * scale;
        let mu = [bb[0] / self.p[0], bb[1] / self.p[1]];
        let v = [1.0 / self.p[0], 1.0 / self.p[1]];
        let ax = self.s * ez_t;
        let ap = self.s * C64::new(0.0, 1.0 / w) * ez_t;
        let a0 = self.s * z;
        let ma = a0 + ax * mu[0] + ap * mu[1];
        let mb = a0.conj() + ax.conj() * mu[0] + ap.conj() * mu[1];
        let caa = ax * ax * v[0] + ap * ap * v[1];
        let cbb = ax.conj() * ax.conj() * v[0] + ap.conj() * ap.conj() * v[1];
        let cab = ax.norm_sqr() * v[0] + ap.norm_sqr() * v[1];
        // mom[p][q] = E[ā^p a^q]
        let d = n_max + 1;
        let mut mom = vec![vec![C64::ZERO; d]; d];
        mom[0][0] = C64::ONE;
        for q in 1..d {
            mom[0][q] = ma * mom[0][q - 1] + if q >= 2 { (q - 1) as f64 * caa * mom[0][q - 2] } else { C64::ZERO };
        }
        for p in 1..d {
            for q in 0..d {
                let mut val = mb * mom[p - 1][q];
                if p >= 2 {
                    val += (p - 1) as f64 * cbb * mom[p - 2][q];
                }
                if q >= 1 {
                    val += q as f64 * cab * mom[p - 1][q - 1];
                }
                mom[p][q] = val;
            }
        }
        for nn in 0..d {
            for mm in 0..d {
                let e: C64 = self.coeffs[nn][mm].iter().enumerate().map(|(k, c)| c * mom[nn - k][mm - k]).sum();
                out[(mm, nn)] += r * e;
            }
        }
    }
}

/// Reduced density matrices of one mode at grid indices `t_indices`, through
/// perturbation order `spec.max_order` (at most 2), in a Fock basis truncated
/// at `n_max`.
///
/// The system integrand is the local-basis one with the full bath kernel;
/// only the Gaussian integral of the probed mode is replaced by that of the
/// projector's Weyl symbol along its classical endpoint.
pub fn mode_rdm(
    system: &OpenSystem,
    probe: &ModeProbe,
    spec: QuadratureSpec,
    t_indices: &[usize],
    n_max: usize,
) -> Result<Vec<ModeRDM>> {
    if spec.max_order > 2 {
        return validation("mode reduced density matrices are available up to order 2");
    }
    if probe.channel >= system.bath.channels.len() {
        return validation("probe channel out of range");
    }
    if let Some(&bad) = t_indices.iter().find(|&&i| i >= spec.grid_points) {
        return validation(format!("time index {bad} beyond the grid"));
    }
    let units = &system.units;
    let hbar = units.hbar;
    let w = units.angular(probe.omega);
    let (sx, sp) = system.bath.widths(probe.omega, units);
    let p1 = [1.0 / (sx * sx), 1.0 / (sp * sp)];
    let gauss = ModeGaussian {
        w,
        hbar,
        s: (w / (2.0 * hbar)).sqrt(),
        p1,
        b1_real: [probe.center.0 * p1[0], probe.center.1 * p1[1]],
        p: [p1[0] + 2.0 * w / hbar, p1[1] + 2.0 / (hbar * w)],
        coeffs: (0..=n_max).map(|n| (0..=n_max).map(|m| weyl_coefficients(n, m)).collect()).collect(),
    };

    let engine = LocalEngine::new(system, spec)?;
    let dt = spec.dt();
    let g = spec.grid_points;
    let ez: Vec<C64> = (0..g).map(|i| C64::new(0.0, -w * i as f64 * dt).exp()).collect();
    let coef: Vec<f64> = (0..system.dimension()).map(|n| system.system.coefficient(n, probe.channel) * probe.x0).collect();
    let weight = |m: usize, i: usize| if m == 0 { 0.0 } else if i == 0 || i == m { 0.5 * dt } else { dt };

    let d = n_max + 1;
    let mut raw = vec![CMatrix::zeros(d, d); t_indices.len()];
    for n in 0..=spec.max_order {
        for (p, pref, tables) in engine.compiled(n, &|(a, b)| a == b)? {
            let pairs = p.pairs();
            let mean: Vec<f64> = pairs.iter().map(|&(a, b)| 0.5 * (coef[a] + coef[b])).collect();
            let delta: Vec<f64> = pairs.iter().map(|&(a, b)| coef[a] - coef[b]).collect();
            let eval = |idx: &[usize], wgt: f64, out: &mut CMatrix| {
                let tt = idx[idx.len() - 1];
                let mut z = C64::ZERO;
                let (mut a, mut b) = (0.0, 0.0);
                for j in 0..pairs.len() {
                    let (lo, hi) = (idx[j], idx[j + 1]);
                    z += mean[j] * (ez[tt - hi] - ez[tt - lo]);
                    // ez = cos − i sin
                    a += delta[j] * (-ez[hi].im + ez[lo].im);
                    b -= delta[j] * (ez[hi].re - ez[lo].re);
                }
                let scale = pref * tables.value(idx) * wgt;
                gauss.accumulate(ez[tt], z, a * w / hbar, b / hbar, n_max, scale, out);
            };
            for (slot, &tt) in raw.iter_mut().zip(t_indices) {
                match n {
                    0 => eval(&[0, tt], 1.0, slot),
                    1 => {
                        for i1 in 0..=tt {
                            let wt = weight(tt, i1);
                            if wt != 0.0 {
                                eval(&[0, i1, tt], wt, slot);
                            }
                        }
                    }
                    _ => {
                        for i2 in 0..=tt {
                            let w2 = weight(tt, i2);
                            if w2 == 0.0 {
                                continue;
                            }
                            for i1 in 0..=i2 {
                                let w1 = weight(i2, i1);
                                if w1 != 0.0 {
                                    eval(&[0, i1, i2, tt], w1 * w2, slot);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    raw.iter()
        .zip(t_indices)
        .map(|(r, &i)| ModeRDM::from_raw(probe.omega, i as f64 * dt, r, NEGATIVE_EIGENVALUE_LIMIT))
        .collect()
}
