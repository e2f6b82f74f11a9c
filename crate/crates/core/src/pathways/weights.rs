use super::{check_times, LiouvillePathway};
use crate::corr::{AppendixKernel, KernelSource, StateIndexedKernel};
use crate::error::validation;
use crate::model::{BathSpec, EigenBasisModel, OpenSystem, UnitSystem};
use crate::{CMatrix, Result, C64};

/// Π_j (V_{n_j n_{j−1}} δ_{n'_{j−1} n'_j} − δ_{n_j n_{j−1}} V_{n'_{j−1} n'_j}).
pub fn theta_envfree(pathway: &LiouvillePathway, couplings: &CMatrix) -> C64 {
    let p = pathway.pairs();
    let mut w = C64::ONE;
    for j in 1..p.len() {
        let ((a0, b0), (a1, b1)) = (p[j - 1], p[j]);
        w *= if a1 != a0 { couplings[(a1, a0)] } else { -couplings[(b0, b1)] };
    }
    w
}

#[derive(Clone, Copy, Debug)]
pub struct WeightMode {
    pub channel: usize,
    /// Angular frequency, fs⁻¹.
    pub w: f64,
    /// Displacement for unit channel coefficient.
    pub x: f64,
    /// σ_xσ_p.
    pub sp: f64,
    pub xc: f64,
    pub pc: f64,
}

/// Discrete bath modes together with the basis-dependent channel coefficients,
/// so that x_k^(a,b) = g^(c)_ab x_k.
#[derive(Clone, Debug)]
pub struct PathwayModes {
    pub hbar: f64,
    pub modes: Vec<WeightMode>,
    coefficients: Vec<CMatrix>,
}

impl PathwayModes {
    pub fn new(bath: &BathSpec, units: &UnitSystem, coefficients: Vec<CMatrix>) -> Result<Self> {
        if coefficients.len() != bath.channels.len() {
            return validation("one coefficient matrix per channel is required");
        }
        let mut modes = Vec::new();
        for (c, ch) in bath.channels.iter().enumerate() {
            let Some(list) = ch.modes() else {
                return validation("pathway weights need a discrete or discretized bath");
            };
            for (k, m) in list.iter().enumerate() {
                let (xc, pc) = bath.center(c, k);
                modes.push(WeightMode {
                    channel: c,
                    w: units.angular(m.omega),
                    x: m.x0,
                    sp: bath.sigma_product(m.omega, units),
                    xc,
                    pc,
                });
            }
        }
        Ok(Self { hbar: units.hbar, modes, coefficients })
    }

    pub fn eigen(system: &OpenSystem, eigen: &EigenBasisModel) -> Result<Self> {
        Self::new(&system.bath, &system.units, eigen.channel_coefficients.clone())
    }

    pub fn local(system: &OpenSystem) -> Result<Self> {
        let m = system.dimension();
        let coefficients = (0..system.system.channel_count())
            .map(|c| {
                CMatrix::from_fn(m, m, |a, b| {
                    if a == b {
                        C64::new(system.system.coefficient(a, c), 0.0)
                    } else {
                        C64::ZERO
                    }
                })
            })
            .collect();
        Self::new(&system.bath, &system.units, coefficients)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// x_k^(a,b).
    pub fn displacement(&self, k: usize, a: usize, b: usize) -> C64 {
        let m = &self.modes[k];
        self.coefficients[m.channel][(a, b)] * m.x
    }

    fn diag(&self, k: usize, a: usize) -> f64 {
        self.displacement(k, a, a).re
    }

    /// x̄ of a pair.
    pub fn mean(&self, k: usize, pair: (usize, usize)) -> f64 {
        0.5 * (self.diag(k, pair.0) + self.diag(k, pair.1))
    }

    /// δx of a pair.
    pub fn delta(&self, k: usize, pair: (usize, usize)) -> f64 {
        self.diag(k, pair.0) - self.diag(k, pair.1)
    }
}

fn check_step(pathway: &LiouvillePathway, j: usize) -> Result<()> {
    if j == 0 || j > pathway.order() {
        return validation(format!("step {j} outside 1..={}", pathway.order()));
    }
    Ok(())
}

/// Σ_{i=0}^{upto} x̄_i [cos(ω(t − τ_{i+1})) − cos(ω(t − τ_i))].
pub fn x_nonlocal(modes: &PathwayModes, pathway: &LiouvillePathway, times: &[f64], k: usize, upto: usize, t: f64) -> Result<f64> {
    check_times(pathway, times)?;
    if upto > pathway.order() {
        return validation("x_nl beyond the pathway order");
    }
    let w = modes.modes[k].w;
    Ok((0..=upto)
        .map(|i| modes.mean(k, pathway.pair(i)) * ((w * (t - times[i + 1])).cos() - (w * (t - times[i])).cos()))
        .sum())
}

/// θ^(k)_{j,N}.
pub fn theta_helper(modes: &PathwayModes, pathway: &LiouvillePathway, times: &[f64], k: usize, j: usize) -> Result<C64> {
    check_times(pathway, times)?;
    check_step(pathway, j)?;
    let m = modes.modes[k];
    let w = m.w;
    let tj = times[j];
    let fluct: f64 = (0..=pathway.order())
        .map(|l| modes.delta(k, pathway.pair(l)) * ((w * (times[l + 1] - tj)).sin() - (w * (times[l] - tj)).sin()))
        .sum();
    let classical = m.xc * (w * tj).cos() + m.pc / w * (w * tj).sin() + x_nonlocal(modes, pathway, times, k, j - 1, tj)?;
    Ok(C64::new(classical, m.sp * fluct / modes.hbar))
}

/// ζ^(k)_{j,N}.
pub fn zeta_helper(modes: &PathwayModes, pathway: &LiouvillePathway, times: &[f64], k: usize, j: usize) -> Result<f64> {
    check_times(pathway, times)?;
    check_step(pathway, j)?;
    let w = modes.modes[k].w;
    let tj = times[j];
    Ok((j..=pathway.order())
        .map(|l| modes.delta(k, pathway.pair(l)) * ((w * (times[l + 1] - tj)).cos() - (w * (times[l] - tj)).cos()))
        .sum())
}

/// The coupling bracket of step j for mode k:
/// x^(α_j α_{j−1}) δ_{α'_{j−1} α'_j} − δ_{α_j α_{j−1}} x^(α'_{j−1} α'_j).
fn step_displacement(modes: &PathwayModes, pathway: &LiouvillePathway, k: usize, j: usize) -> C64 {
    let (a0, b0) = pathway.pair(j - 1);
    let (a1, b1) = pathway.pair(j);
    if a1 != a0 {
        modes.displacement(k, a1, a0)
    } else {
        -modes.displacement(k, b0, b1)
    }
}

fn theta_minus_zeta(modes: &PathwayModes, pathway: &LiouvillePathway, times: &[f64], k: usize, j: usize) -> Result<C64> {
    let s = f64::from(pathway.sign(j));
    Ok(theta_helper(modes, pathway, times, k, j)? - 0.5 * s * zeta_helper(modes, pathway, times, k, j)?)
}

fn require_order(pathway: &LiouvillePathway, times: &[f64], n: usize) -> Result<()> {
    if pathway.order() != n {
        return validation(format!("weight of order {n} requested for an order {} pathway", pathway.order()));
    }
    check_times(pathway, times)
}

/// χ⁽¹⁾ by the direct mode sum.
pub fn chi1(modes: &PathwayModes, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
    require_order(pathway, times, 1)?;
    let mut acc = C64::ZERO;
    for k in 0..modes.len() {
        let d = step_displacement(modes, pathway, k, 1);
        if d == C64::ZERO {
            continue;
        }
        let w2 = modes.modes[k].w.powi(2);
        acc -= w2 * d * theta_minus_zeta(modes, pathway, times, k, 1)?;
    }
    Ok(acc)
}

/// χ⁽²⁾ by the direct double mode sum, including the same-mode cross term.
pub fn chi2(modes: &PathwayModes, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
    require_order(pathway, times, 2)?;
    let n = modes.len();
    let s1 = f64::from(pathway.sign(1));
    let dtau = times[2] - times[1];
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for k in 0..n {
        let w2 = modes.modes[k].w.powi(2);
        let d1 = w2 * step_displacement(modes, pathway, k, 1);
        let d2 = w2 * step_displacement(modes, pathway, k, 2);
        first.push((d1, if d1 == C64::ZERO { C64::ZERO } else { theta_minus_zeta(modes, pathway, times, k, 1)? }));
        second.push((d2, if d2 == C64::ZERO { C64::ZERO } else { theta_minus_zeta(modes, pathway, times, k, 2)? }));
    }
    let mut acc = C64::ZERO;
    for (d2, t2) in &second {
        for (d1, t1) in &first {
            acc += d2 * d1 * t2 * t1;
        }
    }
    for k in 0..n {
        let m = modes.modes[k];
        let cross = C64::new(m.sp / m.w * (m.w * dtau).cos(), -modes.hbar / (2.0 * m.w) * s1 * (m.w * dtau).sin());
        acc += second[k].0 * first[k].0 * cross;
    }
    Ok(acc)
}

/// 𝓝^{ab}_{j,N}, including the free-evolved Wigner-center term.
pub fn n_function<S: KernelSource>(
    kernel: &StateIndexedKernel<'_, S>,
    pathway: &LiouvillePathway,
    times: &[f64],
    ab: (usize, usize),
    j: usize,
) -> Result<C64> {
    check_times(pathway, times)?;
    check_step(pathway, j)?;
    let tj = times[j];
    let s = f64::from(pathway.sign(j));
    let mut inner = C64::ZERO;
    for i in 0..=pathway.order() {
        let cd = pathway.pair(i);
        let diff = |tag| -> Result<C64> {
            Ok(kernel.appendix(tag, ab, cd, times[i + 1] - tj)? - kernel.appendix(tag, ab, cd, times[i] - tj)?)
        };
        inner += C64::I * diff(AppendixKernel::I)?;
        if i < j {
            inner += diff(AppendixKernel::J)?;
        } else {
            inner -= 0.5 * s * diff(AppendixKernel::K)?;
        }
    }
    Ok(-inner - kernel.center_c(ab.0, ab.1, tj)?)
}

/// The 𝓝 combination of step j: +𝓝^{α_j α_{j−1}} for a left action,
/// −𝓝^{α'_{j−1} α'_j} for a right one.
fn step_n<S: KernelSource>(
    kernel: &StateIndexedKernel<'_, S>,
    pathway: &LiouvillePathway,
    times: &[f64],
    j: usize,
) -> Result<C64> {
    let (a0, b0) = pathway.pair(j - 1);
    let (a1, b1) = pathway.pair(j);
    if a1 != a0 {
        n_function(kernel, pathway, times, (a1, a0), j)
    } else {
        Ok(-n_function(kernel, pathway, times, (b0, b1), j)?)
    }
}

/// χ⁽¹⁾ from the kernel assembly.
pub fn chi1_kernel<S: KernelSource>(kernel: &StateIndexedKernel<'_, S>, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
    require_order(pathway, times, 1)?;
    step_n(kernel, pathway, times, 1)
}

/// 𝓟(τ_2 − τ_1).
pub fn p_function<S: KernelSource>(kernel: &StateIndexedKernel<'_, S>, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
    require_order(pathway, times, 2)?;
    let dt = times[2] - times[1];
    let s1 = f64::from(pathway.sign(1));
    let lm = |ab, cd| -> Result<C64> {
        Ok(kernel.appendix(AppendixKernel::L, ab, cd, dt)? - C64::new(0.0, 0.5 * s1) * kernel.appendix(AppendixKernel::M, ab, cd, dt)?)
    };
    let ((a0, b0), (a1, b1), (a2, b2)) = (pathway.pair(0), pathway.pair(1), pathway.pair(2));
    // one factor per step: left steps carry x^(a_j a_{j−1}), right steps −x^(b_{j−1} b_j)
    let left1 = a1 != a0;
    let left2 = a2 != a1;
    Ok(match (left2, left1) {
        (true, true) => lm((a2, a1), (a1, a0))?,
        (true, false) => -lm((a2, a1), (b0, b1))?,
        (false, true) => -lm((a1, a0), (b1, b2))?,
        (false, false) => lm((b0, b1), (b1, b2))?,
    })
}

/// χ⁽²⁾ from the kernel assembly, 𝓝·𝓝 + 𝓟.
pub fn chi2_kernel<S: KernelSource>(kernel: &StateIndexedKernel<'_, S>, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
    require_order(pathway, times, 2)?;
    Ok(step_n(kernel, pathway, times, 2)? * step_n(kernel, pathway, times, 1)? + p_function(kernel, pathway, times)?)
}
