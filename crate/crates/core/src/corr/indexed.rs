use super::kernels::{BaseKernel, BathKernels};
use super::table::KernelTable;
use crate::model::{EigenBasisModel, SystemModel};
use crate::pathways::{check_times, LiouvillePathway};
use crate::{CMatrix, Error, Result, C64};

/// Anything that yields per-channel base kernels at a time.
pub trait KernelSource {
    fn channel_count(&self) -> usize;
    fn base(&self, channel: usize, kernel: BaseKernel, t: f64) -> Result<f64>;
    fn hbar(&self) -> f64;
}

impl KernelSource for BathKernels {
    fn channel_count(&self) -> usize {
        self.channels.len()
    }

    fn base(&self, channel: usize, kernel: BaseKernel, t: f64) -> Result<f64> {
        self.eval(channel, kernel, t)
    }

    fn hbar(&self) -> f64 {
        self.units.hbar
    }
}

/// A table together with ħ, queried at grid times only.
pub struct TableSource<'a> {
    pub table: &'a KernelTable,
    pub hbar: f64,
}

impl KernelSource for TableSource<'_> {
    fn channel_count(&self) -> usize {
        self.table.channel_count()
    }

    fn base(&self, channel: usize, kernel: BaseKernel, t: f64) -> Result<f64> {
        self.table.at_lag(channel, kernel, self.table.lag_of(t)?)
    }

    fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// The appendix kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AppendixKernel {
    I,
    J,
    K,
    L,
    M,
}

impl AppendixKernel {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "I" => Ok(Self::I),
            "J" => Ok(Self::J),
            "K" => Ok(Self::K),
            "L" => Ok(Self::L),
            "M" => Ok(Self::M),
            _ => Err(Error::Validation(format!("unknown appendix kernel tag {tag:?}"))),
        }
    }

    pub fn base(self) -> BaseKernel {
        match self {
            Self::I => BaseKernel::I,
            Self::J | Self::K => BaseKernel::J,
            Self::L => BaseKernel::L,
            Self::M => BaseKernel::M,
        }
    }
}

/// State-indexed kernels 𝓗^{ab}_{cd}, 𝓖^{ab}_{cd} and the appendix kernels,
/// assembled from per-channel base kernels through the channel coefficients.
pub struct StateIndexedKernel<'a, S: KernelSource> {
    source: &'a S,
    /// Per channel, the coefficient matrix g_ab (diagonal in the local basis).
    coefficients: Vec<CMatrix>,
}

impl<'a, S: KernelSource> StateIndexedKernel<'a, S> {
    pub fn local(source: &'a S, system: &SystemModel) -> Result<Self> {
        let m = system.dimension();
        let coefficients = (0..system.channel_count())
            .map(|c| CMatrix::from_fn(m, m, |a, b| if a == b { C64::new(system.coefficient(a, c), 0.0) } else { C64::ZERO }))
            .collect();
        Self::with_coefficients(source, coefficients)
    }

    pub fn eigen(source: &'a S, eigen: &EigenBasisModel) -> Result<Self> {
        Self::with_coefficients(source, eigen.channel_coefficients.clone())
    }

    pub fn with_coefficients(source: &'a S, coefficients: Vec<CMatrix>) -> Result<Self> {
        if coefficients.len() != source.channel_count() {
            return Err(Error::Validation("one coefficient matrix per channel is required".into()));
        }
        Ok(Self { source, coefficients })
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.first().map_or(0, |c| c.nrows())
    }

    pub fn hbar(&self) -> f64 {
        self.source.hbar()
    }

    fn check(&self, idx: &[usize]) -> Result<()> {
        let m = self.dimension();
        if idx.iter().any(|&i| i >= m) {
            return Err(Error::Validation(format!("state index out of range for dimension {m}")));
        }
        Ok(())
    }

    fn diag(&self, c: usize, a: usize) -> f64 {
        self.coefficients[c][(a, a)].re
    }

    /// Σ_c weight(c) · base_c(t).
    fn combine(&self, kernel: BaseKernel, t: f64, weight: impl Fn(usize) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for c in 0..self.coefficients.len() {
            let w = weight(c);
            if w != 0.0 {
                acc += w * self.source.base(c, kernel, t)?;
            }
        }
        Ok(acc)
    }

    /// 𝓗^{ab}_{cd}(t) = Σ_c (g_a − g_b)(g_c + g_d) h_c(t).
    pub fn h(&self, a: usize, b: usize, c: usize, d: usize, t: f64) -> Result<f64> {
        self.check(&[a, b, c, d])?;
        self.combine(BaseKernel::H, t, |k| (self.diag(k, a) - self.diag(k, b)) * (self.diag(k, c) + self.diag(k, d)))
    }

    /// 𝓖^{ab}_{cd}(t1) − 𝓖^{ab}_{cd}(t2).
    pub fn g_diff(&self, a: usize, b: usize, c: usize, d: usize, t1: f64, t2: f64) -> Result<f64> {
        self.check(&[a, b, c, d])?;
        let w = |k: usize| (self.diag(k, a) - self.diag(k, b)) * (self.diag(k, c) - self.diag(k, d));
        Ok(self.combine(BaseKernel::DeltaG, t1, w)? - self.combine(BaseKernel::DeltaG, t2, w)?)
    }

    /// 𝓖^{ab}_{cd}(t) − 𝓖^{ab}_{cd}(0).
    pub fn g_delta(&self, a: usize, b: usize, c: usize, d: usize, t: f64) -> Result<f64> {
        self.check(&[a, b, c, d])?;
        self.combine(BaseKernel::DeltaG, t, |k| {
            (self.diag(k, a) - self.diag(k, b)) * (self.diag(k, c) - self.diag(k, d))
        })
    }

    /// 𝓖^{ab}_{cd}(t) itself; finite for discrete baths only.
    pub fn g(&self, a: usize, b: usize, c: usize, d: usize, t: f64) -> Result<f64> {
        self.check(&[a, b, c, d])?;
        self.combine(BaseKernel::G, t, |k| (self.diag(k, a) - self.diag(k, b)) * (self.diag(k, c) - self.diag(k, d)))
    }

    /// Appendix kernel with upper indices (a, b) and lower indices (c, d).
    pub fn appendix(&self, tag: AppendixKernel, ab: (usize, usize), cd: (usize, usize), t: f64) -> Result<C64> {
        let (a, b) = ab;
        let (c, d) = cd;
        self.check(&[a, b, c, d])?;
        let mut acc = C64::ZERO;
        for k in 0..self.coefficients.len() {
            let g = &self.coefficients[k];
            let w = match tag {
                AppendixKernel::I | AppendixKernel::K => g[(a, b)] * (g[(c, c)] - g[(d, d)]),
                AppendixKernel::J => g[(a, b)] * (g[(c, c)] + g[(d, d)]) * 0.5,
                AppendixKernel::L | AppendixKernel::M => g[(a, b)] * g[(c, d)],
            };
            if w != C64::ZERO {
                acc += w * self.source.base(k, tag.base(), t)?;
            }
        }
        Ok(acc)
    }

    /// Σ_c (g_a − g_b) q_c(t), the center-phase accumulator of a pair.
    pub fn center_q(&self, a: usize, b: usize, t: f64) -> Result<f64> {
        self.combine(BaseKernel::CenterQ, t, |k| self.diag(k, a) - self.diag(k, b))
    }

    /// Σ_c g_ab c_c(t): −Σ_k ω_k² x^(a,b) times the free-evolved Wigner center.
    pub fn center_c(&self, a: usize, b: usize, t: f64) -> Result<C64> {
        let mut acc = C64::ZERO;
        for k in 0..self.coefficients.len() {
            let w = self.coefficients[k][(a, b)];
            if w != C64::ZERO {
                acc += w * self.source.base(k, BaseKernel::CenterC, t)?;
            }
        }
        Ok(acc)
    }

    /// Φ^(N,𝓗) of a pathway at times τ_0..τ_{N+1}.
    pub fn phi_h(&self, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
        check_times(pathway, times)?;
        let hb = self.hbar();
        let p = pathway.pairs();
        let mut acc = 0.0;
        for (j, &(a, b)) in p.iter().enumerate() {
            acc -= self.h(a, b, a, b, times[j + 1] - times[j])?;
        }
        for j in 1..p.len() {
            let (a, b) = p[j];
            for l in 0..j {
                let (c, d) = p[l];
                acc += self.h(a, b, c, d, times[j + 1] - times[l + 1])? - self.h(a, b, c, d, times[j + 1] - times[l])?
                    + self.h(a, b, c, d, times[j] - times[l])?
                    - self.h(a, b, c, d, times[j] - times[l + 1])?;
            }
        }
        Ok(C64::new(0.0, acc / hb))
    }

    /// Φ^(N,𝓖) of a pathway; only 𝓖 differences enter.
    pub fn phi_g(&self, pathway: &LiouvillePathway, times: &[f64]) -> Result<f64> {
        check_times(pathway, times)?;
        let p = pathway.pairs();
        let mut acc = 0.0;
        for (j, &(a, b)) in p.iter().enumerate() {
            acc += self.g_delta(a, b, a, b, times[j + 1] - times[j])?;
        }
        for j in 1..p.len() {
            let (a, b) = p[j];
            for l in 0..j {
                let (c, d) = p[l];
                acc -= self.g_diff(a, b, c, d, times[j + 1] - times[l + 1], times[j + 1] - times[l])?
                    + self.g_diff(a, b, c, d, times[j] - times[l], times[j] - times[l + 1])?;
            }
        }
        Ok(acc / self.hbar())
    }

    pub fn phi_tot(&self, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
        Ok(self.phi_h(pathway, times)? + self.phi_g(pathway, times)?)
    }

    /// Phase from nonzero Wigner centers, (i/ħ)Σ_j Σ_c δg_j [q_c(τ_{j+1}) − q_c(τ_j)].
    pub fn center_phase(&self, pathway: &LiouvillePathway, times: &[f64]) -> Result<C64> {
        check_times(pathway, times)?;
        let mut acc = 0.0;
        for (j, &(a, b)) in pathway.pairs().iter().enumerate() {
            acc += self.center_q(a, b, times[j + 1])? - self.center_q(a, b, times[j])?;
        }
        Ok(C64::new(0.0, acc / self.hbar()))
    }
}
