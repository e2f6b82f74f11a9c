use std::collections::HashMap;

use super::kernels::{BaseKernel, BathKernels};
use crate::{Error, Result};

/// Base kernels tabulated on a uniform grid t_i = i·dt, i = 0..len.
///
/// Lookups are by integer lag only. Negative lags use the kernel's parity;
/// the center sums are only stored for non-negative times.
#[derive(Clone, Debug)]
pub struct KernelTable {
    dt: f64,
    len: usize,
    channels: usize,
    discrete: Vec<bool>,
    data: HashMap<(usize, BaseKernel), Vec<f64>>,
}

impl KernelTable {
    /// Tabulates h and Δg for every channel plus any `extra` kernels
    /// (appendix and center kernels are skipped on continuum channels).
    pub fn build(kernels: &BathKernels, dt: f64, len: usize, extra: &[BaseKernel]) -> Result<Self> {
        if !(dt > 0.0) || len < 1 {
            return Err(Error::Validation("kernel table needs dt > 0 and at least one point".into()));
        }
        let mut data = HashMap::new();
        for (c, ch) in kernels.channels.iter().enumerate() {
            let mut wanted = vec![BaseKernel::H, BaseKernel::DeltaG];
            if ch.is_discrete() {
                for &k in extra {
                    if !wanted.contains(&k) {
                        wanted.push(k);
                    }
                }
            }
            for k in wanted {
                let v = (0..len).map(|i| ch.eval(k, i as f64 * dt)).collect::<Result<Vec<_>>>()?;
                data.insert((c, k), v);
            }
        }
        Ok(Self {
            dt,
            len,
            channels: kernels.channels.len(),
            discrete: kernels.channels.iter().map(|c| c.is_discrete()).collect(),
            data,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn channel_count(&self) -> usize {
        self.channels
    }

    pub fn is_discrete(&self, channel: usize) -> bool {
        self.discrete[channel]
    }

    pub fn time_grid(&self) -> Vec<f64> {
        (0..self.len).map(|i| i as f64 * self.dt).collect()
    }

    pub fn values(&self, channel: usize, kernel: BaseKernel) -> Option<&[f64]> {
        self.data.get(&(channel, kernel)).map(Vec::as_slice)
    }

    /// Kernel at t = lag·dt.
    pub fn at_lag(&self, channel: usize, kernel: BaseKernel, lag: isize) -> Result<f64> {
        let v = self
            .values(channel, kernel)
            .ok_or_else(|| Error::Validation(format!("kernel {kernel:?} not tabulated for channel {channel}")))?;
        let i = lag.unsigned_abs();
        if i >= self.len {
            return Err(Error::Validation(format!("lag {lag} beyond table of {} points", self.len)));
        }
        match (lag < 0, kernel.parity()) {
            (false, _) => Ok(v[i]),
            (true, Some(p)) => Ok(p * v[i]),
            (true, None) => Err(Error::Validation("center kernels are tabulated for t >= 0 only".into())),
        }
    }

    /// Grid lag of time `t`; errors if `t` is not a grid time.
    pub fn lag_of(&self, t: f64) -> Result<isize> {
        let r = t / self.dt;
        let lag = r.round();
        if (r - lag).abs() > 1e-6 {
            return Err(Error::Validation(format!("time {t} fs is not on the kernel grid")));
        }
        Ok(lag as isize)
    }
}
