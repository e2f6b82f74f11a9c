use crate::pathways::{check_times, LiouvillePathway};
use crate::{Error, Result};

/// One mode as seen by a pathway: angular frequency (fs⁻¹) and its potential
/// minimum x_0^(n) in every system state.
#[derive(Clone, Debug)]
pub struct TrajectoryMode {
    pub w: f64,
    pub minima: Vec<f64>,
}

impl TrajectoryMode {
    fn mean(&self, pair: (usize, usize)) -> f64 {
        0.5 * (self.minima[pair.0] + self.minima[pair.1])
    }

    fn check(&self, pathway: &LiouvillePathway) -> Result<()> {
        let max = pathway.pairs().iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
        if max >= self.minima.len() {
            return Err(Error::Validation("pathway visits a state without a potential minimum".into()));
        }
        Ok(())
    }
}

fn segment_of(times: &[f64], s: f64) -> Result<usize> {
    let t = *times.last().unwrap();
    if !(s >= 0.0 && s <= t) {
        return Err(Error::Validation(format!("time {s} outside [0, {t}]")));
    }
    let n = times.len() - 2;
    Ok((0..=n).find(|&j| s <= times[j + 1]).unwrap_or(n))
}

/// Position and momentum of the mode at time `s` when it starts at
/// (x0, p0) and follows the mean potential of the pathway's active pairs.
pub fn classical_trajectory(
    pathway: &LiouvillePathway,
    times: &[f64],
    mode: &TrajectoryMode,
    initial: (f64, f64),
    s: f64,
) -> Result<(f64, f64)> {
    check_times(pathway, times)?;
    mode.check(pathway)?;
    let j = segment_of(times, s)?;
    let w = mode.w;
    let (x0, p0) = initial;
    let mut x = x0 * (w * s).cos() + p0 / w * (w * s).sin();
    let mut p = -w * x0 * (w * s).sin() + p0 * (w * s).cos();
    for i in 0..=j {
        let hi = if i == j { s } else { times[i + 1] };
        let xb = mode.mean(pathway.pair(i));
        x += xb * ((w * (s - hi)).cos() - (w * (s - times[i])).cos());
        p += xb * w * ((w * (s - times[i])).sin() - (w * (s - hi)).sin());
    }
    Ok((x, p))
}

/// ∫ x(s) ds over segment `j`, [τ_j, τ_{j+1}], in closed form.
pub fn integrated_trajectory(
    pathway: &LiouvillePathway,
    times: &[f64],
    mode: &TrajectoryMode,
    initial: (f64, f64),
    j: usize,
) -> Result<f64> {
    check_times(pathway, times)?;
    mode.check(pathway)?;
    if j > pathway.order() {
        return Err(Error::Validation(format!("segment {j} beyond order {}", pathway.order())));
    }
    let w = mode.w;
    let (x0, p0) = initial;
    let (a, b) = (times[j], times[j + 1]);
    let mut v = x0 / w * ((w * b).sin() - (w * a).sin()) - p0 / (w * w) * ((w * b).cos() - (w * a).cos());
    for i in 0..j {
        let xb = mode.mean(pathway.pair(i));
        let prim = |s: f64| ((w * (s - times[i + 1])).sin() - (w * (s - times[i])).sin()) / w;
        v += xb * (prim(b) - prim(a));
    }
    let d = b - a;
    v += mode.mean(pathway.pair(j)) * (d - (w * d).sin() / w);
    Ok(v)
}
