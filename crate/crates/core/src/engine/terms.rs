//! Per-pathway factor tables.
//!
//! Every factor of the integrand except χ depends on the difference of two
//! time slots, slot 0 being τ_0 = 0 and slot N+1 the output time. Factors
//! that share a slot pair are merged in the exponent and exponentiated once.

use crate::corr::{KernelSource, KernelTable, StateIndexedKernel, TableSource};
use crate::pathways::LiouvillePathway;
use crate::{Result, C64};

pub(crate) struct PhaseTables {
    slots: usize,
    len: usize,
    /// exp of the merged exponent for slot pair (hi, lo), hi > lo.
    tables: Vec<Option<Vec<C64>>>,
    /// Product of zero-lag factors.
    pub constant: C64,
}

impl PhaseTables {
    fn idx(&self, hi: usize, lo: usize) -> usize {
        hi * self.slots + lo
    }

    /// Table for (hi, lo), or `None` when no factor couples the pair.
    pub fn get(&self, hi: usize, lo: usize) -> Option<&[C64]> {
        self.tables[self.idx(hi, lo)].as_deref()
    }

    /// Table for (hi, lo) with missing pairs replaced by ones.
    pub fn table_or_ones(&self, hi: usize, lo: usize) -> Vec<C64> {
        self.get(hi, lo).map_or_else(|| vec![C64::ONE; self.len], <[C64]>::to_vec)
    }

    /// Product of every factor at the slot grid indices `idx` (idx[0] = 0).
    pub fn value(&self, idx: &[usize]) -> C64 {
        let mut v = self.constant;
        for hi in 1..self.slots {
            for lo in 0..hi {
                if let Some(t) = self.get(hi, lo) {
                    v *= t[idx[hi] - idx[lo]];
                }
            }
        }
        v
    }
}

/// Exponent accumulator keyed by slot pair.
struct Exponents {
    slots: usize,
    len: usize,
    data: Vec<Option<Vec<C64>>>,
    constant: C64,
}

impl Exponents {
    fn new(slots: usize, len: usize) -> Self {
        Self { slots, len, data: vec![None; slots * slots], constant: C64::ZERO }
    }

    fn add(&mut self, hi: usize, lo: usize, values: &[C64], sign: f64) {
        if hi == lo {
            self.constant += sign * values[0];
            return;
        }
        let len = self.len;
        let slot = self.data[hi * self.slots + lo].get_or_insert_with(|| vec![C64::ZERO; len]);
        for (s, v) in slot.iter_mut().zip(values) {
            *s += sign * v;
        }
    }

    fn finish(self) -> PhaseTables {
        let tables = self.data.into_iter().map(|t| t.map(|v| v.into_iter().map(C64::exp).collect())).collect();
        PhaseTables { slots: self.slots, len: self.len, tables, constant: self.constant.exp() }
    }
}

/// Builds the energy, influence and center-phase tables of a pathway in the
/// basis described by `kernel`, with `energies` the potential-minimum energies.
pub(crate) fn phase_tables(
    pathway: &LiouvillePathway,
    energies: &[f64],
    kernel: &StateIndexedKernel<'_, TableSource<'_>>,
    table: &KernelTable,
    centers: bool,
) -> Result<PhaseTables> {
    let n = pathway.order();
    let len = table.len();
    let dt = table.dt();
    let hbar = kernel.hbar();
    let p = pathway.pairs();
    let mut ex = Exponents::new(n + 2, len);
    let times: Vec<f64> = (0..len).map(|i| i as f64 * dt).collect();

    let mut buf = vec![C64::ZERO; len];
    for (j, &(a, b)) in p.iter().enumerate() {
        let de = energies[a] - energies[b];
        for (i, &t) in times.iter().enumerate() {
            let h = kernel.h(a, b, a, b, t)?;
            let g = kernel.g_delta(a, b, a, b, t)?;
            buf[i] = C64::new(g / hbar, -(de * t + h) / hbar);
        }
        ex.add(j + 1, j, &buf, 1.0);
    }

    for j in 1..p.len() {
        let (a, b) = p[j];
        for l in 0..j {
            let (c, d) = p[l];
            for (i, &t) in times.iter().enumerate() {
                let h = kernel.h(a, b, c, d, t)?;
                let g = kernel.g_delta(a, b, c, d, t)?;
                buf[i] = C64::new(-g / hbar, h / hbar);
            }
            ex.add(j + 1, l + 1, &buf, 1.0);
            ex.add(j + 1, l, &buf, -1.0);
            ex.add(j, l, &buf, 1.0);
            if j != l + 1 {
                ex.add(j, l + 1, &buf, -1.0);
            }
        }
    }

    if centers {
        for (j, &(a, b)) in p.iter().enumerate() {
            for (i, &t) in times.iter().enumerate() {
                buf[i] = C64::new(0.0, kernel.center_q(a, b, t)? / hbar);
            }
            ex.add(j + 1, 0, &buf, 1.0);
            ex.add(j, 0, &buf, -1.0);
        }
    }
    Ok(ex.finish())
}

/// Signed-lag tables of the 𝓝 combination of each step, for eigenbasis
/// weights: X_j = Σ_s table[j][s][i_s − i_j + len − 1].
pub(crate) struct StepTables {
    pub len: usize,
    pub steps: Vec<Vec<Vec<C64>>>,
    /// 𝓟 at lag i_2 − i_1 ≥ 0, order 2 only.
    pub p: Vec<C64>,
}

impl StepTables {
    #[inline]
    pub fn step(&self, j: usize, idx: &[usize]) -> C64 {
        let ij = idx[j] as isize;
        let off = self.len as isize - 1;
        self.steps[j - 1].iter().enumerate().map(|(s, t)| t[(idx[s] as isize - ij + off) as usize]).sum()
    }
}

pub(crate) fn step_tables<S: KernelSource>(
    pathway: &LiouvillePathway,
    kernel: &StateIndexedKernel<'_, S>,
    dt: f64,
    len: usize,
    centers: bool,
) -> Result<StepTables> {
    use crate::corr::AppendixKernel::{I, J, K, L, M};
    let n = pathway.order();
    let p = pathway.pairs();
    let width = 2 * len - 1;
    let off = len as isize - 1;
    let mut steps = Vec::with_capacity(n);
    for j in 1..=n {
        let (a0, b0) = p[j - 1];
        let (a1, b1) = p[j];
        let (ab, sign) = if a1 != a0 { ((a1, a0), 1.0) } else { ((b0, b1), -1.0) };
        let sj = f64::from(pathway.sign(j));
        let mut per_slot = Vec::with_capacity(n + 2);
        for s in 0..n + 2 {
            let mut v = vec![C64::ZERO; width];
            for (li, slot) in v.iter_mut().enumerate() {
                let lag = li as isize - off;
                // only lags with the right sign are ever realized
                if (s < j && lag > 0) || (s > j && lag < 0) || (s == j && lag != 0) {
                    continue;
                }
                let t = lag as f64 * dt;
                let mut inner = C64::ZERO;
                if s >= 1 {
                    inner += C64::I * kernel.appendix(I, ab, p[s - 1], t)?;
                    if s <= j {
                        inner += kernel.appendix(J, ab, p[s - 1], t)?;
                    } else {
                        inner -= 0.5 * sj * kernel.appendix(K, ab, p[s - 1], t)?;
                    }
                }
                if s <= n {
                    inner -= C64::I * kernel.appendix(I, ab, p[s], t)?;
                    if s < j {
                        inner -= kernel.appendix(J, ab, p[s], t)?;
                    } else {
                        inner += 0.5 * sj * kernel.appendix(K, ab, p[s], t)?;
                    }
                }
                let mut nv = -inner;
                if s == 0 && centers {
                    nv -= kernel.center_c(ab.0, ab.1, -t)?;
                }
                *slot = sign * nv;
            }
            per_slot.push(v);
        }
        steps.push(per_slot);
    }

    let mut ptab = Vec::new();
    if n == 2 {
        let s1 = f64::from(pathway.sign(1));
        let left1 = p[1].0 != p[0].0;
        let left2 = p[2].0 != p[1].0;
        let ((a0, b0), (a1, b1), (a2, b2)) = (p[0], p[1], p[2]);
        let (ab, cd, sign) = match (left2, left1) {
            (true, true) => ((a2, a1), (a1, a0), 1.0),
            (true, false) => ((a2, a1), (b0, b1), -1.0),
            (false, true) => ((a1, a0), (b1, b2), -1.0),
            (false, false) => ((b0, b1), (b1, b2), 1.0),
        };
        for i in 0..len {
            let t = i as f64 * dt;
            let v = kernel.appendix(L, ab, cd, t)? - C64::new(0.0, 0.5 * s1) * kernel.appendix(M, ab, cd, t)?;
            ptab.push(sign * v);
        }
    }
    Ok(StepTables { len, steps, p: ptab })
}
