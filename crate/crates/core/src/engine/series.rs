use std::io::Write;

use super::{Basis, EigenEngine, LocalEngine, QuadratureSpec};
use crate::error::validation;
use crate::model::OpenSystem;
use crate::{CMatrix, Result, C64};

/// Per-order contributions to the local-basis reduced density matrix.
#[derive(Clone, Debug)]
pub struct TimeSeriesResult {
    pub times: Vec<f64>,
    pub basis: Basis,
    /// `orders[n][i]`: order-n contribution at `times[i]`.
    pub orders: Vec<Vec<CMatrix>>,
}

/// Observables reported in CSV output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    SigmaX,
    SigmaY,
    SigmaZ,
    Population(usize),
    ReElement(usize, usize),
    ImElement(usize, usize),
    /// Nonlinear: per-order columns report the purity of the partial sum.
    Purity,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Self::SigmaX => "sigma_x".into(),
            Self::SigmaY => "sigma_y".into(),
            Self::SigmaZ => "sigma_z".into(),
            Self::Population(n) => format!("pop{}", n + 1),
            Self::ReElement(a, b) => format!("re_rho{}{}", a + 1, b + 1),
            Self::ImElement(a, b) => format!("im_rho{}{}", a + 1, b + 1),
            Self::Purity => "purity".into(),
        }
    }

    /// Linear observables evaluated on any matrix.
    pub(crate) fn linear(&self, r: &CMatrix) -> f64 {
        match *self {
            Self::SigmaX => 2.0 * r[(0, 1)].re,
            Self::SigmaY => -2.0 * r[(0, 1)].im,
            Self::SigmaZ => (r[(0, 0)] - r[(1, 1)]).re,
            Self::Population(n) => r[(n, n)].re,
            Self::ReElement(a, b) => r[(a, b)].re,
            Self::ImElement(a, b) => r[(a, b)].im,
            Self::Purity => (r * r).trace().re,
        }
    }

    pub(crate) fn check(&self, m: usize) -> Result<()> {
        let ok = match *self {
            Self::SigmaX | Self::SigmaY | Self::SigmaZ => m == 2,
            Self::Population(n) => n < m,
            Self::ReElement(a, b) | Self::ImElement(a, b) => a < m && b < m,
            Self::Purity => true,
        };
        if ok {
            Ok(())
        } else {
            validation(format!("observable {} does not apply to a {m}-state system", self.name()))
        }
    }
}

/// Hermitian part with unit trace.
pub fn guard_density(r: &CMatrix) -> CMatrix {
    let h = (r + r.adjoint()) * C64::new(0.5, 0.0);
    let tr = h.trace().re;
    if tr.abs() > 0.0 {
        h / C64::new(tr, 0.0)
    } else {
        h
    }
}

impl TimeSeriesResult {
    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.orders[0].first().map_or(0, |r| r.nrows())
    }

    /// Σ_{n ≤ upto} ρ^(n)(t), unguarded.
    pub fn partial_sum(&self, upto: usize) -> Vec<CMatrix> {
        let upto = upto.min(self.max_order());
        (0..self.times.len())
            .map(|i| self.orders[..=upto].iter().map(|o| &o[i]).fold(CMatrix::zeros(self.dimension(), self.dimension()), |a, b| a + b))
            .collect()
    }

    /// Largest |ρ − ρ†| entry of the partial sum before any guard.
    pub fn hermiticity_defect(&self, upto: usize) -> f64 {
        self.partial_sum(upto)
            .iter()
            .map(|r| (r - r.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Hermitized, trace-normalized partial sums.
    pub fn density(&self, upto: usize) -> Vec<CMatrix> {
        self.partial_sum(upto).iter().map(guard_density).collect()
    }

    /// Bloch vector (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) of the guarded partial sum; two states only.
    pub fn bloch(&self, upto: usize) -> Result<Vec<[f64; 3]>> {
        if self.dimension() != 2 {
            return validation("the Bloch vector needs a two-state system");
        }
        Ok(self
            .density(upto)
            .iter()
            .map(|r| [Observable::SigmaX.linear(r), Observable::SigmaY.linear(r), Observable::SigmaZ.linear(r)])
            .collect())
    }

    /// Tr ρ² of the guarded partial sum; ½(1 + |a|²) for a qubit.
    pub fn purity(&self, upto: usize) -> Vec<f64> {
        self.density(upto).iter().map(|r| Observable::Purity.linear(r)).collect()
    }

    /// Observable on the order-n contribution (linear) or on the partial sum
    /// through n (purity).
    pub fn order_series(&self, obs: Observable, n: usize) -> Result<Vec<f64>> {
        obs.check(self.dimension())?;
        Ok(match obs {
            Observable::Purity => self.purity(n),
            _ => self.orders[n].iter().map(|r| obs.linear(r)).collect(),
        })
    }

    /// Observable on the guarded total through `upto`.
    pub fn total_series(&self, obs: Observable, upto: usize) -> Result<Vec<f64>> {
        obs.check(self.dimension())?;
        Ok(self.density(upto).iter().map(|r| obs.linear(r)).collect())
    }

    /// CSV with columns t_fs, then `<obs>_order<N>` for each order and `<obs>_total`.
    pub fn write_csv<W: Write>(&self, mut w: W, observables: &[Observable], prefix: &str) -> Result<()> {
        let mut header = vec!["t_fs".to_string()];
        let mut cols = Vec::new();
        for obs in observables {
            for n in 0..=self.max_order() {
                header.push(format!("{prefix}{}_order{n}", obs.name()));
                cols.push(self.order_series(*obs, n)?);
            }
            header.push(format!("{prefix}{}_total", obs.name()));
            cols.push(self.total_series(*obs, self.max_order())?);
        }
        writeln!(w, "{}", header.join(","))?;
        for (i, t) in self.times.iter().enumerate() {
            let mut row = vec![format!("{t:.6}")];
            row.extend(cols.iter().map(|c| format!("{:.12e}", c[i])));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Runs orders 0..=spec.max_order in the requested basis and reports every
/// contribution in the local basis. The eigenbasis needs a discrete bath.
pub fn assemble_series(system: &OpenSystem, spec: QuadratureSpec, basis: Basis) -> Result<TimeSeriesResult> {
    let orders = match basis {
        Basis::Local => {
            let e = LocalEngine::new(system, spec)?;
            (0..=spec.max_order).map(|n| e.order_rdm(n)).collect::<Result<Vec<_>>>()?
        }
        Basis::Eigen => {
            let e = EigenEngine::new(system, spec)?;
            (0..=spec.max_order).map(|n| e.order_rdm_local(n)).collect::<Result<Vec<_>>>()?
        }
    };
    Ok(TimeSeriesResult { times: spec.times(), basis, orders })
}
