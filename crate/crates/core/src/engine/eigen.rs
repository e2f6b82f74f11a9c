use super::terms::{phase_tables, step_tables};
use super::QuadratureSpec;
use crate::corr::{BaseKernel, BathKernels, KernelTable, StateIndexedKernel, TableSource};
use crate::error::validation;
use crate::model::{EigenBasisModel, OpenSystem};
use crate::pathways::PathwayCache;
use crate::{CMatrix, Result, C64};

/// Highest order the eigenbasis engine evaluates.
pub const EIGEN_MAX_ORDER: usize = 2;

/// Eigenbasis reduced density matrix, orders 0 to 2, on a discrete bath.
///
/// The perturbation is the off-diagonal part of the rotated bath coupling,
/// so pathway weights are the χ functions rather than coupling products.
pub struct EigenEngine<'a> {
    system: &'a OpenSystem,
    eigen: EigenBasisModel,
    energies: Vec<f64>,
    spec: QuadratureSpec,
    table: KernelTable,
    cache: PathwayCache,
    rho0: CMatrix,
}

impl<'a> EigenEngine<'a> {
    /// `system` must have a discrete bath; see [`crate::model::BathSpec::discretized`].
    pub fn new(system: &'a OpenSystem, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if spec.max_order > EIGEN_MAX_ORDER {
            return validation(format!("eigenbasis engine supports orders up to {EIGEN_MAX_ORDER}"));
        }
        if !system.bath.is_discrete() {
            return validation("the eigenbasis engine needs a discrete or discretized bath");
        }
        let eigen = system.eigenbasis()?;
        let energies = eigen.minimum_energies(&system.channel_reorganization());
        let kernels = BathKernels::new(&system.bath, &system.units, spec.t_max)?;
        let mut extra = vec![BaseKernel::I, BaseKernel::J, BaseKernel::L, BaseKernel::M];
        if system.bath.has_centers() {
            extra.extend([BaseKernel::CenterQ, BaseKernel::CenterC]);
        }
        let table = KernelTable::build(&kernels, spec.dt(), spec.grid_points, &extra)?;
        let cache = PathwayCache::new(system.dimension(), spec.max_order);
        let rho0 = eigen.to_eigen(system.initial.matrix());
        Ok(Self { system, eigen, energies, spec, table, cache, rho0 })
    }

    pub fn eigenbasis(&self) -> &EigenBasisModel {
        &self.eigen
    }

    /// E_α used in the energy phases.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Order-`n` contribution to ⟨α|ρ(t)|α'⟩ at every grid time.
    pub fn order_rdm(&self, n: usize) -> Result<Vec<CMatrix>> {
        if n > self.spec.max_order {
            return validation(format!("order {n} exceeds the configured maximum {}", self.spec.max_order));
        }
        let m = self.system.dimension();
        let g = self.spec.grid_points;
        let dt = self.spec.dt();
        let hbar = self.system.units.hbar;
        let source = TableSource { table: &self.table, hbar };
        let kernel = StateIndexedKernel::eigen(&source, &self.eigen)?;
        let centers = self.system.bath.has_centers();
        let pref_n = C64::new(0.0, -1.0 / hbar).powu(n as u32);
        let w = |m: usize, i: usize| if m == 0 { 0.0 } else if i == 0 || i == m { 0.5 * dt } else { dt };

        let mut out = vec![CMatrix::zeros(m, m); g];
        for a in 0..m {
            for b in 0..m {
                for p in self.cache.get(n, (a, b)) {
                    let (a0, b0) = p.initial();
                    let rho = self.rho0[(a0, b0)];
                    if rho == C64::ZERO {
                        continue;
                    }
                    let phase = phase_tables(p, &self.energies, &kernel, &self.table, centers)?;
                    let pref = rho * pref_n * phase.constant;
                    match n {
                        0 => {
                            let f = phase.table_or_ones(1, 0);
                            for tt in 0..g {
                                out[tt][(a, b)] += pref * f[tt];
                            }
                        }
                        1 => {
                            let steps = step_tables(p, &kernel, dt, g, centers)?;
                            let (f1, b12, f2) = (phase.table_or_ones(1, 0), phase.table_or_ones(2, 1), phase.table_or_ones(2, 0));
                            for tt in 0..g {
                                let mut acc = C64::ZERO;
                                for i1 in 0..=tt {
                                    let chi = steps.step(1, &[0, i1, tt]);
                                    acc += w(tt, i1) * f1[i1] * b12[tt - i1] * chi;
                                }
                                out[tt][(a, b)] += pref * f2[tt] * acc;
                            }
                        }
                        _ => {
                            let steps = step_tables(p, &kernel, dt, g, centers)?;
                            let (f1, b12, b13) = (phase.table_or_ones(1, 0), phase.table_or_ones(2, 1), phase.table_or_ones(3, 1));
                            let (f2, b23, f3) = (phase.table_or_ones(2, 0), phase.table_or_ones(3, 2), phase.table_or_ones(3, 0));
                            for tt in 0..g {
                                let mut acc = C64::ZERO;
                                for i2 in 0..=tt {
                                    let w2 = w(tt, i2);
                                    if w2 == 0.0 {
                                        continue;
                                    }
                                    let mut inner = C64::ZERO;
                                    for i1 in 0..=i2 {
                                        let idx = [0, i1, i2, tt];
                                        let chi = steps.step(2, &idx) * steps.step(1, &idx) + steps.p[i2 - i1];
                                        inner += w(i2, i1) * f1[i1] * b12[i2 - i1] * b13[tt - i1] * chi;
                                    }
                                    acc += w2 * f2[i2] * b23[tt - i2] * inner;
                                }
                                out[tt][(a, b)] += pref * f3[tt] * acc;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Order-`n` contribution rotated back to the local basis.
    pub fn order_rdm_local(&self, n: usize) -> Result<Vec<CMatrix>> {
        Ok(self.order_rdm(n)?.iter().map(|r| self.eigen.to_local(r)).collect())
    }

    /// ⟨α|ρ^(N)(t)|α'⟩ at grid index `t_index`.
    pub fn eigen_rdm_order(&self, n: usize, t_index: usize, element: (usize, usize)) -> Result<C64> {
        let m = self.system.dimension();
        if element.0 >= m || element.1 >= m || t_index >= self.spec.grid_points {
            return validation("element or time index out of range");
        }
        Ok(self.order_rdm(n)?[t_index][element])
    }
}
