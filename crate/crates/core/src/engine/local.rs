use super::terms::{phase_tables, PhaseTables};
use super::QuadratureSpec;
use crate::corr::{BaseKernel, BathKernels, KernelTable, StateIndexedKernel, TableSource};
use crate::error::validation;
use crate::model::OpenSystem;
use crate::pathways::{theta_envfree, LiouvillePathway, PathwayCache};
use crate::{CMatrix, Result, C64};

/// Highest order the local-basis engine evaluates.
pub const LOCAL_MAX_ORDER: usize = 3;

/// Local-basis reduced density matrix by nested uniform-grid quadrature.
pub struct LocalEngine<'a> {
    system: &'a OpenSystem,
    spec: QuadratureSpec,
    table: KernelTable,
    cache: PathwayCache,
}

impl<'a> LocalEngine<'a> {
    pub fn new(system: &'a OpenSystem, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if spec.max_order > LOCAL_MAX_ORDER {
            return validation(format!("local engine supports orders up to {LOCAL_MAX_ORDER}"));
        }
        let kernels = BathKernels::new(&system.bath, &system.units, spec.t_max)?;
        let extra: &[BaseKernel] = if system.bath.has_centers() { &[BaseKernel::CenterQ] } else { &[] };
        let table = KernelTable::build(&kernels, spec.dt(), spec.grid_points, extra)?;
        let cache = PathwayCache::new(system.dimension(), spec.max_order);
        Ok(Self { system, spec, table, cache })
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn table(&self) -> &KernelTable {
        &self.table
    }

    pub fn pathways(&self) -> &PathwayCache {
        &self.cache
    }

    pub(crate) fn source(&self) -> TableSource<'_> {
        TableSource { table: &self.table, hbar: self.system.units.hbar }
    }

    /// Phase tables and constant prefactor of every order-`n` pathway ending on
    /// a final pair accepted by `finals`, skipping pathways with zero weight.
    pub(crate) fn compiled(
        &self,
        n: usize,
        finals: &dyn Fn((usize, usize)) -> bool,
    ) -> Result<Vec<(LiouvillePathway, C64, PhaseTables)>> {
        if n > self.spec.max_order {
            return validation(format!("order {n} exceeds the configured maximum {}", self.spec.max_order));
        }
        let m = self.system.dimension();
        let source = self.source();
        let kernel = StateIndexedKernel::local(&source, &self.system.system)?;
        let hbar = self.system.units.hbar;
        let pref_n = C64::new(0.0, -1.0 / hbar).powu(n as u32);
        let mut out = Vec::new();
        for last in (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|&f| finals(f)) {
            for p in self.cache.get(n, last) {
                let (a0, b0) = p.initial();
                let pref = self.system.initial.element(a0, b0) * theta_envfree(p, &self.system.system.couplings) * pref_n;
                if pref == C64::ZERO {
                    continue;
                }
                let tables =
                    phase_tables(p, &self.system.system.energies, &kernel, &self.table, self.system.bath.has_centers())?;
                out.push((p.clone(), pref, tables));
            }
        }
        Ok(out)
    }

    /// Order-`n` contribution to ρ(t) at every grid time.
    pub fn order_rdm(&self, n: usize) -> Result<Vec<CMatrix>> {
        if n > self.spec.max_order {
            return validation(format!("order {n} exceeds the configured maximum {}", self.spec.max_order));
        }
        let m = self.system.dimension();
        let g = self.spec.grid_points;
        let mut out = vec![CMatrix::zeros(m, m); g];
        for (p, pref, tables) in self.compiled(n, &|_| true)? {
            let series = integrate(n, &tables, self.spec.dt(), g);
            let (a, b) = p.last();
            for (rho, v) in out.iter_mut().zip(series) {
                rho[(a, b)] += pref * tables.constant * v;
            }
        }
        Ok(out)
    }

    /// ⟨n_N|ρ^(N)(t)|n'_N⟩ at grid index `t_index`.
    pub fn local_rdm_order(&self, n: usize, t_index: usize, element: (usize, usize)) -> Result<C64> {
        let m = self.system.dimension();
        if element.0 >= m || element.1 >= m {
            return validation("element out of range");
        }
        if t_index >= self.spec.grid_points {
            return validation("time index beyond the grid");
        }
        let g = t_index + 1;
        let mut acc = C64::ZERO;
        for (_, pref, tables) in self.compiled(n, &|f| f == element)? {
            acc += pref * tables.constant * integrate(n, &tables, self.spec.dt(), g)[t_index];
        }
        Ok(acc)
    }
}

/// dt·Σ_{i=0}^{m} f_i with half weight at both ends; zero for m = 0.
#[inline]
fn trapezoid(m: usize, dt: f64, mut f: impl FnMut(usize) -> C64) -> C64 {
    if m == 0 {
        return C64::ZERO;
    }
    let mut s = 0.5 * (f(0) + f(m));
    for i in 1..m {
        s += f(i);
    }
    s * dt
}

/// Nested simplex integral of one pathway's phase product for output
/// indices 0..g. Factors not involving an inner variable are hoisted.
pub(crate) fn integrate(n: usize, t: &PhaseTables, dt: f64, g: usize) -> Vec<C64> {
    match n {
        0 => {
            let f1 = t.table_or_ones(1, 0);
            (0..g).map(|i| f1[i]).collect()
        }
        1 => {
            let (f1, b12, f2) = (t.table_or_ones(1, 0), t.table_or_ones(2, 1), t.table_or_ones(2, 0));
            (0..g).map(|tt| f2[tt] * trapezoid(tt, dt, |i1| f1[i1] * b12[tt - i1])).collect()
        }
        2 => {
            let (f1, b12, b13) = (t.table_or_ones(1, 0), t.table_or_ones(2, 1), t.table_or_ones(3, 1));
            let (f2, b23, f3) = (t.table_or_ones(2, 0), t.table_or_ones(3, 2), t.table_or_ones(3, 0));
            let mut p1 = vec![C64::ZERO; g];
            (0..g)
                .map(|tt| {
                    for i1 in 0..=tt {
                        p1[i1] = f1[i1] * b13[tt - i1];
                    }
                    let outer = trapezoid(tt, dt, |i2| {
                        f2[i2] * b23[tt - i2] * trapezoid(i2, dt, |i1| p1[i1] * b12[i2 - i1])
                    });
                    f3[tt] * outer
                })
                .collect()
        }
        3 => {
            let (f1, b12, b13, b14) =
                (t.table_or_ones(1, 0), t.table_or_ones(2, 1), t.table_or_ones(3, 1), t.table_or_ones(4, 1));
            let (f2, b23, b24) = (t.table_or_ones(2, 0), t.table_or_ones(3, 2), t.table_or_ones(4, 2));
            let (f3, b34, f4) = (t.table_or_ones(3, 0), t.table_or_ones(4, 3), t.table_or_ones(4, 0));
            let mut p1 = vec![C64::ZERO; g];
            let mut inner2 = vec![C64::ZERO; g];
            (0..g)
                .map(|tt| {
                    let outer = trapezoid(tt, dt, |i3| {
                        for i1 in 0..=i3 {
                            p1[i1] = f1[i1] * b13[i3 - i1] * b14[tt - i1];
                        }
                        for i2 in 0..=i3 {
                            inner2[i2] = f2[i2] * b23[i3 - i2] * b24[tt - i2] * trapezoid(i2, dt, |i1| p1[i1] * b12[i2 - i1]);
                        }
                        f3[i3] * b34[tt - i3] * trapezoid(i3, dt, |i2| inner2[i2])
                    });
                    f4[tt] * outer
                })
                .collect()
        }
        _ => unreachable!("orders above 3 are rejected upstream"),
    }
}
