//! Exact reference by dense propagation of the system and a few truncated
//! Fock modes.

use std::io::Write;

use nalgebra::{DVector, SymmetricEigen};

use crate::engine::Observable;
use crate::error::validation;
use crate::model::{OpenSystem, WidthRule};
use crate::{CMatrix, Result, C64};

/// Largest total Hilbert-space dimension accepted.
pub const MAX_DIMENSION: usize = 20_000;
/// Boltzmann tail dropped from thermal mode states.
pub const THERMAL_TAIL: f64 = 1e-10;

/// One oscillator of the dense model.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMode {
    /// cm⁻¹.
    pub omega: f64,
    /// Mass-weighted equilibrium displacement in each system state.
    pub displacements: Vec<f64>,
    pub fock: usize,
    pub center: (f64, f64),
}

impl DenseMode {
    /// Dimensionless d_n = x_n/ℓ with ℓ = √(ħ/w).
    pub fn dimensionless(&self, state: usize, hbar: f64) -> f64 {
        let w = self.omega / hbar;
        self.displacements[state] * (w / hbar).sqrt()
    }
}

/// System ⊗ modes Hamiltonian in the product basis |n⟩⊗|q_1⟩⊗…, the first
/// mode varying slowest after the system index.
#[derive(Clone, Debug)]
pub struct DenseModel {
    pub system_dimension: usize,
    pub modes: Vec<DenseMode>,
    pub hamiltonian: CMatrix,
    pub hbar: f64,
    temperature: f64,
    thermal: bool,
}

/// Builds the dense Hamiltonian of `system`, whose bath must be discrete,
/// with `fock[k]` levels for the k-th mode (channels in order, modes within).
pub fn build_hamiltonian(system: &OpenSystem, fock: &[usize]) -> Result<DenseModel> {
    if !system.bath.is_discrete() {
        return validation("the dense oracle needs a discrete bath");
    }
    let hbar = system.units.hbar;
    let m = system.dimension();
    let mut modes = Vec::new();
    for (c, ch) in system.bath.channels.iter().enumerate() {
        for (k, mode) in ch.modes().unwrap_or_default().iter().enumerate() {
            modes.push(DenseMode {
                omega: mode.omega,
                displacements: (0..m).map(|n| system.system.coefficient(n, c) * mode.x0).collect(),
                fock: 0,
                center: system.bath.center(c, k),
            });
        }
    }
    if fock.len() != modes.len() {
        return validation(format!("{} Fock sizes given for {} modes", fock.len(), modes.len()));
    }
    for (mode, &d) in modes.iter_mut().zip(fock) {
        if d == 0 {
            return validation("Fock dimensions must be positive");
        }
        mode.fock = d;
    }
    let total = modes.iter().try_fold(m, |acc, md| acc.checked_mul(md.fock).filter(|&t| t <= MAX_DIMENSION));
    let Some(total) = total else {
        return validation(format!("dense dimension exceeds {MAX_DIMENSION}"));
    };

    let vertical = system.vertical_energies();
    let mut h = CMatrix::zeros(total, total);
    let dims: Vec<usize> = modes.iter().map(|md| md.fock).collect();
    let block = total / m;
    for n in 0..m {
        for q in 0..block {
            let i = n * block + q;
            let occ = unflatten(q, &dims);
            let mut diag = vertical[n];
            for (md, &o) in modes.iter().zip(&occ) {
                diag += md.omega * (o as f64 + 0.5);
            }
            h[(i, i)] = C64::new(diag, 0.0);
            // −ω d_n (a + a†)/√2, raising part; the lowering part follows by symmetry
            for (k, md) in modes.iter().enumerate() {
                if occ[k] + 1 < md.fock {
                    let mut up = occ.clone();
                    up[k] += 1;
                    let j = n * block + flatten(&up, &dims);
                    let v = -md.omega * md.dimensionless(n, hbar) * ((occ[k] + 1) as f64).sqrt() / 2f64.sqrt();
                    h[(j, i)] += C64::new(v, 0.0);
                    h[(i, j)] += C64::new(v, 0.0);
                }
            }
        }
        for n2 in 0..m {
            let c = system.system.couplings[(n, n2)];
            if n2 == n || c == C64::ZERO {
                continue;
            }
            for q in 0..block {
                h[(n * block + q, n2 * block + q)] += c;
            }
        }
    }
    Ok(DenseModel {
        system_dimension: m,
        modes,
        hamiltonian: h,
        hbar,
        temperature: system.bath.temperature,
        thermal: system.bath.width_rule == WidthRule::Thermal,
    })
}

fn unflatten(mut q: usize, dims: &[usize]) -> Vec<usize> {
    let mut occ = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        occ[k] = q % dims[k];
        q /= dims[k];
    }
    occ
}

fn flatten(occ: &[usize], dims: &[usize]) -> usize {
    occ.iter().zip(dims).fold(0, |acc, (&o, &d)| acc * d + o)
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Boltzmann populations of `fock` levels at `temperature`, dropping the tail
/// beyond cumulative weight 1 − [`THERMAL_TAIL`].
pub fn thermal_populations(omega: f64, temperature: f64, kb: f64, fock: usize) -> Vec<f64> {
    let mut p = vec![0.0; fock];
    p[0] = 1.0;
    if temperature > 0.0 {
        let r = (-omega / (kb * temperature)).exp();
        let z = 1.0 - r;
        let mut cum = z;
        for q in 1..fock {
            if cum >= 1.0 - THERMAL_TAIL {
                break;
            }
            p[q] = r.powi(q as i32);
            cum += z * p[q];
        }
    }
    let s: f64 = p.iter().sum();
    p.iter().map(|x| x / s).collect()
}

impl DenseModel {
    pub fn dimension(&self) -> usize {
        self.hamiltonian.nrows()
    }

    /// Fock dimensions of the modes.
    pub fn mode_dims(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.fock).collect()
    }

    /// Largest |H − H†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.hamiltonian - self.hamiltonian.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Initial state of mode `k`: ground or Boltzmann populations according
    /// to the bath width rule, displaced to the mode's Wigner center.
    pub fn mode_state(&self, k: usize, kb: f64) -> CMatrix {
        let md = &self.modes[k];
        let pops = if self.thermal {
            thermal_populations(md.omega, self.temperature, kb, md.fock)
        } else {
            thermal_populations(md.omega, 0.0, kb, md.fock)
        };
        let rho = CMatrix::from_diagonal(&DVector::from_iterator(md.fock, pops.iter().map(|&p| C64::new(p, 0.0))));
        if md.center == (0.0, 0.0) {
            return rho;
        }
        let w = md.omega / self.hbar;
        let alpha = (w / (2.0 * self.hbar)).sqrt() * C64::new(md.center.0, md.center.1 / w);
        let d = displacement_operator(alpha, md.fock);
        &d * rho * d.adjoint()
    }

    /// ρ_sys ⊗ mode states.
    pub fn initial_state(&self, rho_sys: &CMatrix, kb: f64) -> Result<CMatrix> {
        if rho_sys.nrows() != self.system_dimension {
            return validation("system density dimension mismatch");
        }
        let min = SymmetricEigen::new(rho_sys.clone()).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-12 {
            return validation("initial system density is not positive semidefinite");
        }
        Ok((0..self.modes.len()).fold(rho_sys.clone(), |acc, k| kron(&acc, &self.mode_state(k, kb))))
    }

    /// Exact evolution of `rho0` sampled at `times` (fs).
    pub fn propagate(&self, rho0: &CMatrix, times: &[f64]) -> Result<DenseTrajectory> {
        if rho0.shape() != self.hamiltonian.shape() {
            return validation("initial state dimension differs from the Hamiltonian");
        }
        let eig = SymmetricEigen::new(self.hamiltonian.clone());
        let v = &eig.eigenvectors;
        let rho_e = v.adjoint() * rho0 * v;
        let e = &eig.eigenvalues;
        let dims = self.mode_dims();
        let mut snaps = Vec::with_capacity(times.len());
        for &t in times {
            let phases: Vec<C64> = e.iter().map(|&x| C64::new(0.0, -x * t / self.hbar).exp()).collect();
            let rot = CMatrix::from_fn(rho_e.nrows(), rho_e.ncols(), |i, j| rho_e[(i, j)] * phases[i] * phases[j].conj());
            let rho = v * rot * v.adjoint();
            let energy = (&self.hamiltonian * &rho).trace().re;
            let trace = rho.trace();
            let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut all = vec![self.system_dimension];
            all.extend(&dims);
            let system = partial_trace(&rho, &all, &[0]);
            let modes = (0..dims.len()).map(|k| partial_trace(&rho, &all, &[k + 1])).collect();
            let bath = partial_trace(&rho, &all, &(1..all.len()).collect::<Vec<_>>());
            snaps.push(DenseSnapshot { t, system, modes, bath, energy, trace, hermiticity_defect: herm });
        }
        Ok(DenseTrajectory { snapshots: snaps })
    }
}

/// exp(α a† − α* a) on `fock` levels, computed from the truncated generator.
pub fn displacement_operator(alpha: C64, fock: usize) -> CMatrix {
    // G = −i(α a† − α* a) is Hermitian and D = exp(iG)
    let mut g = CMatrix::zeros(fock, fock);
    for q in 0..fock.saturating_sub(1) {
        let s = ((q + 1) as f64).sqrt();
        g[(q + 1, q)] = C64::new(0.0, -1.0) * alpha * s;
        g[(q, q + 1)] = C64::new(0.0, 1.0) * alpha.conj() * s;
    }
    let eig = SymmetricEigen::new(g);
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(0.0, l).exp()));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Reduced density matrix on the factors `keep` (ascending) of a tensor
/// product with factor dimensions `dims`.
pub fn partial_trace(rho: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kd.iter().product();
    let total: usize = dims.iter().product();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    let mut kept_index = vec![0usize; total];
    let mut rest_index = vec![0usize; total];
    for (i, (ki, ri)) in kept_index.iter_mut().zip(rest_index.iter_mut()).enumerate() {
        let occ = unflatten(i, dims);
        let (mut a, mut b) = (0, 0);
        for (f, (&o, &d)) in occ.iter().zip(dims).enumerate() {
            if keep.contains(&f) {
                a = a * d + o;
            } else {
                b = b * d + o;
            }
        }
        *ki = a;
        *ri = b;
    }
    // group indices by their traced-out part
    let rest_dim = total / out_dim;
    let mut groups = vec![Vec::with_capacity(out_dim); rest_dim];
    for i in 0..total {
        groups[rest_index[i]].push(i);
    }
    for g in &groups {
        for &i in g {
            for &j in g {
                out[(kept_index[i], kept_index[j])] += rho[(i, j)];
            }
        }
    }
    out
}

/// Von Neumann entropy −Σ λ ln λ of a Hermitian density matrix.
pub fn von_neumann(rho: &CMatrix) -> f64 {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().filter(|&&l| l > 1e-300).map(|&l| -l * l.ln()).sum()
}

/// Observables of the composite state at one time.
#[derive(Clone, Debug)]
pub struct DenseSnapshot {
    pub t: f64,
    /// System reduced density matrix.
    pub system: CMatrix,
    /// Single-mode reduced density matrices.
    pub modes: Vec<CMatrix>,
    /// Reduced density matrix of all modes jointly.
    pub bath: CMatrix,
    /// ⟨H⟩ in cm⁻¹.
    pub energy: f64,
    pub trace: C64,
    pub hermiticity_defect: f64,
}

impl DenseSnapshot {
    pub fn purity(&self) -> f64 {
        (&self.system * &self.system).trace().re
    }

    pub fn system_entropy(&self) -> f64 {
        von_neumann(&self.system)
    }

    pub fn bath_entropy(&self) -> f64 {
        von_neumann(&self.bath)
    }

    pub fn mode_entropy(&self, k: usize) -> f64 {
        von_neumann(&self.modes[k])
    }
}

#[derive(Clone, Debug)]
pub struct DenseTrajectory {
    pub snapshots: Vec<DenseSnapshot>,
}

impl DenseTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    /// Population of system state `n` at every sampled time.
    pub fn population(&self, n: usize) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.system[(n, n)].re).collect()
    }

    /// Series of a system observable, using the engine's definitions.
    pub fn series(&self, obs: Observable) -> Result<Vec<f64>> {
        let m = self.snapshots.first().map_or(0, |s| s.system.nrows());
        obs.check(m)?;
        Ok(self.snapshots.iter().map(|s| obs.linear(&s.system)).collect())
    }

    /// CSV with `t_fs` and one `oracle_<obs>` column per observable.
    pub fn write_csv<W: Write>(&self, mut w: W, observables: &[Observable]) -> Result<()> {
        let cols = observables.iter().map(|o| self.series(*o)).collect::<Result<Vec<_>>>()?;
        let mut header = vec!["t_fs".to_string()];
        header.extend(observables.iter().map(|o| format!("oracle_{}", o.name())));
        writeln!(w, "{}", header.join(","))?;
        for (i, s) in self.snapshots.iter().enumerate() {
            let mut row = vec![format!("{:.6}", s.t)];
            row.extend(cols.iter().map(|c| format!("{:.12e}", c[i])));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Builds, prepares the factorized initial state and propagates in one call.
pub fn run_oracle(system: &OpenSystem, fock: &[usize], times: &[f64]) -> Result<DenseTrajectory> {
    let dense = build_hamiltonian(system, fock)?;
    let rho0 = dense.initial_state(system.initial.matrix(), system.units.kb)?;
    dense.propagate(&rho0, times)
}
