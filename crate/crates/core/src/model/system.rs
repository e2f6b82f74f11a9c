use nalgebra::{DMatrix, DVector};

use crate::error::validation;
use crate::{CMatrix, Result, C64};

/// Discrete system: state energies, couplings and bath channel coefficients.
///
/// `energies` are the potential-minimum energies ε_n. The vertical energies
/// ε̃_n = ε_n + λ_n (bath reorganization added back) are what a system-only
/// diagonalization sees, see [`SystemModel::vertical_energies`].
#[derive(Clone, Debug, PartialEq)]
pub struct SystemModel {
    pub energies: Vec<f64>,
    pub couplings: CMatrix,
    /// `channel_coefficients[n][c]` is g_n for bath channel c.
    pub channel_coefficients: Vec<Vec<f64>>,
}

impl SystemModel {
    pub fn new(energies: Vec<f64>, couplings: CMatrix, channel_coefficients: Vec<Vec<f64>>) -> Result<Self> {
        let m = energies.len();
        if m < 1 {
            return validation("system needs at least one state");
        }
        if couplings.nrows() != m || couplings.ncols() != m {
            return validation(format!("coupling matrix must be {m}x{m}"));
        }
        if channel_coefficients.len() != m {
            return validation("one row of channel coefficients per state is required");
        }
        let n_ch = channel_coefficients[0].len();
        if channel_coefficients.iter().any(|r| r.len() != n_ch) {
            return validation("channel coefficient rows differ in length");
        }
        if energies.iter().chain(channel_coefficients.iter().flatten()).any(|v| !v.is_finite()) {
            return validation("non-finite energy or channel coefficient");
        }
        let scale = couplings.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for i in 0..m {
            if couplings[(i, i)].norm() > 1e-12 * scale {
                return validation("couplings must have a zero diagonal");
            }
            for j in 0..m {
                if (couplings[(i, j)] - couplings[(j, i)].conj()).norm() > 1e-12 * scale {
                    return validation("couplings must be Hermitian");
                }
            }
        }
        Ok(Self { energies, couplings, channel_coefficients })
    }

    /// Two-level system with a single anti-correlated channel, g = (+1, −1).
    /// State 0 is ↑ with minimum energy +ε/2, state 1 is ↓ with −ε/2.
    pub fn qubit(detuning: f64, tunneling: f64) -> Result<Self> {
        let d = C64::new(tunneling, 0.0);
        let couplings = DMatrix::from_row_slice(2, 2, &[C64::ZERO, d, d, C64::ZERO]);
        Self::new(vec![0.5 * detuning, -0.5 * detuning], couplings, vec![vec![1.0], vec![-1.0]])
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn channel_count(&self) -> usize {
        self.channel_coefficients[0].len()
    }

    pub fn coefficient(&self, state: usize, channel: usize) -> f64 {
        self.channel_coefficients[state][channel]
    }

    /// Per-state reorganization energy λ_n = Σ_c g_n² λ_c.
    pub fn reorganization_shift(&self, channel_reorganization: &[f64]) -> Vec<f64> {
        self.channel_coefficients
            .iter()
            .map(|g| g.iter().zip(channel_reorganization).map(|(g, l)| g * g * l).sum())
            .collect()
    }

    pub fn vertical_energies(&self, channel_reorganization: &[f64]) -> Vec<f64> {
        self.energies
            .iter()
            .zip(self.reorganization_shift(channel_reorganization))
            .map(|(e, s)| e + s)
            .collect()
    }
}

/// System part of a factorized initial density.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialSystemDensity {
    matrix: CMatrix,
}

impl InitialSystemDensity {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let m = matrix.nrows();
        if matrix.ncols() != m || m == 0 {
            return validation("initial density must be square");
        }
        if (matrix.adjoint() - &matrix).iter().any(|d| d.norm() > 1e-12) {
            return validation("initial density must be Hermitian");
        }
        if (matrix.trace() - C64::ONE).norm() > 1e-12 {
            return validation("initial density must have unit trace");
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-12 {
            return validation(format!("initial density is not positive semidefinite (eigenvalue {min_eig:e})"));
        }
        Ok(Self { matrix })
    }

    /// |ψ⟩⟨ψ| for a normalised copy of `amplitudes`.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if norm == 0.0 {
            return validation("zero state vector");
        }
        let v = v / C64::new(norm, 0.0);
        Self::new(&v * v.adjoint())
    }

    /// Population in a single state.
    pub fn population(state: usize, dimension: usize) -> Result<Self> {
        if state >= dimension {
            return validation("state index out of range");
        }
        let mut m = CMatrix::zeros(dimension, dimension);
        m[(state, state)] = C64::ONE;
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn element(&self, n: usize, m: usize) -> C64 {
        self.matrix[(n, m)]
    }
}

/// System eigenbasis including reorganization, with rotated bath couplings.
#[derive(Clone, Debug)]
pub struct EigenBasisModel {
    /// Ẽ_α, ascending.
    pub vertical_energies: Vec<f64>,
    /// Columns are eigenvectors: `vectors[(n, α)] = ⟨n|α⟩`.
    pub vectors: CMatrix,
    /// Per channel, g̃_αβ = Σ_n ⟨α|n⟩ g_n ⟨n|β⟩. Mode displacements follow as
    /// x_k^(α,β) = g̃_αβ x_k.
    pub channel_coefficients: Vec<CMatrix>,
}

impl EigenBasisModel {
    pub fn dimension(&self) -> usize {
        self.vertical_energies.len()
    }

    /// Expansion coefficient c_n^α = ⟨α|n⟩.
    pub fn coefficient(&self, n: usize, alpha: usize) -> C64 {
        self.vectors[(n, alpha)].conj()
    }

    /// Rotated displacement of a mode with unit-coefficient displacement `x`.
    pub fn displacement(&self, channel: usize, alpha: usize, beta: usize, x: f64) -> C64 {
        self.channel_coefficients[channel][(alpha, beta)] * x
    }

    /// E_α = Ẽ_α − ½Σ_k ω_k² x_k^(α,α)², given per-channel reorganization.
    pub fn minimum_energies(&self, channel_reorganization: &[f64]) -> Vec<f64> {
        (0..self.dimension())
            .map(|a| {
                let shift: f64 = self
                    .channel_coefficients
                    .iter()
                    .zip(channel_reorganization)
                    .map(|(g, l)| g[(a, a)].re.powi(2) * l)
                    .sum();
                self.vertical_energies[a] - shift
            })
            .collect()
    }

    /// ⟨α|ρ|β⟩ from a local-basis matrix.
    pub fn to_eigen(&self, local: &CMatrix) -> CMatrix {
        self.vectors.adjoint() * local * &self.vectors
    }

    pub fn to_local(&self, eigen: &CMatrix) -> CMatrix {
        &self.vectors * eigen * self.vectors.adjoint()
    }
}

/// Diagonalizes h = Σ(ε_n + shift_n)|n⟩⟨n| + Σ Δ_nm|n⟩⟨m|.
///
/// Eigenpairs are sorted by ascending energy (ties by original index) and
/// each eigenvector's largest component is made real and positive.
pub fn diagonalize_system(model: &SystemModel, reorganization_shift: &[f64]) -> Result<EigenBasisModel> {
    let m = model.dimension();
    if m < 2 {
        return validation("diagonalization needs at least two states");
    }
    if reorganization_shift.len() != m {
        return validation("one reorganization shift per state is required");
    }
    let mut h = model.couplings.clone();
    for n in 0..m {
        h[(n, n)] = C64::new(model.energies[n] + reorganization_shift[n], 0.0);
    }
    let (values, vectors) = if model.couplings.iter().all(|c| *c == C64::ZERO) {
        ((0..m).map(|n| h[(n, n)].re).collect::<Vec<_>>(), CMatrix::identity(m, m))
    } else {
        let eig = nalgebra::SymmetricEigen::new(h);
        (eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut u = CMatrix::zeros(m, m);
    let mut energies = Vec::with_capacity(m);
    for (col, &src) in order.iter().enumerate() {
        let v = vectors.column(src);
        let pivot = (0..m).fold(0, |best, n| if v[n].norm() > v[best].norm() + 1e-14 { n } else { best });
        let phase = v[pivot].conj() / v[pivot].norm();
        for n in 0..m {
            u[(n, col)] = v[n] * phase;
        }
        energies.push(values[src]);
    }

    let channel_coefficients = (0..model.channel_count())
        .map(|c| {
            let g = CMatrix::from_diagonal(&DVector::from_iterator(
                m,
                (0..m).map(|n| C64::new(model.coefficient(n, c), 0.0)),
            ));
            u.adjoint() * g * &u
        })
        .collect();

    Ok(EigenBasisModel { vertical_energies: energies, vectors: u, channel_coefficients })
}
