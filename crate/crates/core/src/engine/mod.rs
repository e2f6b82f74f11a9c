//! Nested time quadrature and order-by-order assembly of the reduced density
//! matrix.
//!
//! A contribution of order N is obtained in four steps: take the Weyl symbol
//! of the observable, build the pathway tensor, resolve any momentum
//! fluctuation derivatives, and integrate over the Gaussian initial
//! conditions. For system observables the last step yields the influence
//! phase in closed form, so the engines only integrate tabulated factors over
//! the time simplex τ_1 ≤ … ≤ τ_N ≤ t.

mod eigen;
mod local;
mod series;
mod terms;

pub use eigen::{EigenEngine, EIGEN_MAX_ORDER};
pub use local::{LocalEngine, LOCAL_MAX_ORDER};
pub use series::{assemble_series, guard_density, Observable, TimeSeriesResult};


use serde::{Deserialize, Serialize};

use crate::error::validation;
use crate::{CMatrix, Result, C64};

/// Default grid for orders up to 2.
pub const DEFAULT_GRID: usize = 400;
/// Default grid when order 3 is requested.
pub const DEFAULT_GRID_ORDER3: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Final time in fs.
    pub t_max: f64,
    /// Grid points including t = 0.
    pub grid_points: usize,
    pub max_order: usize,
}

impl QuadratureSpec {
    pub fn new(t_max: f64, grid_points: usize, max_order: usize) -> Result<Self> {
        let s = Self { t_max, grid_points, max_order };
        s.validate()?;
        Ok(s)
    }

    /// Grid by the default rule for `max_order`.
    pub fn with_default_grid(t_max: f64, max_order: usize) -> Result<Self> {
        Self::new(t_max, if max_order >= 3 { DEFAULT_GRID_ORDER3 } else { DEFAULT_GRID }, max_order)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return validation("t_max must be positive");
        }
        if self.grid_points < 2 {
            return validation("at least two grid points are required");
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.grid_points - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.grid_points).map(|i| i as f64 * dt).collect()
    }

    /// Grid index of time `t`, which must lie on the grid.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let r = t / self.dt();
        if r < -1e-9 || (r - r.round()).abs() > 1e-6 || r.round() as usize >= self.grid_points {
            return validation(format!("time {t} fs is not on the quadrature grid"));
        }
        Ok(r.round() as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Local,
    Eigen,
}

/// Tr[O ρ^(N)(t)] for a system observable with the environment-free
/// perturbation of the local basis.
pub fn order_contribution_envfree(engine: &LocalEngine<'_>, observable: &CMatrix, n: usize, t_index: usize) -> Result<C64> {
    let rho = engine.order_rdm(n)?;
    let r = rho
        .get(t_index)
        .ok_or_else(|| crate::Error::Validation("time index beyond the grid".into()))?;
    if observable.shape() != r.shape() {
        return validation("observable dimension differs from the system dimension");
    }
    Ok((observable * r).trace())
}
