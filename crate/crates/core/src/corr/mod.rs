//! Bath correlation kernels, their tabulation and the influence phases
//! assembled from them.
//!
//! 𝓖 on its own diverges logarithmically for Ohmic-like continua, so only
//! differences of it are exposed. A standalone `g` exists for discrete baths.
//! The momentum-fluctuation phase never appears at run time: its derivatives
//! are already folded into the ζ terms of [`crate::pathways`].

mod indexed;
mod kernels;
mod table;
mod trajectory;

pub use indexed::{AppendixKernel, KernelSource, StateIndexedKernel, TableSource};
pub use kernels::{BaseKernel, BathKernels, ChannelKernel};
pub use table::KernelTable;
pub use trajectory::{classical_trajectory, integrated_trajectory, TrajectoryMode};
