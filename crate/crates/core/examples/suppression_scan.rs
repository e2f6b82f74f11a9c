//! Removing the high- or the low-frequency part of the bath at equal
//! reorganization energy, and what it does to the purity.
use twapert::engine::{assemble_series, Basis, QuadratureSpec};
use twapert::model::{presets, suppression_cutoffs, windowed_reorganization};

fn main() -> twapert::Result<()> {
    let alpha = 2.0 / 3.0;
    let (hi, lo) = suppression_cutoffs(presets::QUBIT_LAMBDA, presets::QUBIT_OMEGA_C, alpha)?;
    let kept = windowed_reorganization(presets::QUBIT_LAMBDA, presets::QUBIT_OMEGA_C, 0.0, hi);
    println!("high cut at {hi:.3} cm^-1, low cut at {lo:.3} cm^-1, each keeps {kept:.2} cm^-1");

    let spec = QuadratureSpec::new(300.0, 201, 2)?;
    let full = assemble_series(&presets::qubit_decoherence()?, spec, Basis::Local)?.purity(2);
    let high = assemble_series(&presets::qubit_decoherence_windowed(0.0, hi)?, spec, Basis::Local)?.purity(2);
    let low = assemble_series(&presets::qubit_decoherence_windowed(lo, f64::INFINITY)?, spec, Basis::Local)?.purity(2);
    println!("{:>6} {:>8} {:>9} {:>8}", "t/fs", "full", "high-cut", "low-cut");
    for i in (0..spec.grid_points).step_by(20) {
        println!("{:6.0} {:8.4} {:9.4} {:8.4}", i as f64 * spec.dt(), full[i], high[i], low[i]);
    }
    Ok(())
}
