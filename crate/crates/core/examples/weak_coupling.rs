//! Weak coupling to two independent baths: local basis on the continuum
//! against the eigenbasis expansion on a discretized bath.
use twapert::engine::{assemble_series, Basis, Observable, QuadratureSpec};
use twapert::model::{presets, DiscretizationScheme, DEFAULT_DISCRETE_MODES, DEFAULT_OMEGA_MAX_FACTOR};

fn main() -> twapert::Result<()> {
    let sys = presets::weak_coupling()?;
    let bath = sys.bath.discretized(DEFAULT_DISCRETE_MODES, DEFAULT_OMEGA_MAX_FACTOR, DiscretizationScheme::EqualSpacing, &sys.units)?;
    let disc = sys.with_bath(bath)?;
    let spec = QuadratureSpec::new(1000.0, 201, 2)?;
    let local = assemble_series(&sys, spec, Basis::Local)?.total_series(Observable::SigmaZ, 2)?;
    let eigen = assemble_series(&disc, spec, Basis::Eigen)?.total_series(Observable::SigmaZ, 2)?;
    println!("{:>6} {:>10} {:>10}", "t/fs", "local", "eigen");
    for i in (0..spec.grid_points).step_by(20) {
        println!("{:6.0} {:10.5} {:10.5}", i as f64 * spec.dt(), local[i], eigen[i]);
    }
    Ok(())
}
