//! Donor population of a donor-acceptor pair on one vibrational mode, from
//! the perturbative series and from exact dense propagation.
use twapert::engine::{assemble_series, Basis, Observable, QuadratureSpec};
use twapert::model::presets;
use twapert::oracle::run_oracle;

fn main() -> twapert::Result<()> {
    let delta = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let sys = presets::single_mode(delta)?;
    let spec = QuadratureSpec::new(250.0, 126, 2)?;
    let local = assemble_series(&sys, spec, Basis::Local)?;
    let eigen = assemble_series(&sys, spec, Basis::Eigen)?;
    let exact = run_oracle(&sys, &[20], &local.times)?.population(0);
    let l = local.total_series(Observable::Population(0), 2)?;
    let e = eigen.total_series(Observable::Population(0), 2)?;
    println!("Delta = {delta} cm^-1");
    println!("{:>6} {:>9} {:>9} {:>9}", "t/fs", "local", "eigen", "exact");
    for i in (0..local.times.len()).step_by(10) {
        println!("{:6.0} {:9.5} {:9.5} {:9.5}", local.times[i], l[i], e[i], exact[i]);
    }
    Ok(())
}
