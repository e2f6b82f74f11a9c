//! Purity and Bloch vector of a qubit in a zero-temperature Drude-Lorentz bath,
//! at second and third order.
use twapert::engine::{assemble_series, Basis, QuadratureSpec};
use twapert::model::presets;

fn main() -> twapert::Result<()> {
    let sys = presets::qubit_decoherence()?;
    let second = assemble_series(&sys, QuadratureSpec::new(300.0, 201, 2)?, Basis::Local)?;
    let third = assemble_series(&sys, QuadratureSpec::new(300.0, 101, 3)?, Basis::Local)?;
    let (p2, p3) = (second.purity(2), third.purity(3));
    let bloch = third.bloch(3)?;
    println!("{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}", "t/fs", "P(N=2)", "P(N=3)", "<sx>", "<sy>", "<sz>");
    for i in (0..third.times.len()).step_by(10) {
        let b = bloch[i];
        println!("{:6.0} {:8.4} {:8.4} {:8.4} {:8.4} {:8.4}", third.times[i], p2[2 * i], p3[i], b[0], b[1], b[2]);
    }
    Ok(())
}
