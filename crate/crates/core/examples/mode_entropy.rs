//! Entanglement entropy of individual bath modes with the rest of the
//! qubit-bath composite.
use twapert::engine::QuadratureSpec;
use twapert::envmode::{mode_rdm, ModeProbe, DEFAULT_N_MAX};
use twapert::model::presets;

fn main() -> twapert::Result<()> {
    let sys = presets::qubit_decoherence()?;
    let spec = QuadratureSpec::new(200.0, 201, 2)?;
    let idx: Vec<usize> = (0..=200).step_by(50).collect();
    for omega in [25.0, 50.0, 100.0, 200.0, 400.0] {
        let probe = ModeProbe::at(&sys, 0, omega)?;
        let rdms = mode_rdm(&sys, &probe, spec, &idx, DEFAULT_N_MAX)?;
        let s: Vec<String> = rdms.iter().map(|r| r.entropy().map(|s| format!("{s:.3e}"))).collect::<Result<_, _>>()?;
        println!("{omega:5.0} cm^-1  S(t = 0, 50, 100, 150, 200 fs) = {}", s.join(" "));
    }
    Ok(())
}
