//! Exact propagation of a two-state system and one truncated oscillator,
//! with system and bath entropies.
use twapert::model::presets;
use twapert::oracle::run_oracle;

fn main() -> twapert::Result<()> {
    let sys = presets::single_mode(50.0)?;
    let times: Vec<f64> = (0..=10).map(|i| 25.0 * i as f64).collect();
    let traj = run_oracle(&sys, &[20], &times)?;
    println!("{:>6} {:>9} {:>9} {:>9} {:>12}", "t/fs", "P_donor", "S_sys", "S_bath", "<H>");
    for s in &traj.snapshots {
        println!("{:6.0} {:9.5} {:9.5} {:9.5} {:12.6}", s.t, s.system[(0, 0)].re, s.system_entropy(), s.bath_entropy(), s.energy);
    }
    Ok(())
}
