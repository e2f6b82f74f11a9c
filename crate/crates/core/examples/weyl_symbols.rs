//! Weyl symbols of oscillator projectors and their phase-space traces.
use twapert::envmode::{gaussian_phase_integral, GaussianForm, WeylProjector};
use twapert::model::UnitSystem;
use twapert::C64;

fn main() -> twapert::Result<()> {
    let units = UnitSystem::default();
    let w = units.angular(200.0);
    let damping = GaussianForm::coherent_damping(w, units.hbar, 2.0);
    for n in 0..=3 {
        let row: Vec<String> = (0..=3)
            .map(|m| {
                let poly = WeylProjector::new(n, m, w, units.hbar).polynomial();
                gaussian_phase_integral(&poly, &damping, (0.0, 0.0), units.hbar).map(|v| format!("{:6.3}", v.re))
            })
            .collect::<Result<_, _>>()?;
        println!("Tr |{n}><m| for m = 0..3: {}", row.join(" "));
    }
    // along the position axis; the oscillator length is sqrt(hbar/w) ≈ 375
    for x in [0.0, 150.0, 300.0, 600.0] {
        let v: Vec<C64> = (0..=2).map(|n| WeylProjector::new(n, n, w, units.hbar).eval(x, 0.0)).collect();
        println!("x = {x:5.0}: W_00 = {:7.4} W_11 = {:7.4} W_22 = {:7.4}", v[0].re, v[1].re, v[2].re);
    }
    Ok(())
}
