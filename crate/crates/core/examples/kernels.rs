//! Bath correlation kernels of a Drude-Lorentz channel: closed form against
//! a 300-mode discretization.
use twapert::corr::{BaseKernel, ChannelKernel};
use twapert::model::*;

fn main() -> twapert::Result<()> {
    let units = UnitSystem::default();
    let ch = SpectralChannel::drude_lorentz(50.0, 100.0);
    let disc = discretize_channel(&ch, 300, DEFAULT_OMEGA_MAX_FACTOR * 100.0, DiscretizationScheme::EqualSpacing, &units)?;
    let bath = BathSpec::new(vec![disc], 0.0, WidthRule::GroundState)?;
    let k = ChannelKernel::discrete(&bath, 0, &units)?;
    println!("{:>6} {:>14} {:>14} {:>14}", "t/fs", "h closed", "h discrete", "dG discrete");
    for t in (0..=500).step_by(25).map(f64::from) {
        println!(
            "{t:6.0} {:14.6e} {:14.6e} {:14.6e}",
            drude_lorentz_h(50.0, 100.0, t, &units),
            k.eval(BaseKernel::H, t)?,
            k.eval(BaseKernel::DeltaG, t)?
        );
    }
    Ok(())
}
