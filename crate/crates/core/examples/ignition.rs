//! Igniting a passive piston with a small coherent kick, then letting the
//! gain channel amplify it.

use qpiston::channel::{gaussian_propagate, GaussianPistonState, PistonChannel};
use qpiston::passivity::{ergotropy, ignite, ignition_gain_estimate, oscillator_hamiltonian};
use qpiston::quantum::{thermal_state, C64};

fn main() -> qpiston::Result<()> {
    let (n, mean) = (80, 0.5);
    let h = oscillator_hamiltonian(1.0, n);
    let rho = thermal_state(mean, n)?;
    let ch = PistonChannel::new(-1e-3, 1e-3, 1.0)?;
    for kick in [0.5, 1.0, 2.0] {
        let alpha = C64::new(kick, 0.0);
        let lit = ignite(&rho, alpha)?;
        let w0 = ergotropy(&lit, &h)?;
        let later = gaussian_propagate(GaussianPistonState::new(alpha, mean)?, &ch, 2000.0);
        println!(
            "kick {kick}: W_max {w0:.4} (estimate {:.4}), after gain {:.4}",
            ignition_gain_estimate(1.0, alpha, mean),
            later.ergotropy(1.0)
        );
    }
    Ok(())
}
