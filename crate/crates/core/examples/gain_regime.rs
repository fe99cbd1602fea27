//! Energy and extractable work of three piston inputs under a gain channel.
//!
//! Coherent and thermal inputs start with the same mean energy; only the
//! coherent one keeps a growing share of it as ergotropy.

use qpiston::bath::desk_scale_baths;
use qpiston::engine::{run_scenario, InitialState, Scenario};
use qpiston::joint::EngineParams;

fn main() -> qpiston::Result<()> {
    let params = EngineParams::new(10.0, 1.0, 0.1, 40, desk_scale_baths())?;
    let (gamma, diffusion): (f64, f64) = (-1.39e-4, 1e-5);
    let inputs = [
        (InitialState::coherent(2.0), (gamma, diffusion)),
        (InitialState::Thermal { mean: 4.0 }, (gamma, diffusion)),
        // a Fock input needs a completely positive channel, D >= |gamma|
        (InitialState::Fock { n: 4 }, (gamma, gamma.abs())),
    ];
    println!("{:<12} {:>10} {:>14} {:>14} {:>10}", "input", "cycles", "energy", "W_max", "W/E");
    for (initial, (g, d)) in inputs {
        let s = Scenario::new("gain", params.clone(), initial, 1e4)
            .with_override(g, d)
            .with_samples(4);
        let r = run_scenario(&s)?;
        for row in &r.rows {
            println!(
                "{:<12} {:>10.0} {:>14.6e} {:>14.6e} {:>10.4}",
                initial.to_string(),
                row.t_cycles,
                row.energy,
                row.w_max,
                row.w_max / row.energy
            );
        }
    }
    Ok(())
}
