//! The same inputs under a loss channel (gamma > 0): every state relaxes
//! toward the thermal occupation D/gamma and its ergotropy is spent.

use qpiston::bath::desk_scale_baths;
use qpiston::engine::{run_scenario, InitialState, Scenario};
use qpiston::joint::EngineParams;

fn main() -> qpiston::Result<()> {
    let params = EngineParams::new(10.0, 1.0, 0.1, 40, desk_scale_baths())?;
    for initial in [
        InitialState::coherent(2.0),
        InitialState::Fock { n: 4 },
        InitialState::Thermal { mean: 4.0 },
    ] {
        let s = Scenario::new("loss", params.clone(), initial, 1e4)
            .with_override(1.39e-4, 1e-5)
            .with_samples(5);
        let r = run_scenario(&s)?;
        let ch = r.channel.expect("reduced run");
        println!("{initial}: steady occupation {:.4}", ch.steady_occupation().unwrap_or(f64::NAN));
        for row in &r.rows {
            println!(
                "  t = {:>7.0} cycles  E = {:.5e}  W_max = {:.5e}  T_P = {:.4}",
                row.t_cycles, row.energy, row.w_max, row.t_p
            );
        }
    }
    Ok(())
}
