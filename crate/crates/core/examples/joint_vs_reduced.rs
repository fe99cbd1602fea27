//! Full qubit-piston dynamics next to the reduced piston channel derived
//! from the same baths, with heat currents and entropy production.

use qpiston::bath::weak_pump_baths;
use qpiston::engine::{run_scenario, EngineMode, InitialState, Scenario};
use qpiston::joint::EngineParams;

fn main() -> qpiston::Result<()> {
    let params = EngineParams::new(10.0, 1.0, 0.05, 40, weak_pump_baths())?;
    let s = Scenario::new("joint", params, InitialState::coherent(2.0), 300.0)
        .with_mode(EngineMode::Both)
        .with_samples(6);
    let r = run_scenario(&s)?;
    let ch = r.channel.expect("reduced channel");
    println!("derived channel: gamma = {:.4e}, D = {:.4e}", ch.gamma, ch.diffusion);
    let joint = r.joint_rows.as_ref().expect("joint rows");
    println!("{:>8} {:>12} {:>12} {:>12} {:>12} {:>12}", "cycles", "<n> red", "<n> joint", "J_C", "J_H", "sigma");
    for (red, j) in r.rows.iter().zip(joint) {
        println!(
            "{:>8.0} {:>12.6} {:>12.6} {:>12.4e} {:>12.4e} {:>12.4e}",
            red.t_cycles,
            red.mean_occupation,
            j.mean_occupation,
            j.j_cold.unwrap_or(f64::NAN),
            j.j_hot.unwrap_or(f64::NAN),
            j.sigma.unwrap_or(f64::NAN)
        );
    }
    if let Some(cv) = r.cross_validation {
        println!("largest deviation: |<a>| {:.3e}, <n> {:.3e}", cv.first_moment, cv.second_moment);
    }
    Ok(())
}
