//! Efficiency of a coherently driven piston against the nu/nu_+ bound.

use qpiston::bath::weak_pump_baths;
use qpiston::engine::{run_scenario, EngineMode, InitialState, Scenario};
use qpiston::joint::EngineParams;

fn main() -> qpiston::Result<()> {
    let params = EngineParams::new(10.0, 1.0, 0.05, 64, weak_pump_baths())?;
    let s = Scenario::new("eta", params, InitialState::coherent(5.0), 100.0)
        .with_mode(EngineMode::FullJoint)
        .with_samples(10);
    let r = run_scenario(&s)?;
    println!("bound nu/nu_+ = {:.5}", r.efficiency.eta_bound);
    for (row, eta) in r.rows.iter().zip(&r.efficiency.eta) {
        println!("t = {:>5.0} cycles  P = {:.4e}  J_H = {:.4e}  eta = {:?}", row.t_cycles, row.power_output, row.j_hot.unwrap_or(f64::NAN), eta);
    }
    println!("eta_max {:?}, coherent dominated {}", r.efficiency.eta_max, r.efficiency.coherent_dominated);
    Ok(())
}
