//! Ergotropy, passive-state temperature and entropy of common piston states.

use qpiston::passivity::{oscillator_hamiltonian, passive_state, work_report};
use qpiston::quantum::{coherent_state, displaced_thermal, fock_state, thermal_state, C64};

fn main() -> qpiston::Result<()> {
    let n = 60;
    let h = oscillator_hamiltonian(1.0, n);
    let states = [
        ("fock 3", fock_state(3, n)?),
        ("coherent 2", coherent_state(C64::new(2.0, 0.0), n)?),
        ("thermal 2", thermal_state(2.0, n)?),
        ("displaced thermal 2, 0.5", displaced_thermal(C64::new(2.0, 0.0), 0.5, n)?),
    ];
    println!("{:<26} {:>10} {:>10} {:>10} {:>10}", "state", "energy", "W_max", "T_P", "S_P");
    for (name, rho) in &states {
        let w = work_report(rho, &h)?;
        println!("{name:<26} {:>10.5} {:>10.5} {:>10.5} {:>10.5}", w.energy, w.w_max, w.t_p, w.s_p);
    }
    let passive = passive_state(&states[0].1, &h)?;
    println!("passive image of fock 3 has populations {:?}", &passive.populations()[..5]);
    Ok(())
}
