//! Husimi Q maps of the piston at several times, written as CSV and SVG.
//!
//! Usage: cargo run --example qgrid [output-dir]

use std::path::PathBuf;

use qpiston::channel::{quasiprobability_grid, radial_nonpassivity_indicator, GridSpec};
use qpiston::quantum::{coherent_state, fock_state, C64};
use qpiston::report::{qgrid_csv, qgrid_panels_svg};

fn main() -> qpiston::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qpiston-qgrid"));
    std::fs::create_dir_all(&dir)?;
    let spec = GridSpec::new(5.0, 61)?;
    let fock = fock_state(3, 60)?;
    let coherent = coherent_state(C64::new(2.0, 1.0), 60)?;
    let qf = quasiprobability_grid(&fock, spec);
    let qc = quasiprobability_grid(&coherent, spec);
    for (name, q, pops) in [("fock3", &qf, fock.populations()), ("coherent", &qc, coherent.populations())] {
        std::fs::write(dir.join(format!("{name}.csv")), qgrid_csv(q, name))?;
        let ind = radial_nonpassivity_indicator(&pops);
        println!(
            "{name}: integral {:.4}, peak at {:.2}, radial slope {:.3} (non-passive: {})",
            q.integral(),
            q.argmax(),
            ind.normalized(),
            ind.flags_nonpassive()
        );
    }
    std::fs::write(dir.join("panels.svg"), qgrid_panels_svg(&[("fock 3", &qf), ("coherent", &qc)]))?;
    println!("wrote {}", dir.display());
    Ok(())
}
