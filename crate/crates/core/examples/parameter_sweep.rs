//! Final work capacity against the gain rate, run on all cores.

use qpiston::config::{Config, ConfigFormat, SweepParameter};
use qpiston::engine::{default_jobs, run_parallel, run_scenario};

const BASE: &str = r#"
[system]
omega0 = 10.0
nu = 1.0
g = 0.1

[baths.hot]
temperature = 20.0
profile = { lorentzian = { center = 11.0, width = 0.2, height = 1.0 } }

[baths.cold]
temperature = 2.0
profile = { flat_window = { lo = 0.0, hi = 9.0, height = 1.0 } }

[piston_initial]
kind = "coherent"
alpha_re = 2.0

[run]
duration_cycles = 5000.0
samples = 10

[piston_channel_override]
gamma = -1.0e-4
diffusion = 1.0e-5
"#;

fn main() -> qpiston::Result<()> {
    let base = Config::parse(BASE, ConfigFormat::Toml)?;
    let values: Vec<f64> = (1..=8).map(|k| -2.5e-5 * k as f64).collect();
    let configs = values
        .iter()
        .map(|&v| SweepParameter::Gamma.apply(&base, v))
        .collect::<qpiston::Result<Vec<_>>>()?;
    let reports = run_parallel(&configs, default_jobs(), |c| run_scenario(&c.to_scenario()?));
    for (gamma, r) in values.iter().zip(reports) {
        let r = r?;
        println!("gamma {gamma:.2e}: W_max {:.5e} after {} cycles", r.final_row().w_max, r.duration_cycles);
    }
    Ok(())
}
