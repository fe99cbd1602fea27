//! Load a configuration, run it and write the CSV, JSON and SVG report.
//!
//! Usage: cargo run --example config_report [config.json|config.toml] [output-dir]

use std::path::{Path, PathBuf};

use qpiston::config::{Config, ConfigFormat};
use qpiston::engine::run_scenario;
use qpiston::report::write_report;

const DEFAULT: &str = r#"{
    "system": {"omega0": 10.0, "nu": 1.0, "g": 0.05, "fock_dim": 30},
    "baths": {
        "hot": {"temperature": 20.0, "profile": {"lorentzian": {"center": 11.0, "width": 0.2, "height": 0.02}}},
        "cold": {"temperature": 1.0, "profile": {"flat_window": {"lo": 0.0, "hi": 10.5, "height": 0.2}}}
    },
    "piston_initial": {"kind": "displaced_thermal", "alpha_re": 1.5, "mean": 0.2},
    "run": {"label": "example", "mode": "both", "duration_cycles": 100.0, "samples": 50},
    "output": {"log_y": false}
}"#;

fn main() -> qpiston::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = match args.next() {
        Some(path) => Config::load(Path::new(&path))?,
        None => Config::parse(DEFAULT, ConfigFormat::Json)?,
    };
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qpiston-report"));
    let report = run_scenario(&config.to_scenario()?)?;
    for w in &report.warnings {
        println!("warning: {w}");
    }
    for f in write_report(&dir, &report, &config)? {
        println!("{}", f.display());
    }
    println!("config sha256 {}", config.sha256());
    Ok(())
}
