//! Command-line front end. Exit codes: 0 success, 1 configuration or input
//! error, 2 numerical abort. Failures print one `ERR:<category>: ...` line
//! on stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;

use crate::channel::{quasiprobability_grid, GridSpec};
use crate::config::{parse_sweep_values, Config, SweepParameter};
use crate::engine::{default_jobs, micromaser_compare, run_parallel, run_scenario, InitialState};
use crate::error::{Error, Result};
use crate::passivity::{oscillator_hamiltonian, work_report};
use crate::report::{csv_header_comment, fmt_num, qgrid_csv, write_report};

#[derive(Parser, Debug)]
#[command(name = "qpiston", version, about = "Heat-pumped quantized piston simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write its report files.
    Simulate(SimulateArgs),
    /// Run a scenario for each value of one parameter.
    Sweep(SweepArgs),
    /// Ergotropy, passive temperature and entropy of a piston state.
    Ergotropy(StateArgs),
    /// Husimi Q function of a piston state on a grid, as CSV.
    Qgrid(QgridArgs),
    /// Micromaser output, input and efficiency next to the piston engine bound.
    MaserCompare(MaserArgs),
    /// Check a configuration file without running it.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; falls back to output.dir in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// omega0, nu, g, fock_dim, t_hot, t_cold, gamma, diffusion, alpha or duration_cycles.
    #[arg(long)]
    param: String,
    /// `a,b,c` or `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// fock:n, coherent:re[,im], thermal:mean or displaced_thermal:re[,im],mean.
    #[arg(long)]
    state: String,
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    #[arg(long, default_value_t = 60)]
    fock_dim: usize,
}

#[derive(Args, Debug)]
struct QgridArgs {
    #[arg(long)]
    state: String,
    #[arg(long, default_value_t = 60)]
    fock_dim: usize,
    #[arg(long, default_value_t = 5.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 81)]
    points: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MaserArgs {
    #[arg(long)]
    r_a: f64,
    #[arg(long)]
    g: f64,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    omega0: f64,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    config: PathBuf,
}

/// Log level from QPISTON_LOG, warn by default.
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("QPISTON_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).try_init();
}

/// The one-line error report and the exit code for an error.
pub fn describe_error(e: &Error) -> (String, i32) {
    let msg = match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    };
    let code = if e.is_numerical() { 2 } else { 1 };
    (format!("ERR:{}: {msg}", e.category()), code)
}

fn simulate(args: &SimulateArgs) -> Result<String> {
    let config = Config::load(&args.config)?;
    let out = args
        .out
        .clone()
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .ok_or_else(|| Error::Config("no output directory: pass --out or set output.dir".into()))?;
    let report = run_scenario(&config.to_scenario()?)?;
    let files = write_report(&out, &report, &config)?;
    let mut msg = String::new();
    for f in files {
        let _ = writeln!(msg, "{}", f.display());
    }
    Ok(msg)
}

fn sweep(args: &SweepArgs) -> Result<String> {
    let base = Config::load(&args.config)?;
    let param: SweepParameter = args.param.parse()?;
    let values = parse_sweep_values(&args.values)?;
    let configs = values
        .iter()
        .map(|&v| param.apply(&base, v))
        .collect::<Result<Vec<_>>>()?;
    let jobs = args.jobs.unwrap_or_else(default_jobs);
    info!("sweeping {param} over {} values on {jobs} workers", values.len());
    let results = run_parallel(&configs, jobs, |c| {
        let report = run_scenario(&c.to_scenario()?)?;
        Ok::<_, Error>(report)
    });
    fs::create_dir_all(&args.out)?;
    let mut summary = csv_header_comment(&base.sha256());
    let _ = writeln!(summary, "{param},final_energy,final_W_max,eta_max,status");
    let mut first_error = None;
    for (i, ((value, config), result)) in values.iter().zip(&configs).zip(results).enumerate() {
        match result {
            Ok(report) => {
                write_report(&args.out.join(format!("{i:03}")), &report, config)?;
                let last = report.final_row();
                let eta = report.efficiency.eta_max.map_or_else(|| "nan".into(), fmt_num);
                let _ = writeln!(summary, "{},{},{},{eta},ok", fmt_num(*value), fmt_num(last.energy), fmt_num(last.w_max));
            }
            Err(e) => {
                let (line, _) = describe_error(&e);
                let _ = writeln!(summary, "{},nan,nan,nan,{}", fmt_num(*value), line.replace(',', ";"));
                first_error.get_or_insert(e);
            }
        }
    }
    fs::write(args.out.join("sweep.csv"), summary)?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(format!("{}\n", args.out.join("sweep.csv").display())),
    }
}

fn ergotropy_cmd(args: &StateArgs) -> Result<String> {
    let state: InitialState = args.state.parse()?;
    let rho = state.density(args.fock_dim)?;
    let w = work_report(&rho, &oscillator_hamiltonian(args.nu, args.fock_dim))?;
    Ok(format!(
        "state = {state}\nW_max = {}\nT_P = {}\nS_P = {}\nenergy = {}\npassive = {}\n",
        fmt_num(w.w_max),
        fmt_num(w.t_p),
        fmt_num(w.s_p),
        fmt_num(w.energy),
        w.is_passive
    ))
}

fn qgrid_cmd(args: &QgridArgs) -> Result<String> {
    let state: InitialState = args.state.parse()?;
    let rho = state.density(args.fock_dim)?;
    let grid = quasiprobability_grid(&rho, GridSpec::new(args.alpha_max, args.points)?);
    let id = format!("{state}/{}/{}/{}", args.fock_dim, args.alpha_max, args.points);
    let csv = qgrid_csv(&grid, &id.replace([',', ' '], "_"));
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(format!("{}\n", path.display()))
        }
        None => Ok(csv),
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, body)?;
    Ok(())
}

fn maser_cmd(args: &MaserArgs) -> Result<String> {
    let m = micromaser_compare(args.r_a, args.g, args.tau, args.nu, args.omega0)?;
    let mut out = String::new();
    let _ = writeln!(out, "quantity,micromaser,piston_engine");
    let _ = writeln!(out, "rate,{},", fmt_num(m.rate));
    let _ = writeln!(out, "generated_power,{},", fmt_num(m.generated_power));
    let _ = writeln!(out, "input_power,{},", fmt_num(m.input_power));
    let _ = writeln!(out, "eta_max,{},{}", fmt_num(m.eta_max), fmt_num(m.eta_quantized));
    if let Some(w) = m.warning {
        let _ = writeln!(out, "# warning: {w}");
    }
    Ok(out)
}

fn validate(args: &ValidateArgs) -> Result<String> {
    let config = Config::load(&args.config)?;
    Ok(format!("ok {} sha256={}\n", args.config.display(), config.sha256()))
}

/// Run the command line and return the exit code. Normal output goes to
/// stdout, the error line to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Ergotropy(a) => ergotropy_cmd(a),
        Command::Qgrid(a) => qgrid_cmd(a),
        Command::MaserCompare(a) => maser_cmd(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            let (line, code) = describe_error(&e);
            eprintln!("{line}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_lines_and_codes() {
        let (line, code) = describe_error(&Error::Config("nu must be < omega0".into()));
        assert_eq!((line.as_str(), code), ("ERR:config: nu must be < omega0", 1));
        let e = Error::Positivity {
            time: 1.0,
            min_eigenvalue: -1e-3,
        }
        .in_scenario("x");
        assert_eq!(describe_error(&e).1, 2);
        assert!(describe_error(&e).0.starts_with("ERR:positivity:"));
    }

    #[test]
    fn ergotropy_of_coherent_state() {
        let out = ergotropy_cmd(&StateArgs {
            state: "coherent:2.0".into(),
            nu: 1.0,
            fock_dim: 60,
        })
        .unwrap();
        let get = |key: &str| -> f64 {
            let line = out.lines().find(|l| l.starts_with(key)).unwrap();
            line.split('=').nth(1).unwrap().trim().parse().unwrap()
        };
        assert!((get("W_max") - 4.0).abs() < 1e-4);
        assert_eq!(get("T_P"), 0.0);
        assert!(get("S_P").abs() < 1e-9);
    }

    #[test]
    fn maser_table_lines() {
        let out = maser_cmd(&MaserArgs {
            r_a: 100.0,
            g: 0.05,
            tau: 1.0,
            nu: 1.0,
            omega0: 10.0,
        })
        .unwrap();
        assert!(out.contains("eta_max,1.00000000000e-1,9.09090909091e-2"));
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        assert_eq!(run(["qpiston", "launch"]), 1);
    }
}
