//! Run configuration files. JSON is the primary format; TOML is read and
//! written with the same schema. Unknown keys are rejected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bath::{BathLabel, BathPair, BathSpectrum, SpectralProfile};
use crate::channel::GridSpec;
use crate::engine::{EngineMode, InitialState, JointLimits, Scenario};
use crate::error::{Error, Result};
use crate::joint::{EngineParams, HeatHamiltonian};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub system: SystemConfig,
    pub baths: BathsConfig,
    pub piston_initial: InitialState,
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piston_channel_override: Option<ChannelOverride>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub omega0: f64,
    pub nu: f64,
    pub g: f64,
    #[serde(default = "default_fock_dim")]
    pub fock_dim: usize,
    /// Use half the printed sideband dissipator weight.
    #[serde(default)]
    pub halved_q1: bool,
    #[serde(default)]
    pub heat_hamiltonian: HeatHamiltonian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathsConfig {
    pub hot: BathConfig,
    pub cold: BathConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub temperature: f64,
    pub profile: SpectralProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_label")]
    pub label: String,
    #[serde(default)]
    pub mode: EngineMode,
    pub duration_cycles: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Q-grid times in cycles; start and end when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default = "default_max_fock_dim")]
    pub max_fock_dim: usize,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory when none is given on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default = "default_true")]
    pub svg: bool,
    #[serde(default)]
    pub log_y: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            svg: true,
            log_y: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelOverride {
    pub gamma: f64,
    pub diffusion: f64,
}

fn default_fock_dim() -> usize {
    40
}
fn default_label() -> String {
    "run".to_string()
}
fn default_samples() -> usize {
    200
}
fn default_max_fock_dim() -> usize {
    JointLimits::default().max_fock_dim
}
fn default_max_steps() -> usize {
    JointLimits::default().max_steps
}
fn default_true() -> bool {
    true
}

/// Physics validation failures become config errors with the bare message.
fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidInput(m) | Error::InvalidState(m) => Error::Config(m),
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigFormat {
    Json,
    Toml,
}

impl ConfigFormat {
    /// TOML for a `.toml` extension, JSON otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("toml") => ConfigFormat::Toml,
            _ => ConfigFormat::Json,
        }
    }
}

impl Config {
    pub fn parse(text: &str, format: ConfigFormat) -> Result<Self> {
        let cfg: Config = match format {
            ConfigFormat::Json => serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
            ConfigFormat::Toml => toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, ConfigFormat::from_path(path))
    }

    pub fn emit(&self, format: ConfigFormat) -> Result<String> {
        match format {
            ConfigFormat::Json => serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string())),
            ConfigFormat::Toml => toml::to_string(self).map_err(|e| Error::Config(e.to_string())),
        }
    }

    /// SHA-256 of the compact JSON form, in hex.
    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.to_scenario().map(|_| ())
    }

    pub fn engine_params(&self) -> Result<EngineParams> {
        let bath = |label, b: &BathConfig| BathSpectrum::new(label, b.temperature, b.profile);
        let baths = BathPair::new(
            bath(BathLabel::Hot, &self.baths.hot).map_err(as_config)?,
            bath(BathLabel::Cold, &self.baths.cold).map_err(as_config)?,
        );
        let s = &self.system;
        Ok(EngineParams::new(s.omega0, s.nu, s.g, s.fock_dim, baths)
            .map_err(as_config)?
            .with_halved_q1(s.halved_q1)
            .with_heat_hamiltonian(s.heat_hamiltonian))
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let params = self.engine_params()?;
        let r = &self.run;
        let scenario = Scenario {
            label: r.label.clone(),
            params,
            channel_override: self.piston_channel_override.map(|o| (o.gamma, o.diffusion)),
            initial: self.piston_initial,
            duration_cycles: r.duration_cycles,
            samples: r.samples,
            snapshots: r.snapshots.clone().unwrap_or_else(|| vec![0.0, r.duration_cycles]),
            grid: r.grid,
            mode: r.mode,
            limits: JointLimits {
                max_fock_dim: r.max_fock_dim,
                max_steps: r.max_steps,
            },
        };
        if let Some(g) = r.grid {
            GridSpec::new(g.alpha_max, g.points).map_err(as_config)?;
        }
        scenario.validate().map_err(as_config)?;
        Ok(scenario)
    }
}

/// A configuration value a sweep can vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    Omega0,
    Nu,
    G,
    FockDim,
    HotTemperature,
    ColdTemperature,
    Gamma,
    Diffusion,
    Alpha,
    DurationCycles,
}

impl SweepParameter {
    pub const NAMES: [&'static str; 10] = [
        "omega0", "nu", "g", "fock_dim", "t_hot", "t_cold", "gamma", "diffusion", "alpha", "duration_cycles",
    ];

    fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    /// A copy of `base` with this parameter set to `value`, validated.
    pub fn apply(self, base: &Config, value: f64) -> Result<Config> {
        let mut c = base.clone();
        match self {
            SweepParameter::Omega0 => c.system.omega0 = value,
            SweepParameter::Nu => c.system.nu = value,
            SweepParameter::G => c.system.g = value,
            SweepParameter::FockDim => {
                if !(value >= 0.0 && value.fract() == 0.0) {
                    return Err(Error::Config(format!("fock_dim must be an integer, got {value}")));
                }
                c.system.fock_dim = value as usize;
            }
            SweepParameter::HotTemperature => c.baths.hot.temperature = value,
            SweepParameter::ColdTemperature => c.baths.cold.temperature = value,
            SweepParameter::Gamma | SweepParameter::Diffusion => {
                let o = c.piston_channel_override.as_mut().ok_or_else(|| {
                    Error::Config(format!("sweeping {} needs piston_channel_override", self.name()))
                })?;
                if self == SweepParameter::Gamma {
                    o.gamma = value;
                } else {
                    o.diffusion = value;
                }
            }
            SweepParameter::Alpha => match &mut c.piston_initial {
                InitialState::Coherent { alpha_re, .. } | InitialState::DisplacedThermal { alpha_re, .. } => {
                    *alpha_re = value
                }
                _ => return Err(Error::Config("sweeping alpha needs a displaced initial state".into())),
            },
            SweepParameter::DurationCycles => c.run.duration_cycles = value,
        }
        c.run.label = format!("{}_{}={}", base.run.label, self.name(), value);
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use SweepParameter::*;
        let all = [Omega0, Nu, G, FockDim, HotTemperature, ColdTemperature, Gamma, Diffusion, Alpha, DurationCycles];
        all.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown sweep parameter '{s}', expected one of {}",
                Self::NAMES.join(", ")
            ))
        })
    }
}

/// `a,b,c` for a list or `start:stop:count` for evenly spaced values
/// including both ends.
pub fn parse_sweep_values(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse sweep values '{s}'"));
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        let (a, b) = (num(a)?, num(b)?);
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        match n {
            0 => return Err(bad()),
            1 => vec![a],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}
