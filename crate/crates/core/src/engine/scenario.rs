use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{GaussianPistonState, GridSpec, PistonChannel};
use crate::error::{Error, Result};
use crate::joint::EngineParams;
use crate::quantum::{fock_state, DensityMatrix, C64};

/// Initial piston state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Fock {
        n: usize,
    },
    Coherent {
        alpha_re: f64,
        #[serde(default)]
        alpha_im: f64,
    },
    Thermal {
        mean: f64,
    },
    DisplacedThermal {
        alpha_re: f64,
        #[serde(default)]
        alpha_im: f64,
        mean: f64,
    },
}

impl InitialState {
    pub fn coherent(alpha: f64) -> Self {
        InitialState::Coherent {
            alpha_re: alpha,
            alpha_im: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            InitialState::Fock { .. } => true,
            InitialState::Coherent { alpha_re, alpha_im } => alpha_re.is_finite() && alpha_im.is_finite(),
            InitialState::Thermal { mean } => mean >= 0.0 && mean.is_finite(),
            InitialState::DisplacedThermal { alpha_re, alpha_im, mean } => {
                alpha_re.is_finite() && alpha_im.is_finite() && mean >= 0.0 && mean.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid initial state {self}")))
        }
    }

    /// The displaced thermal form, or None for Fock states.
    pub fn gaussian(&self) -> Option<GaussianPistonState> {
        match *self {
            InitialState::Fock { .. } => None,
            InitialState::Coherent { alpha_re, alpha_im } => {
                Some(GaussianPistonState::coherent(C64::new(alpha_re, alpha_im)))
            }
            InitialState::Thermal { mean } => Some(GaussianPistonState {
                alpha: C64::new(0.0, 0.0),
                n_th: mean,
            }),
            InitialState::DisplacedThermal { alpha_re, alpha_im, mean } => Some(GaussianPistonState {
                alpha: C64::new(alpha_re, alpha_im),
                n_th: mean,
            }),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.gaussian().map_or(C64::new(0.0, 0.0), |g| g.alpha)
    }

    pub fn mean_occupation(&self) -> f64 {
        match self {
            InitialState::Fock { n } => *n as f64,
            _ => self.gaussian().map_or(0.0, |g| g.mean_occupation()),
        }
    }

    pub fn density(&self, fock_dim: usize) -> Result<DensityMatrix> {
        match (self, self.gaussian()) {
            (InitialState::Fock { n }, _) => fock_state(*n, fock_dim),
            (_, Some(g)) => g.to_density(fock_dim),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InitialState::Fock { n } => write!(f, "fock:{n}"),
            InitialState::Coherent { alpha_re, alpha_im } if alpha_im == 0.0 => write!(f, "coherent:{alpha_re}"),
            InitialState::Coherent { alpha_re, alpha_im } => write!(f, "coherent:{alpha_re},{alpha_im}"),
            InitialState::Thermal { mean } => write!(f, "thermal:{mean}"),
            InitialState::DisplacedThermal { alpha_re, alpha_im, mean } => {
                write!(f, "displaced_thermal:{alpha_re},{alpha_im},{mean}")
            }
        }
    }
}

/// `fock:3`, `coherent:2.0`, `coherent:1.0,0.5`, `thermal:1.5`,
/// `displaced_thermal:re,mean` or `displaced_thermal:re,im,mean`.
impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse state spec '{s}'"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let state = match (kind.trim(), nums.as_slice()) {
            ("fock", [n]) if *n >= 0.0 && n.fract() == 0.0 => InitialState::Fock { n: *n as usize },
            ("coherent", [re]) => InitialState::coherent(*re),
            ("coherent", [re, im]) => InitialState::Coherent {
                alpha_re: *re,
                alpha_im: *im,
            },
            ("thermal", [mean]) => InitialState::Thermal { mean: *mean },
            ("displaced_thermal", [re, mean]) => InitialState::DisplacedThermal {
                alpha_re: *re,
                alpha_im: 0.0,
                mean: *mean,
            },
            ("displaced_thermal", [re, im, mean]) => InitialState::DisplacedThermal {
                alpha_re: *re,
                alpha_im: *im,
                mean: *mean,
            },
            _ => return Err(bad()),
        };
        state.validate()?;
        Ok(state)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineMode {
    /// Evolve the piston alone under the drift-diffusion channel.
    #[default]
    ReducedChannel,
    /// Evolve qubit and piston under the dressed master equation.
    FullJoint,
    /// Both, with cross-validation deltas.
    Both,
}

impl EngineMode {
    pub fn runs_reduced(self) -> bool {
        self != EngineMode::FullJoint
    }

    pub fn runs_joint(self) -> bool {
        self != EngineMode::ReducedChannel
    }
}

/// Caps on the cost of a full-joint run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointLimits {
    pub max_fock_dim: usize,
    pub max_steps: usize,
}

impl Default for JointLimits {
    fn default() -> Self {
        Self {
            max_fock_dim: 64,
            max_steps: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub label: String,
    pub params: EngineParams,
    /// Direct (gamma, D) replacing the derived channel in reduced runs.
    pub channel_override: Option<(f64, f64)>,
    pub initial: InitialState,
    pub duration_cycles: f64,
    /// Number of uniform intervals; rows = samples + 1.
    pub samples: usize,
    /// Times in cycles at which Q-function grids are taken.
    pub snapshots: Vec<f64>,
    /// Grid for the Q functions; chosen from the state size when None.
    pub grid: Option<GridSpec>,
    pub mode: EngineMode,
    pub limits: JointLimits,
}

impl Scenario {
    /// A reduced-channel scenario with the default schedule: 200 intervals
    /// and grids at the start and end.
    pub fn new(label: &str, params: EngineParams, initial: InitialState, duration_cycles: f64) -> Self {
        Self {
            label: label.to_string(),
            params,
            channel_override: None,
            initial,
            duration_cycles,
            samples: 200,
            snapshots: vec![0.0, duration_cycles],
            grid: None,
            mode: EngineMode::ReducedChannel,
            limits: JointLimits::default(),
        }
    }

    pub fn with_override(mut self, gamma: f64, diffusion: f64) -> Self {
        self.channel_override = Some((gamma, diffusion));
        self
    }

    pub fn with_mode(mut self, mode: EngineMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_snapshots(mut self, snapshots: Vec<f64>) -> Self {
        self.snapshots = snapshots;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.initial.validate()?;
        if !(self.duration_cycles > 0.0 && self.duration_cycles.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "duration must be > 0 cycles, got {}",
                self.duration_cycles
            )));
        }
        if self.samples < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 sample intervals, got {}",
                self.samples
            )));
        }
        if let Some(&bad) = self
            .snapshots
            .iter()
            .find(|&&c| !(c >= 0.0 && c <= self.duration_cycles))
        {
            return Err(Error::InvalidInput(format!(
                "snapshot at {bad} cycles lies outside [0, {}]",
                self.duration_cycles
            )));
        }
        if self.channel_override.is_some() && self.mode.runs_joint() {
            return Err(Error::InvalidInput(
                "piston_channel_override applies to reduced_channel mode only".into(),
            ));
        }
        if let Some((gamma, diffusion)) = self.channel_override {
            PistonChannel::new(gamma, diffusion, self.params.nu())?;
        }
        if self.mode.runs_joint() && self.params.fock_dim() > self.limits.max_fock_dim {
            return Err(Error::InvalidInput(format!(
                "full-joint Fock dimension {} exceeds the cap {}",
                self.params.fock_dim(),
                self.limits.max_fock_dim
            )));
        }
        Ok(())
    }

    /// The channel the reduced engine runs.
    pub fn channel(&self) -> Result<PistonChannel> {
        match self.channel_override {
            Some((gamma, diffusion)) => PistonChannel::new(gamma, diffusion, self.params.nu()),
            None => PistonChannel::from_engine(&self.params),
        }
    }

    pub fn duration(&self) -> f64 {
        self.params.time_of_cycles(self.duration_cycles)
    }

    /// Uniform sample times in cycles.
    pub fn sample_cycles(&self) -> Vec<f64> {
        (0..=self.samples)
            .map(|i| self.duration_cycles * i as f64 / self.samples as f64)
            .collect()
    }
}
