//! Reduced description of the piston: drift and diffusion, the equivalent
//! piston-only Lindblad channel, and three exact propagators for it.
//!
//! The Fokker-Planck drift gamma/2 and diffusion D are realized by
//!
//! ```text
//! d rho / dt = kappa_down D[a] rho + kappa_up D[a^dag] rho,
//! kappa_up = D,  kappa_down = gamma + D,
//! ```
//!
//! whose moments obey d<a>/dt = -(gamma/2)<a> and d<n>/dt = -gamma<n> + D.
//! The tests check both moment equations against every propagator.

mod dense;
mod diagonal;
mod gaussian;
mod phase_space;

pub use dense::{channel_propagate, MAX_DENSE_DIM};
pub use diagonal::{propagate_coherent_populations, propagate_populations};
pub use gaussian::{gaussian_propagate, GaussianPistonState};
pub use phase_space::{
    angle_averaged_q, quasiprobability_grid, quasiprobability_grid_gaussian,
    quasiprobability_grid_populations,
    radial_nonpassivity_indicator, GridSpec, QGrid, RadialIndicator,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint::{qubit_steady_state, EngineParams};

/// Below this |gamma t| the closed forms switch to their series.
pub const SERIES_THRESHOLD: f64 = 1e-8;
/// Slack on kappa_down >= 0 for channels derived in floating point.
const CP_SLACK: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PistonChannel {
    /// Drift rate; negative means gain.
    pub gamma: f64,
    /// Diffusion coefficient.
    pub diffusion: f64,
    pub nu: f64,
}

impl PistonChannel {
    /// Any finite gamma and D >= 0. The generator is completely positive
    /// only when gamma + D >= 0; see [`PistonChannel::require_cp`].
    pub fn new(gamma: f64, diffusion: f64, nu: f64) -> Result<Self> {
        if !(gamma.is_finite() && diffusion.is_finite() && nu.is_finite()) {
            return Err(Error::InvalidInput("channel parameters must be finite".into()));
        }
        if diffusion < 0.0 {
            return Err(Error::InvalidInput(format!(
                "diffusion must be >= 0, got {diffusion}"
            )));
        }
        if nu <= 0.0 {
            return Err(Error::InvalidInput(format!("nu must be > 0, got {nu}")));
        }
        Ok(Self {
            gamma,
            diffusion,
            nu,
        })
    }

    /// Channel of an engine with its qubit at the detailed-balance steady
    /// state. The printed drift and diffusion are scaled by the sideband
    /// rate factor so they describe the same generator the joint
    /// propagation integrates.
    pub fn from_engine(params: &EngineParams) -> Result<Self> {
        let steady = qubit_steady_state(params)?;
        let (gamma, diffusion) = drift_diffusion(params, steady)?;
        let f = params.q1_rate_factor();
        Self::new(f * gamma, f * diffusion, params.nu())
    }

    pub fn kappa_up(&self) -> f64 {
        self.diffusion
    }

    pub fn kappa_down(&self) -> f64 {
        self.gamma + self.diffusion
    }

    pub fn is_completely_positive(&self) -> bool {
        self.kappa_down() >= -CP_SLACK * self.gamma.abs().max(self.diffusion)
    }

    pub fn require_cp(&self) -> Result<()> {
        if self.is_completely_positive() {
            Ok(())
        } else {
            Err(Error::NotCompletelyPositive {
                kappa_down: self.kappa_down(),
            })
        }
    }

    /// Amplitude-squared gain e^{-gamma t}.
    pub fn gain(&self, t: f64) -> f64 {
        (-self.gamma * t).exp()
    }

    /// (1 - e^{-gamma t}) / gamma, with its t -> 0 series.
    fn relaxation_integral(&self, t: f64) -> f64 {
        let x = self.gamma * t;
        if x.abs() < SERIES_THRESHOLD {
            t * (1.0 - 0.5 * x + x * x / 6.0)
        } else {
            -(-x).exp_m1() / self.gamma
        }
    }

    /// Occupation a vacuum input acquires: (D/gamma)(1 - e^{-gamma t}).
    pub fn added_noise(&self, t: f64) -> f64 {
        self.diffusion * self.relaxation_integral(t)
    }

    /// <n(t)> = e^{-gamma t} <n(0)> + (D/gamma)(1 - e^{-gamma t})
    pub fn mean_occupation(&self, t: f64, n0: f64) -> f64 {
        self.gain(t) * n0 + self.added_noise(t)
    }

    /// Thermal occupation of the fixed point, when there is one.
    pub fn steady_occupation(&self) -> Option<f64> {
        (self.gamma > 0.0).then(|| self.diffusion / self.gamma)
    }
}

/// Drift and diffusion of the piston for qubit populations (rho00, rho11):
///
/// ```text
/// gamma = (g/nu)^2 [(G(nu+) - G(nu-)) rho11 + (G(-nu-) - G(-nu+)) rho00]
/// D     = (g/nu)^2 [G(nu-) rho11 + G(-nu+) rho00]
/// ```
pub fn drift_diffusion(params: &EngineParams, (rho00, rho11): (f64, f64)) -> Result<(f64, f64)> {
    if (rho00 + rho11 - 1.0).abs() > 1e-12 || rho00 < 0.0 || rho11 < 0.0 {
        return Err(Error::InvalidInput(format!(
            "qubit populations ({rho00}, {rho11}) are not a distribution"
        )));
    }
    let s = params.samples()?;
    let k = params.sideband_weight();
    let (up, down) = (s.upper.combined, s.lower.combined);
    let gamma = k * ((up.plus - down.plus) * rho11 + (down.minus - up.minus) * rho00);
    let diffusion = k * (down.plus * rho11 + up.minus * rho00);
    Ok((gamma, diffusion))
}

/// <H_P(t)> = nu <n(t)> for an initial energy e0 = nu <n(0)>.
pub fn mean_energy(t: f64, gamma: f64, diffusion: f64, e0: f64, nu: f64) -> f64 {
    let ch = PistonChannel {
        gamma,
        diffusion,
        nu,
    };
    nu * ch.mean_occupation(t, e0 / nu)
}
