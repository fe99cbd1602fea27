use serde::{Deserialize, Serialize};

use crate::bath::{BathPair, SpectralSamples};
use crate::error::{Error, Result};

/// Largest admitted g / nu.
pub const MAX_COUPLING_RATIO: f64 = 0.1;
/// Smallest admitted Fock truncation for joint runs.
pub const MIN_JOINT_FOCK_DIM: usize = 20;

/// Which Hamiltonian the heat currents are measured against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeatHamiltonian {
    /// Qubit plus piston in dressed variables, H_S + nu b^dag b. Equal to
    /// the full Hamiltonian up to the constant g^2 / nu.
    #[default]
    Dressed,
    /// Bare H_S + nu a^dag a, dropping the interaction term.
    Bare,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineParams {
    omega0: f64,
    nu: f64,
    g: f64,
    fock_dim: usize,
    baths: BathPair,
    halved_q1: bool,
    heat_hamiltonian: HeatHamiltonian,
}

impl EngineParams {
    pub fn new(omega0: f64, nu: f64, g: f64, fock_dim: usize, baths: BathPair) -> Result<Self> {
        if !(omega0.is_finite() && nu.is_finite() && g.is_finite()) {
            return Err(Error::InvalidInput("frequencies must be finite".into()));
        }
        if nu <= 0.0 {
            return Err(Error::InvalidInput(format!("nu must be > 0, got {nu}")));
        }
        if nu >= omega0 {
            return Err(Error::InvalidInput(format!(
                "nu must be < omega0, got nu = {nu}, omega0 = {omega0}"
            )));
        }
        if g < 0.0 || g / nu > MAX_COUPLING_RATIO {
            return Err(Error::InvalidInput(format!(
                "need 0 <= g/nu <= {MAX_COUPLING_RATIO}, got {}",
                g / nu
            )));
        }
        if fock_dim < MIN_JOINT_FOCK_DIM {
            return Err(Error::InvalidInput(format!(
                "Fock dimension must be >= {MIN_JOINT_FOCK_DIM}, got {fock_dim}"
            )));
        }
        let params = Self {
            omega0,
            nu,
            g,
            fock_dim,
            baths,
            halved_q1: false,
            heat_hamiltonian: HeatHamiltonian::Dressed,
        };
        if !params.samples()?.all_finite() {
            return Err(Error::InvalidInput(
                "bath response is not finite at a required frequency".into(),
            ));
        }
        Ok(params)
    }

    pub fn with_halved_q1(mut self, halved: bool) -> Self {
        self.halved_q1 = halved;
        self
    }

    pub fn with_heat_hamiltonian(mut self, h: HeatHamiltonian) -> Self {
        self.heat_hamiltonian = h;
        self
    }

    pub fn with_fock_dim(&self, fock_dim: usize) -> Result<Self> {
        Ok(Self::new(self.omega0, self.nu, self.g, fock_dim, self.baths)?
            .with_halved_q1(self.halved_q1)
            .with_heat_hamiltonian(self.heat_hamiltonian))
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn baths(&self) -> &BathPair {
        &self.baths
    }

    pub fn halved_q1(&self) -> bool {
        self.halved_q1
    }

    pub fn heat_hamiltonian(&self) -> HeatHamiltonian {
        self.heat_hamiltonian
    }

    /// g / nu
    pub fn coupling_ratio(&self) -> f64 {
        self.g / self.nu
    }

    /// (g / nu)^2, the weight of the sideband generators.
    pub fn sideband_weight(&self) -> f64 {
        self.coupling_ratio().powi(2)
    }

    /// Coefficient multiplying (g/nu)^2 G D[L] in the sideband blocks.
    ///
    /// The double commutator [L rho, L^dag] + [L, rho L^dag] equals 2 D[L].
    /// The zero-harmonic block carries an explicit 1/2 and the sideband
    /// blocks do not, so the default factor is 2; `halved_q1` gives 1.
    pub fn q1_rate_factor(&self) -> f64 {
        if self.halved_q1 {
            1.0
        } else {
            2.0
        }
    }

    pub fn samples(&self) -> Result<SpectralSamples> {
        SpectralSamples::new(&self.baths, self.omega0, self.nu)
    }

    pub fn nu_plus(&self) -> f64 {
        self.omega0 + self.nu
    }

    pub fn nu_minus(&self) -> f64 {
        self.omega0 - self.nu
    }

    /// Convert a time in natural units to piston cycles.
    pub fn cycles(&self, t: f64) -> f64 {
        self.nu * t / std::f64::consts::TAU
    }

    /// Convert piston cycles to a time in natural units.
    pub fn time_of_cycles(&self, cycles: f64) -> f64 {
        cycles * std::f64::consts::TAU / self.nu
    }
}
