use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{displaced_thermal, DensityMatrix};

use super::PistonChannel;

/// The displaced thermal state D(alpha) rho_th(n_th) D(alpha)^dag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPistonState {
    pub alpha: C64,
    pub n_th: f64,
}

/// Largest Fock dimension `to_density_auto` will try.
const MAX_MATERIALIZED_DIM: usize = 2048;

impl GaussianPistonState {
    pub fn new(alpha: C64, n_th: f64) -> Result<Self> {
        if !(n_th >= 0.0 && n_th.is_finite() && alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "Gaussian state needs finite alpha and n_th >= 0, got n_th = {n_th}"
            )));
        }
        Ok(Self { alpha, n_th })
    }

    pub fn coherent(alpha: C64) -> Self {
        Self { alpha, n_th: 0.0 }
    }

    pub fn thermal(n_th: f64) -> Result<Self> {
        Self::new(C64::new(0.0, 0.0), n_th)
    }

    /// |alpha|^2 + n_th
    pub fn mean_occupation(&self) -> f64 {
        self.alpha.norm_sqr() + self.n_th
    }

    /// Ergotropy for H = nu a^dag a: the displacement back to the origin
    /// reaches the passive thermal core, leaving nu |alpha|^2.
    pub fn ergotropy(&self, nu: f64) -> f64 {
        nu * self.alpha.norm_sqr()
    }

    /// Von Neumann entropy of the thermal core.
    pub fn entropy(&self) -> f64 {
        let n = self.n_th;
        if n <= 0.0 {
            0.0
        } else {
            (n + 1.0) * (n + 1.0).ln() - n * n.ln()
        }
    }

    /// Temperature of the thermal core for H = nu a^dag a.
    pub fn effective_temperature(&self, nu: f64) -> f64 {
        if self.n_th <= 0.0 {
            0.0
        } else {
            nu / (1.0 / self.n_th).ln_1p()
        }
    }

    /// A Fock cutoff that leaves well under 1e-6 of the state outside.
    pub fn suggested_fock_dim(&self) -> usize {
        let a2 = self.alpha.norm_sqr();
        let spread = (a2 * (2.0 * self.n_th + 1.0) + self.n_th * (self.n_th + 1.0)).sqrt();
        (a2 + self.n_th + 8.0 * spread + 14.0 * (self.n_th + 1.0) + 16.0).ceil() as usize
    }

    pub fn to_density(&self, fock_dim: usize) -> Result<DensityMatrix> {
        displaced_thermal(self.alpha, self.n_th, fock_dim)
    }

    /// Materialize on a cutoff grown until the truncation tail is admitted.
    pub fn to_density_auto(&self) -> Result<DensityMatrix> {
        let mut dim = self.suggested_fock_dim().max(8);
        loop {
            match self.to_density(dim) {
                Err(Error::Truncation { required, .. }) if dim < MAX_MATERIALIZED_DIM => {
                    dim = required.max(dim + dim / 2).min(MAX_MATERIALIZED_DIM);
                }
                other => return other,
            }
        }
    }
}

/// Exact evolution of the displaced thermal family:
/// alpha(t) = alpha e^{-gamma t/2}, n_th(t) = n_th e^{-gamma t} + (D/gamma)(1 - e^{-gamma t}).
///
/// The family stays physical for every D >= 0, including drift/diffusion
/// pairs whose operator channel is not completely positive.
pub fn gaussian_propagate(gs: GaussianPistonState, ch: &PistonChannel, t: f64) -> GaussianPistonState {
    GaussianPistonState {
        alpha: gs.alpha * (-0.5 * ch.gamma * t).exp(),
        n_th: ch.mean_occupation(t, gs.n_th),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_at_zero_time() {
        let ch = PistonChannel::new(0.2, 0.1, 1.0).unwrap();
        let gs = GaussianPistonState::new(C64::new(1.0, -0.5), 0.3).unwrap();
        assert_eq!(gaussian_propagate(gs, &ch, 0.0), gs);
    }

    #[test]
    fn thermal_fixed_point() {
        let ch = PistonChannel::new(0.2, 0.1, 1.0).unwrap();
        let gs = GaussianPistonState::thermal(0.5).unwrap();
        let out = gaussian_propagate(gs, &ch, 37.0);
        assert!((out.n_th - 0.5).abs() < 1e-15);
        assert_eq!(out.alpha, C64::new(0.0, 0.0));
    }

    #[test]
    fn thermodynamic_closed_forms() {
        let gs = GaussianPistonState::thermal(1.0).unwrap();
        assert!((gs.entropy() - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((gs.effective_temperature(1.0) - 1.0 / 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn materializes_with_matching_moments() {
        let gs = GaussianPistonState::new(C64::new(1.5, 0.5), 0.7).unwrap();
        let rho = gs.to_density_auto().unwrap();
        let mean: f64 = rho.populations().iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - gs.mean_occupation()).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn semigroup(
            gamma in -1e-3..1e-3f64, d in 0.0..1e-3f64, re in -3.0..3.0f64, im in -3.0..3.0f64,
            n in 0.0..5.0f64, t1 in 0.0..3000.0f64, t2 in 0.0..3000.0f64
        ) {
            let ch = PistonChannel::new(gamma, d, 1.0).unwrap();
            let gs = GaussianPistonState::new(C64::new(re, im), n).unwrap();
            let two = gaussian_propagate(gaussian_propagate(gs, &ch, t1), &ch, t2);
            let one = gaussian_propagate(gs, &ch, t1 + t2);
            let scale = 1.0 + one.n_th + one.alpha.norm();
            prop_assert!((two.alpha - one.alpha).norm() <= 1e-12 * scale);
            prop_assert!((two.n_th - one.n_th).abs() <= 1e-12 * scale);
            prop_assert!(one.n_th >= 0.0);
        }
    }
}
