use log::debug;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quantum::{CMatrix, DensityMatrix, TAIL_TOL};

use super::PistonChannel;

/// Largest Fock dimension `channel_propagate` will extend to.
pub const MAX_DENSE_DIM: usize = 1024;
/// RK4 step as a fraction of the inverse fastest band rate.
const STEP_SAFETY: f64 = 0.2;

/// One diagonal band rho_{m, m+d} of a phase-covariant evolution.
struct Band {
    d: usize,
    /// coefficient of x_{m+1} in dx_m/dt
    from_above: Vec<f64>,
    /// coefficient of x_{m-1} in dx_m/dt
    from_below: Vec<f64>,
    diag: Vec<f64>,
}

impl Band {
    fn new(n: usize, d: usize, kd: f64, ku: f64) -> Self {
        let len = n - d;
        // truncated a a^dag: m + 1 below the cutoff, 0 on the last level
        let aad = |m: usize| if m + 1 < n { (m + 1) as f64 } else { 0.0 };
        let mut from_above = vec![0.0; len];
        let mut from_below = vec![0.0; len];
        let mut diag = vec![0.0; len];
        for m in 0..len {
            let (mf, nf) = (m as f64, (m + d) as f64);
            if m + 1 < len {
                from_above[m] = kd * ((mf + 1.0) * (nf + 1.0)).sqrt();
            }
            if m > 0 {
                from_below[m] = ku * (mf * nf).sqrt();
            }
            diag[m] = -0.5 * kd * (mf + nf) - 0.5 * ku * (aad(m) + aad(m + d));
        }
        Self {
            d,
            from_above,
            from_below,
            diag,
        }
    }

    fn rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    fn apply(&self, x: &[C64], out: &mut [C64]) {
        let len = x.len();
        for m in 0..len {
            let mut v = x[m] * self.diag[m];
            if m + 1 < len {
                v += x[m + 1] * self.from_above[m];
            }
            if m > 0 {
                v += x[m - 1] * self.from_below[m];
            }
            out[m] = v;
        }
    }

    fn evolve(&self, x: &mut [C64], h: f64, steps: usize) {
        let len = x.len();
        let zero = C64::new(0.0, 0.0);
        let (mut k1, mut k2, mut k3, mut k4, mut s) =
            (vec![zero; len], vec![zero; len], vec![zero; len], vec![zero; len], vec![zero; len]);
        for _ in 0..steps {
            self.apply(x, &mut k1);
            for i in 0..len {
                s[i] = x[i] + k1[i] * (0.5 * h);
            }
            self.apply(&s, &mut k2);
            for i in 0..len {
                s[i] = x[i] + k2[i] * (0.5 * h);
            }
            self.apply(&s, &mut k3);
            for i in 0..len {
                s[i] = x[i] + k3[i] * h;
            }
            self.apply(&s, &mut k4);
            for i in 0..len {
                x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
        }
    }
}

fn estimate_dim(rho: &DensityMatrix, ch: &PistonChannel, t: f64) -> usize {
    let mean0: f64 = rho.populations().iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let n_max = mean0.max(ch.mean_occupation(t, mean0));
    let n_add = ch.added_noise(t).max(0.0);
    let spread = (n_max * (2.0 * n_add + 1.0) + 1.0).sqrt();
    (n_max + 10.0 * spread + 14.0 * (n_add + 1.0)).ceil() as usize + 10
}

fn evolve_on(rho: &DensityMatrix, ch: &PistonChannel, t: f64, n: usize) -> CMatrix {
    let src = rho.dim();
    let bands: Vec<Band> = (0..n).map(|d| Band::new(n, d, ch.kappa_down(), ch.kappa_up())).collect();
    let rate = bands.iter().map(Band::rate).fold(0.0, f64::max);
    let steps = if rate > 0.0 {
        ((t * rate / STEP_SAFETY).ceil() as usize).max(1)
    } else {
        1
    };
    let h = t / steps as f64;
    debug!("dense channel: N = {n}, {steps} steps of {h:.3e}");
    let mut out = CMatrix::zeros(n, n);
    for band in &bands {
        let d = band.d;
        let mut x: Vec<C64> = (0..n - d)
            .map(|m| if m + d < src { rho.get(m, m + d) } else { C64::new(0.0, 0.0) })
            .collect();
        if x.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        band.evolve(&mut x, h, steps);
        for (m, v) in x.into_iter().enumerate() {
            out[(m, m + d)] = v;
            out[(m + d, m)] = v.conj();
        }
    }
    out
}

/// Evolve a piston state under the channel for a time t.
///
/// The Fock cutoff is grown as needed; the returned state may therefore
/// be larger than the input. The evolution is phase covariant, so each
/// diagonal band rho_{m, m+d} is integrated on its own.
pub fn channel_propagate(rho: &DensityMatrix, ch: &PistonChannel, t: f64) -> Result<DensityMatrix> {
    ch.require_cp()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be finite and >= 0, got {t}")));
    }
    let mut n = rho.dim().max(estimate_dim(rho, ch, t));
    loop {
        if n > MAX_DENSE_DIM {
            return Err(Error::Truncation {
                fock_dim: MAX_DENSE_DIM,
                tail: 1.0,
                required: n,
            });
        }
        let out = evolve_on(rho, ch, t, n);
        let top = (n / 10).max(1);
        let tail: f64 = (n - top..n).map(|k| out[(k, k)].re).sum();
        if tail <= TAIL_TOL {
            return Ok(DensityMatrix::from_matrix_unchecked(out));
        }
        debug!("tail {tail:.3e} at N = {n}, extending");
        n *= 2;
    }
}
