//! Exact populations of number-diagonal states through the generating
//! function F(s) = sum_k p_k s^k.
//!
//! Under the channel, F_t(s) = F_0(w(s)) / (1 + n_add (1 - s)) with
//! w(s) = 1 - G (1 - s) / (1 + n_add (1 - s)), G = e^{-gamma t} and n_add
//! the occupation a vacuum input acquires. Sampling F_t on the M-th roots
//! of unity and transforming returns p_k up to aliasing from k >= M, which
//! the choice of M pushes below double precision.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

use super::PistonChannel;

/// Largest transform length.
const MAX_TRANSFORM: usize = 1 << 24;
/// Trailing populations summing to less than this are dropped.
const TRIM_TAIL: f64 = 1e-18;

fn transform_len(mean: f64, support: usize) -> Result<usize> {
    let want = (40.0 * mean + 200.0).ceil() as usize + 2 * support;
    let m = want.max(64).next_power_of_two();
    if m > MAX_TRANSFORM {
        return Err(Error::Truncation {
            fock_dim: MAX_TRANSFORM,
            tail: 1.0,
            required: m,
        });
    }
    Ok(m)
}

fn invert<F: Fn(C64) -> C64>(ch: &PistonChannel, t: f64, m: usize, f0: F) -> Result<Vec<f64>> {
    let g = ch.gain(t);
    let n_add = ch.added_noise(t);
    let mut values: Vec<C64> = (0..m)
        .map(|j| {
            let s = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
            let u = C64::new(1.0, 0.0) - s;
            let den = C64::new(1.0, 0.0) + u * n_add;
            let w = C64::new(1.0, 0.0) - u * g / den;
            f0(w) / den
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut values);
    let scale = 1.0 / m as f64;
    let mut pops = Vec::with_capacity(m);
    for z in values {
        let p = z.re * scale;
        if p < -1e-9 {
            return Err(Error::InvalidState(format!(
                "population {p:.3e} from the generating-function inversion"
            )));
        }
        pops.push(p.max(0.0));
    }
    let mut tail = 0.0;
    while let Some(&last) = pops.last() {
        if pops.len() <= 1 || tail + last >= TRIM_TAIL {
            break;
        }
        tail += last;
        pops.pop();
    }
    Ok(pops)
}

fn check_distribution(pops: &[f64]) -> Result<f64> {
    if pops.is_empty() || pops.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidState(
            "populations must be nonnegative and nonempty".into(),
        ));
    }
    let total: f64 = pops.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("populations sum to {total}")));
    }
    Ok(pops.iter().enumerate().map(|(k, p)| k as f64 * p).sum())
}

/// Populations at time t of a number-diagonal input.
///
/// Diagonal inputs are not closed under a channel that fails complete
/// positivity, so such channels are rejected here.
pub fn propagate_populations(pops: &[f64], ch: &PistonChannel, t: f64) -> Result<Vec<f64>> {
    ch.require_cp()?;
    let mean0 = check_distribution(pops)?;
    let mean = ch.mean_occupation(t, mean0).max(mean0);
    let m = transform_len(mean, pops.len())?;
    invert(ch, t, m, |w| {
        pops.iter().rev().fold(C64::new(0.0, 0.0), |acc, &p| acc * w + p)
    })
}

/// Populations at time t of the coherent input |alpha>, |alpha|^2 = `alpha_sq`.
/// Coherent inputs stay displaced thermal for any D >= 0.
pub fn propagate_coherent_populations(alpha_sq: f64, ch: &PistonChannel, t: f64) -> Result<Vec<f64>> {
    let mean = ch.mean_occupation(t, alpha_sq).max(alpha_sq);
    let m = transform_len(mean, 1)?;
    invert(ch, t, m, |w| ((w - 1.0) * alpha_sq).exp())
}
