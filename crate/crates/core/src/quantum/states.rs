//! Piston state constructors on a truncated Fock space.

use num_complex::Complex64 as C64;

use super::layout::annihilation;
use super::operator::{matrix_exponential_unitary, CMatrix, DensityMatrix, Operator};
use crate::error::{Error, Result};

/// Largest population allowed beyond the Fock cutoff.
pub const TAIL_TOL: f64 = 1e-6;

/// Upper bound on the Fock dimension any constructor will suggest.
const MAX_SUGGESTED_DIM: usize = 1 << 22;

fn check_tail(fock_dim: usize, tail: f64, required: usize) -> Result<()> {
    if tail > TAIL_TOL {
        return Err(Error::Truncation {
            fock_dim,
            tail,
            required,
        });
    }
    Ok(())
}

pub fn fock_state(n: usize, fock_dim: usize) -> Result<DensityMatrix> {
    if n >= fock_dim {
        return Err(Error::Truncation {
            fock_dim,
            tail: 1.0,
            required: n + 1,
        });
    }
    let mut p = vec![0.0; fock_dim];
    p[n] = 1.0;
    Ok(DensityMatrix::from_populations(&p))
}

/// ln(n!) for n = 0..len.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for n in 0..len {
        if n > 0 {
            acc += (n as f64).ln();
        }
        out.push(acc);
    }
    out
}

fn poisson_ln_pmf(n: usize, mean: f64, ln_fact: f64) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -mean + n as f64 * mean.ln() - ln_fact
}

/// Poisson population at and beyond `cutoff`, summed from the cutoff upward.
fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean == 0.0 {
        return if cutoff == 0 { 1.0 } else { 0.0 };
    }
    let mut ln_fact: f64 = (1..=cutoff).map(|k| (k as f64).ln()).sum();
    let mut total = 0.0;
    let mut n = cutoff;
    loop {
        let term = poisson_ln_pmf(n, mean, ln_fact).exp();
        total += term;
        if (n as f64) > mean && term < 1e-30 {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    total
}

fn poisson_required_dim(mean: f64) -> usize {
    let mut dim = (mean.floor() as usize).max(1);
    while poisson_tail(mean, dim) > TAIL_TOL && dim < MAX_SUGGESTED_DIM {
        dim += 1 + dim / 64;
    }
    dim
}

/// Normalized coherent amplitudes <n|alpha> for n < fock_dim (not renormalized).
pub fn coherent_amplitudes(alpha: C64, fock_dim: usize) -> Vec<C64> {
    let r2 = alpha.norm_sqr();
    let ln_r = alpha.norm().ln();
    let phase = alpha.arg();
    let lf = ln_factorials(fock_dim);
    (0..fock_dim)
        .map(|n| {
            if n == 0 {
                C64::new((-0.5 * r2).exp(), 0.0)
            } else if r2 == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                let mag = (-0.5 * r2 + n as f64 * ln_r - 0.5 * lf[n]).exp();
                C64::from_polar(mag, n as f64 * phase)
            }
        })
        .collect()
}

/// Coherent state |alpha>, renormalized after truncation.
pub fn coherent_state(alpha: C64, fock_dim: usize) -> Result<DensityMatrix> {
    let mean = alpha.norm_sqr();
    check_tail(fock_dim, poisson_tail(mean, fock_dim), poisson_required_dim(mean))?;
    let mut psi = coherent_amplitudes(alpha, fock_dim);
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    Ok(DensityMatrix::pure(&psi))
}

/// Geometric populations with mean `mean_occupation`, renormalized after
/// truncation to `fock_dim` levels.
pub fn thermal_populations(mean_occupation: f64, fock_dim: usize) -> Result<Vec<f64>> {
    if !(mean_occupation >= 0.0 && mean_occupation.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "mean occupation must be finite and >= 0, got {mean_occupation}"
        )));
    }
    if mean_occupation == 0.0 {
        let mut p = vec![0.0; fock_dim];
        p[0] = 1.0;
        return Ok(p);
    }
    let ratio = mean_occupation / (mean_occupation + 1.0);
    let tail = ratio.powi(fock_dim as i32);
    let required = ((TAIL_TOL.ln() / ratio.ln()).ceil() as usize).max(1);
    check_tail(fock_dim, tail, required)?;
    let norm = 1.0 - tail;
    Ok((0..fock_dim)
        .map(|k| (1.0 - ratio) * ratio.powi(k as i32) / norm)
        .collect())
}

pub fn thermal_state(mean_occupation: f64, fock_dim: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_populations(&thermal_populations(
        mean_occupation,
        fock_dim,
    )?))
}

/// exp(alpha a^dag - alpha^* a) built from the truncated ladder operators.
/// Exactly unitary on the truncated space, unlike [`displacement`].
pub fn truncated_displacement(alpha: C64, fock_dim: usize) -> Result<Operator> {
    let a = annihilation(fock_dim)?;
    let gen = &a.adjoint().scale(alpha) - &a.scale(alpha.conj());
    matrix_exponential_unitary(&gen)
}

/// Matrix elements <m|D(alpha)|n>, m, n < fock_dim, of the displacement
/// operator. The exponential is taken on a padded space so that entries
/// near the cutoff are not distorted by the truncated generator; the result
/// is unitary up to the population D(alpha) pushes past the cutoff.
pub fn displacement(alpha: C64, fock_dim: usize) -> Result<Operator> {
    let big = padded_dim(fock_dim, alpha, 0.0);
    let d = truncated_displacement(alpha, big)?;
    Ok(Operator::from_matrix(
        d.matrix().view((0, 0), (fock_dim, fock_dim)).into_owned(),
    ))
}

/// Working dimension used to displace states without boundary artifacts.
fn padded_dim(fock_dim: usize, alpha: C64, spread: f64) -> usize {
    let r = alpha.norm();
    fock_dim + 40 + (4.0 * (r + 1.0).powi(2) + 8.0 * spread).ceil() as usize
}

/// D(alpha) rho D(alpha)^dag, computed on a padded space and truncated back.
pub fn displace(rho: &DensityMatrix, alpha: C64) -> Result<DensityMatrix> {
    let n = rho.dim();
    let mean_n: f64 = rho
        .populations()
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum();
    let big = padded_dim(n, alpha, mean_n.max(0.0).sqrt());
    let mut padded = CMatrix::zeros(big, big);
    padded.view_mut((0, 0), (n, n)).copy_from(rho.matrix());
    let d = truncated_displacement(alpha, big)?;
    let moved = d.matrix() * padded * d.matrix().adjoint();
    truncate_padded(&moved, n)
}

fn truncate_padded(m: &CMatrix, fock_dim: usize) -> Result<DensityMatrix> {
    let big = m.nrows();
    let pops: Vec<f64> = (0..big).map(|k| m[(k, k)].re.max(0.0)).collect();
    let tail: f64 = pops[fock_dim..].iter().sum();
    if tail > TAIL_TOL {
        let mut acc = 0.0;
        let mut required = big;
        for k in (0..big).rev() {
            acc += pops[k];
            if acc > TAIL_TOL {
                required = k + 1;
                break;
            }
        }
        return Err(Error::Truncation {
            fock_dim,
            tail,
            required,
        });
    }
    let mut small = m.view((0, 0), (fock_dim, fock_dim)).into_owned();
    let tr = small.trace().re;
    small /= C64::new(tr, 0.0);
    let herm = (&small + small.adjoint()) * C64::new(0.5, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(herm))
}

/// Displaced thermal state D(alpha) rho_th(n_bar) D(alpha)^dag.
pub fn displaced_thermal(alpha: C64, mean_occupation: f64, fock_dim: usize) -> Result<DensityMatrix> {
    let spread = mean_occupation.max(0.0).sqrt();
    let big = padded_dim(fock_dim, alpha, spread + mean_occupation);
    let th_dim = (big - 10).max(2);
    let th = thermal_populations(mean_occupation, th_dim).map_err(|_| {
        Error::InvalidInput(format!(
            "thermal occupation {mean_occupation} too large for displaced construction"
        ))
    })?;
    let mut padded = CMatrix::zeros(big, big);
    for (k, p) in th.iter().enumerate() {
        padded[(k, k)] = C64::new(*p, 0.0);
    }
    let d = truncated_displacement(alpha, big)?;
    let moved = d.matrix() * padded * d.matrix().adjoint();
    truncate_padded(&moved, fock_dim)
}
