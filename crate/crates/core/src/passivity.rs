//! Passive states, ergotropy, effective temperature and the extractable
//! power bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{
    displace, entropy_of_spectrum, hermitian_eig, number, CMatrix, DensityMatrix, Operator, C64,
};

/// Ergotropy values above -ERGOTROPY_FLOOR are clamped to zero.
pub const ERGOTROPY_FLOOR: f64 = 1e-10;
/// States with ergotropy at or below this count as passive.
pub const PASSIVE_TOL: f64 = 1e-9;
const BISECTION_TOL: f64 = 1e-10;
const BISECTION_MAX_ITER: usize = 200;

/// nu a^dag a on a truncated Fock space.
pub fn oscillator_hamiltonian(nu: f64, fock_dim: usize) -> Operator {
    number(fock_dim).scale(C64::new(nu, 0.0))
}

fn check_dims(rho: &DensityMatrix, h: &Operator) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: rho.dim(),
        });
    }
    Ok(())
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    // stable, so tied entries keep their order
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Eigenvalues of rho, largest first, placed on the eigenvectors of H,
/// lowest energy first.
pub fn passive_state(rho: &DensityMatrix, h: &Operator) -> Result<DensityMatrix> {
    check_dims(rho, h)?;
    let he = hermitian_eig(h)?;
    let p = sorted_desc(rho.eigenvalues());
    let v = &he.vectors;
    let n = rho.dim();
    let mut m = CMatrix::zeros(n, n);
    for (k, pk) in p.iter().enumerate() {
        let col = v.column(k);
        m += (col * col.adjoint()) * C64::new(*pk, 0.0);
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

fn clamp_ergotropy(w: f64) -> Result<f64> {
    if w < -ERGOTROPY_FLOOR {
        return Err(Error::InvalidState(format!("negative ergotropy {w:.3e}")));
    }
    Ok(w.max(0.0))
}

/// tr(rho H) - tr(passive(rho) H)
pub fn ergotropy(rho: &DensityMatrix, h: &Operator) -> Result<f64> {
    check_dims(rho, h)?;
    let energies = hermitian_eig(h)?.values;
    let p = sorted_desc(rho.eigenvalues());
    let passive: f64 = p.iter().zip(&energies).map(|(a, b)| a * b).sum();
    clamp_ergotropy(rho.expectation(h).re - passive)
}

/// Ergotropy of a number-diagonal state for H = nu a^dag a.
pub fn ergotropy_diagonal(pops: &[f64], nu: f64) -> Result<f64> {
    let energy: f64 = pops.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let passive: f64 = sorted_desc(pops.to_vec())
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum();
    clamp_ergotropy(nu * (energy - passive))
}

/// Entropy of the Gibbs distribution over `energies` at T > 0.
fn gibbs_entropy(energies: &[f64], t: f64) -> f64 {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut z = 0.0;
    let mut mean = 0.0;
    for &e in energies {
        let x = (e - e0) / t;
        let w = (-x).exp();
        z += w;
        mean += x * w;
    }
    // S = <(E - E0)/T> + ln Z
    mean / z + z.ln()
}

/// Smallest T with gibbs(T) >= s, by bisection, starting from `scale`.
fn bisect_temperature<F: Fn(f64) -> f64>(s: f64, s_max: f64, scale: f64, gibbs: F) -> Result<f64> {
    if s <= 1e-14 {
        return Ok(0.0);
    }
    if s > s_max - 1e-12 {
        return Err(Error::InvalidState(format!(
            "entropy {s} is not below the maximum ln(dim) = {s_max}"
        )));
    }
    let mut lo = 0.0;
    let mut hi = scale;
    while gibbs(hi) < s {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidState("effective temperature diverged".into()));
        }
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..BISECTION_MAX_ITER {
        mid = 0.5 * (lo + hi);
        let sm = gibbs(mid);
        if (sm - s).abs() <= BISECTION_TOL {
            break;
        }
        if sm < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// The temperature whose Gibbs state over `energies` has entropy `s`.
pub fn temperature_for_entropy(s: f64, energies: &[f64]) -> Result<f64> {
    let spread = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - energies.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = if spread > 0.0 { spread } else { 1.0 };
    bisect_temperature(s, (energies.len() as f64).ln(), scale, |t| gibbs_entropy(energies, t))
}

/// Same for the ladder nu k, k < levels, through the truncated geometric
/// closed form.
pub fn ladder_temperature_for_entropy(s: f64, nu: f64, levels: usize) -> Result<f64> {
    let kf = levels as f64;
    let gibbs = |t: f64| {
        let b = nu / t;
        let x = (-b).exp();
        let xk = (-b * kf).exp();
        let z = -(-b * kf).exp_m1() / -(-b).exp_m1();
        let mean = x / -(-b).exp_m1() - kf * xk / -(-b * kf).exp_m1();
        z.ln() + b * mean
    };
    bisect_temperature(s, kf.ln(), nu, gibbs)
}

/// Temperature of the Gibbs state on H's truncated spectrum whose entropy
/// matches S(rho).
pub fn effective_temperature(rho: &DensityMatrix, h: &Operator) -> Result<f64> {
    check_dims(rho, h)?;
    let energies = hermitian_eig(h)?.values;
    temperature_for_entropy(entropy_of_spectrum(&rho.eigenvalues()), &energies)
}

#[derive(Clone, Debug, Serialize)]
pub struct WorkReport {
    pub w_max: f64,
    #[serde(skip)]
    pub passive_state: DensityMatrix,
    pub t_p: f64,
    pub s_p: f64,
    pub energy: f64,
    pub is_passive: bool,
}

pub fn work_report(rho: &DensityMatrix, h: &Operator) -> Result<WorkReport> {
    let w_max = ergotropy(rho, h)?;
    Ok(WorkReport {
        w_max,
        passive_state: passive_state(rho, h)?,
        t_p: effective_temperature(rho, h)?,
        s_p: entropy_of_spectrum(&rho.eigenvalues()),
        energy: rho.expectation(h).re,
        is_passive: w_max <= PASSIVE_TOL,
    })
}

/// W_max(final) - W_max(initial); positive when work capacity accumulates.
pub fn delta_w_max(initial: &DensityMatrix, fin: &DensityMatrix, h: &Operator) -> Result<f64> {
    Ok(ergotropy(fin, h)? - ergotropy(initial, h)?)
}

/// d/dt of uniformly sampled data, second order everywhere.
pub fn derivative(values: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 samples for a derivative, got {n}"
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("sample spacing must be > 0, got {dt}")));
    }
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    }
    Ok(d)
}

/// d<H>/dt - T_P dS/dt from uniformly spaced energy, temperature and
/// entropy samples.
pub fn power_bound_series(dt: f64, energy: &[f64], t_p: &[f64], entropy: &[f64]) -> Result<Vec<f64>> {
    if energy.len() != t_p.len() || energy.len() != entropy.len() {
        return Err(Error::InvalidInput("power bound series lengths differ".into()));
    }
    let de = derivative(energy, dt)?;
    let ds = derivative(entropy, dt)?;
    Ok(de.iter().zip(&ds).zip(t_p).map(|((e, s), t)| e - t * s).collect())
}

/// Power bound along uniformly spaced snapshots of one piston state.
pub fn power_bound(snapshots: &[DensityMatrix], dt: f64, h: &Operator) -> Result<Vec<f64>> {
    if snapshots.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 snapshots, got {}",
            snapshots.len()
        )));
    }
    let mut energy = Vec::with_capacity(snapshots.len());
    let mut t_p = Vec::with_capacity(snapshots.len());
    let mut entropy = Vec::with_capacity(snapshots.len());
    for rho in snapshots {
        check_dims(rho, h)?;
        energy.push(rho.expectation(h).re);
        t_p.push(effective_temperature(rho, h)?);
        entropy.push(entropy_of_spectrum(&rho.eigenvalues()));
    }
    power_bound_series(dt, &energy, &t_p, &entropy)
}

/// Coherence injection D(alpha) rho D(alpha)^dag.
pub fn ignite(rho: &DensityMatrix, alpha: C64) -> Result<DensityMatrix> {
    displace(rho, alpha)
}

/// nu |alpha|^2 - 2 nu |alpha| sqrt(<n>): lower estimate of the ergotropy
/// gained by igniting a state with mean occupation `mean_n`.
pub fn ignition_gain_estimate(nu: f64, alpha: C64, mean_n: f64) -> f64 {
    nu * alpha.norm_sqr() - 2.0 * nu * alpha.norm() * mean_n.max(0.0).sqrt()
}
